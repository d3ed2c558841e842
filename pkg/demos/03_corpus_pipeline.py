"""Check, correlate, triage and summarise the bundled three-version corpus.

    python3 demos/03_corpus_pipeline.py [DB_DIR]

Uses the same commands as the ``kernscan`` script, driven in-process.
"""

import csv
import os
import sys
import tempfile

from kernscan.cli import run

HERE = os.path.dirname(os.path.abspath(__file__))
CORPUS = os.path.join(os.path.dirname(HERE), "corpus")

db = sys.argv[1] if len(sys.argv) > 1 else tempfile.mkdtemp(prefix="kernscan-")


def step(*argv):
    code = run(list(argv), {})
    if code:
        sys.exit(f"{argv[0]} failed with exit code {code}")


step("check", "--manifest", os.path.join(CORPUS, "manifest.json"), "--out", db, "--jobs", "1")
step("correlate", "--db", db)

sheet = os.path.join(db, "worksheet.txt")
with open(sheet) as fh:
    text = fh.read()
blocks = [b for b in text.split("\n\n") if b.strip()]
print(f"worksheet holds {len(blocks)} undecided groups; the first two:\n")
print("\n\n".join(blocks[:2]) + "\n")

# pretend a reviewer looked at every undecided link and confirmed it
decided = os.path.join(db, "decided.txt")
with open(decided, "w") as fh:
    fh.write(text.replace("status = unknown", "status = fault"))
step("triage", "apply", "--db", db, "--worksheet", decided)

step("stats", "survival", "--db", db)
step("report", "--db", db)

with open(os.path.join(db, "report", "introduced_eliminated.csv")) as fh:
    print("faults per version:")
    for row in csv.DictReader(fh):
        print(f"  {row['version']:6} faults={row['faults']:>3} "
              f"introduced={row['introduced']:>3} eliminated={row['eliminated']:>3}")

print("\ntables written under", os.path.join(db, "report"))
