"""Drive the whole command line pipeline over the shipped corpus."""

import hashlib
import os

from kernscan.cli import run

HERE = os.path.dirname(os.path.abspath(__file__))
CORPUS = os.path.join(os.path.dirname(HERE), "corpus")
MANIFEST = os.path.join(CORPUS, "manifest.json")
COMMITS = os.path.join(CORPUS, "commits.log")

STAT_RUNS = [
    ["rate"], ["relative"], ["buckets"], ["buckets", "--strategy", "log_halving", "--buckets", "3"],
    ["buckets", "--key", "age"], ["logseries"], ["survival"], ["survival", "--censor", "ignore_first_version"],
    ["survival", "--censor", "min_bound", "--bands"], ["survival", "--censor", "max_bound"],
    ["churn", "--commits", COMMITS, "--packet", "2"], ["commitment", "--commits", COMMITS], ["pearson"],
]


def ok(argv, env=None):
    code = run(argv, env or {})
    assert code == 0, (argv, code)


def full_pipeline(db, jobs=1, env=None):
    ok(["check", "--manifest", MANIFEST, "--out", db, "--jobs", str(jobs)], env)
    ok(["correlate", "--db", db], env)
    sheet = os.path.join(db, "worksheet.txt")
    with open(sheet, encoding="utf-8") as fh:
        text = fh.read()
    edited = os.path.join(db, "worksheet.edited.txt")
    with open(edited, "w", encoding="utf-8") as fh:
        fh.write(text.replace("status = unknown", "status = fault"))
    ok(["triage", "apply", "--db", db, "--worksheet", edited], env)
    for extra in STAT_RUNS:
        ok(["stats", extra[0], "--db", db] + extra[1:], env)
    ok(["report", "--db", db], env)


def tree_digest(root):
    """Relative path -> sha1 of every file below *root*."""
    out = {}
    for dirpath, dirnames, filenames in os.walk(root):
        dirnames.sort()
        for name in sorted(filenames):
            p = os.path.join(dirpath, name)
            with open(p, "rb") as fh:
                out[os.path.relpath(p, root)] = hashlib.sha1(fh.read()).hexdigest()
    return out
