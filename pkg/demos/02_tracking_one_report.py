"""Follow a single report as the code around it is edited.

    python3 demos/02_tracking_one_report.py
"""

from kernscan.checkers import Report
from kernscan.history.correlate import correlate
from kernscan.history.diff import diff_files

old_text = "a\nb\nc\nfault here\nd\n"
new_text = "a\ninserted one\ninserted two\nb\nc\nfault here\nd\n"

old = [Report("x.c", 4, "Null", "p", "f")]
new = [Report("x.c", 6, "Null", "p", "f")]

hunks = {"x.c": diff_files(old_text, new_text)}
print("hunks:", hunks["x.c"])
links, births = correlate(old, new, hunks)
for c in links:
    where = f"line {c.new.line}" if c.new else "nowhere"
    print(f"old line {c.old.line} -> {where} ({c.mode})")
print("births:", births)

# now the line itself is edited, so the match needs a human decision
edited = new_text.replace("fault here", "fault here, reworded")
links, births = correlate(old, new, {"x.c": diff_files(old_text, edited)})
print("\nafter rewording the line:", [(c.mode, c.candidates) for c in links])
