"""Run the checkers over a few hand-written kernel-style functions.

    python3 demos/01_checkers_on_a_snippet.py
"""

from kernscan.checkers import check_models
from kernscan.cmodel import model_file

SOURCE = """\
static DEFINE_SPINLOCK(dev_lock);

int wait_for_it(struct dev *d)
{
	schedule();
	return 0;
}

int poke(struct dev *d)
{
	spin_lock(&dev_lock);
	wait_for_it(d);
	spin_unlock(&dev_lock);
	return 0;
}

int peek(struct dev *d)
{
	char *buf = kmalloc(64, GFP_KERNEL);
	buf[0] = 1;
	kfree(buf);
	return buf[1];
}
"""

models = model_file(SOURCE, "drivers/demo.c")
print("functions:", ", ".join(m.name for m in models))

result = check_models(models)
print("\nblocking functions and how they were found:")
for name, prov in sorted(result.closures.blocking.provenance.items()):
    print(f"  {name:12} {prov}")

print("\nreports:")
for r in result.reports:
    print(f"  {r.file}:{r.line} {r.checker:8} in {r.fn}: {r.msg or r.key}")

print("\nnotes per checker (places a fault of that kind could occur):")
counts = {}
for n in result.notes:
    counts[n.checker] = counts.get(n.checker, 0) + 1
for kind, c in sorted(counts.items()):
    print(f"  {kind:8} {c}")
