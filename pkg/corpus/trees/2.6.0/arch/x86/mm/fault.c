#include <linux/slab.h>
#include <linux/sched.h>

struct x86_fault_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int x86_fault_limit = 24;

int x86_fault_init(struct x86_fault_state *s)
{
	s->table = kmalloc(sizeof(int) * 24, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int x86_fault_add(struct x86_fault_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= x86_fault_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void x86_fault_exit(struct x86_fault_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

