#include <linux/slab.h>
#include <linux/sched.h>

struct fork_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int fork_limit = 96;

int fork_init(struct fork_state *s)
{
	s->table = kmalloc(sizeof(int) * 96, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int fork_add(struct fork_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= fork_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void fork_exit(struct fork_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

