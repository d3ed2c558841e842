#include <linux/slab.h>
#include <linux/sched.h>

struct hub_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int hub_limit = 64;

int hub_init(struct hub_state *s)
{
	s->table = kmalloc(sizeof(int) * 64, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int hub_add(struct hub_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= hub_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void hub_exit(struct hub_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

