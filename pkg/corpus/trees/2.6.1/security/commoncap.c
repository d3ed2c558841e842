#include <linux/slab.h>
#include <linux/sched.h>

struct cap_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int cap_limit = 136;

int cap_init(struct cap_state *s)
{
	s->table = kmalloc(sizeof(int) * 136, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int cap_add(struct cap_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= cap_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void cap_exit(struct cap_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

