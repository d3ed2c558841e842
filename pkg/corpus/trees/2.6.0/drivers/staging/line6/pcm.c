#include <linux/slab.h>
#include <linux/sched.h>

struct line6_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int line6_limit = 56;

int line6_init(struct line6_state *s)
{
	s->table = kmalloc(sizeof(int) * 56, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int line6_add(struct line6_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= line6_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void line6_exit(struct line6_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

