#include <linux/slab.h>
#include <linux/sched.h>

struct timer_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int timer_limit = 104;

int timer_init(struct timer_state *s)
{
	s->table = kmalloc(sizeof(int) * 104, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int timer_add(struct timer_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= timer_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void timer_exit(struct timer_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

