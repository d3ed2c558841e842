#include <linux/slab.h>
#include <linux/sched.h>

struct loop_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int loop_limit = 32;

int loop_init(struct loop_state *s)
{
	s->table = kmalloc(sizeof(int) * 32, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int loop_add(struct loop_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= loop_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void loop_exit(struct loop_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

