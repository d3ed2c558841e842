#include <linux/slab.h>
#include <linux/sched.h>

struct msg_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int msg_limit = 88;

int msg_init(struct msg_state *s)
{
	s->table = kmalloc(sizeof(int) * 88, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int msg_add(struct msg_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= msg_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void msg_exit(struct msg_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

