#include <linux/slab.h>
#include <linux/sched.h>

struct sock_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int sock_limit = 120;

int sock_init(struct sock_state *s)
{
	s->table = kmalloc(sizeof(int) * 120, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int sock_add(struct sock_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= sock_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void sock_exit(struct sock_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

