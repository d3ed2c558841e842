#include <linux/slab.h>
#include <linux/sched.h>

struct tcp_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int tcp_limit = 128;

int tcp_init(struct tcp_state *s)
{
	s->table = kmalloc(sizeof(int) * 128, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int tcp_add(struct tcp_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= tcp_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void tcp_exit(struct tcp_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

