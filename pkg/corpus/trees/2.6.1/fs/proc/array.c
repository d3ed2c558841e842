#include <linux/slab.h>
#include <linux/sched.h>

struct proc_array_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int proc_array_limit = 80;

int proc_array_init(struct proc_array_state *s)
{
	s->table = kmalloc(sizeof(int) * 80, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int proc_array_add(struct proc_array_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= proc_array_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void proc_array_exit(struct proc_array_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

