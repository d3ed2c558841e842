#include <linux/slab.h>
#include <linux/sched.h>

struct sd_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int sd_limit = 48;

int sd_init(struct sd_state *s)
{
	s->table = kmalloc(sizeof(int) * 48, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int sd_add(struct sd_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= sd_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void sd_exit(struct sd_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

