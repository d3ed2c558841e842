#include <linux/slab.h>
#include <linux/sched.h>

struct mmap_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int mmap_limit = 112;

int mmap_init(struct mmap_state *s)
{
	s->table = kmalloc(sizeof(int) * 112, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int mmap_add(struct mmap_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= mmap_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void mmap_exit(struct mmap_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

