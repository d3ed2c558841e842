#include <linux/slab.h>
#include <linux/sched.h>

struct nfs_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int nfs_limit = 72;

int nfs_init(struct nfs_state *s)
{
	s->table = kmalloc(sizeof(int) * 72, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int nfs_add(struct nfs_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= nfs_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void nfs_exit(struct nfs_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

