#include <linux/slab.h>
#include <linux/sched.h>

struct ac97_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int ac97_limit = 144;

int ac97_init(struct ac97_state *s)
{
	s->table = kmalloc(sizeof(int) * 144, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int ac97_add(struct ac97_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= ac97_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void ac97_exit(struct ac97_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

