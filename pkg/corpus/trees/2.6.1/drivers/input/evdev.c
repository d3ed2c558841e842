#include <linux/slab.h>
#include <linux/sched.h>

struct evdev_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int evdev_limit = 40;

int evdev_init(struct evdev_state *s)
{
	s->table = kmalloc(sizeof(int) * 40, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int evdev_add(struct evdev_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= evdev_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void evdev_exit(struct evdev_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

