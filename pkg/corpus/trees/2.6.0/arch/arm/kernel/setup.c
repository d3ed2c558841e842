#include <linux/slab.h>
#include <linux/sched.h>

struct arm_setup_state {
	spinlock_t lock;
	int count;
	int *table;
};

static int arm_setup_limit = 16;

int arm_setup_init(struct arm_setup_state *s)
{
	s->table = kmalloc(sizeof(int) * 16, GFP_KERNEL);
	if (!s->table)
		return -ENOMEM;
	s->count = 0;
	return 0;
}

int arm_setup_add(struct arm_setup_state *s, int v)
{
	int ret = 0;

	spin_lock(&s->lock);
	if (s->count >= arm_setup_limit) {
		ret = -EBUSY;
		goto out;
	}
	s->table[s->count] = v;
	s->count++;
out:
	spin_unlock(&s->lock);
	return ret;
}

void arm_setup_exit(struct arm_setup_state *s)
{
	kfree(s->table);
	s->table = NULL;
}

