#include <linux/sched.h>

struct irq_desc {
	spinlock_t lock;
	int depth;
	int status;
};


int disable_irq(struct irq_desc *desc)
{
	unsigned long flags;

	spin_lock_irqsave(&desc->lock, flags); /* plant: TP LockIntr #li1 */
	if (desc->depth < 0)
		return -EINVAL;
	desc->depth++;
	spin_unlock_irqrestore(&desc->lock, flags);
	return 0;
}

int enable_irq(struct irq_desc *desc)
{
	unsigned long flags;

	spin_lock_irqsave(&desc->lock, flags); /* plant: NM LockIntr */
	desc->depth--;
	spin_unlock_irqrestore(&desc->lock, flags);
	return 0;
}

