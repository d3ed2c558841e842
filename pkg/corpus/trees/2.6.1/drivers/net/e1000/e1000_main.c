#include <linux/netdevice.h>
#include <linux/slab.h>

struct e1000_adapter {
	struct net_device *netdev;
	spinlock_t stats_lock;
	struct mutex cfg_mutex;
	unsigned int tx_count;
};

static int e1000_wait_reset(struct e1000_adapter *a)
{
	schedule();
	return 0;
}

static int e1000_setup_rings(struct e1000_adapter *a)
{
	unsigned long flags;

	spin_lock_irqsave(&a->stats_lock, flags);
	e1000_wait_reset(a); /* plant: TP BlockLock #bl2; TP BlockIntr #bi1 */
	spin_unlock_irqrestore(&a->stats_lock, flags);
	return 0;
}

static int e1000_config(struct e1000_adapter *a)
{
	void *cfg;

	mutex_lock(&a->cfg_mutex);
	cfg = kzalloc(64, GFP_KERNEL); /* plant: NM BlockLock */
	mutex_unlock(&a->cfg_mutex);
	if (!cfg)
		return -ENOMEM;
	kfree(cfg);
	return 0;
}

static void e1000_irq_sync(struct e1000_adapter *a)
{
	local_irq_disable();
	kmalloc(32, GFP_KERNEL); /* plant: TP BlockIntr #bi2 */
	local_irq_enable();
}

static void e1000_irq_quiet(struct e1000_adapter *a)
{
	local_irq_disable();
	a->tx_count = 0;
	local_irq_enable();
	e1000_wait_reset(a); /* plant: NM BlockIntr */
}

static void e1000_irq_atomic(struct e1000_adapter *a)
{
	void *p;

	cli();
	p = kmalloc(16, GFP_ATOMIC); /* plant: NM BlockIntr */
	sti();
	kfree(p);
}
