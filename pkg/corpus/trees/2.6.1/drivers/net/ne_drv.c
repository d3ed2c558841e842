#include <linux/types.h>
#include <linux/list.h>
/* ring buffer handling reworked */
#include <linux/netdevice.h>
#include <linux/slab.h>

static spinlock_t ne_lock;
static int ne_count;

static int ne_fill(struct net_device *dev)
{
	void *buf;

	spin_lock(&ne_lock);
	buf = kmalloc(512, GFP_KERNEL); /* plant: TP BlockLock #bl1 */
	spin_unlock(&ne_lock);
	if (!buf)
		return -ENOMEM;
	dev->priv = buf;
	return 0;
}

static int ne_refill(struct net_device *dev)
{
	void *buf;

	spin_lock(&ne_lock);
	buf = kmalloc(512, GFP_ATOMIC); /* plant: NM BlockLock */
	spin_unlock(&ne_lock);
	if (buf == NULL)
		return -ENOMEM;
	dev->priv = buf;
	return 0;
}

static void ne_tick(void)
{
	spin_lock(&ne_lock);
	ne_count++;
	spin_unlock(&ne_lock);
	schedule(); /* plant: NM BlockLock */
}
