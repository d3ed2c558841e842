#include <linux/netdevice.h>

int dev_open(struct net_device *dev)
{
	if (!dev) { /* plant: TP IsNull #is1 */
		printk("dev_open: %s\n", dev->name);
		return -ENODEV;
	}
	dev->flags = 1;
	return 0;
}

int dev_close(struct net_device *dev)
{
	if (dev != NULL) /* plant: NM IsNull */
		dev->flags = 0;
	return 0;
}

int dev_ioctl(struct net_device *dev, int cmd)
{
	int n = dev->flags;

	if (!dev) /* plant: TP NullRef #nr1 */
		return -ENODEV;
	return n + cmd;
}

int dev_set_mtu(struct net_device *dev, int mtu)
{
	if (!dev) /* plant: NM NullRef */
		return -ENODEV;
	dev->flags = mtu;
	return 0;
}
