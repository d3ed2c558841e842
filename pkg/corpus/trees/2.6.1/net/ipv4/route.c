#include <linux/netdevice.h>

struct rtable {
	struct net_device *dst;
	int hash;
};

static struct rtable rt_table[256];

static struct rtable *rt_cache_lookup(int key)
{
	if (key < 0 || key > 255)
		return NULL;
	return &rt_table[key];
}


int ip_route_output(struct net_device *dev, int key)
{
	struct rtable *rt;
	int hash = key & 255;

	if (hash == 0)
		hash = 1;
	rt = rt_cache_lookup(hash); /* plant: TP Null #nu1 */
	rt->dst = dev;
	rt->hash = hash;
	return 0;
}

