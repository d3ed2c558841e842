#ifndef _LINUX_NETDEVICE_H
#define _LINUX_NETDEVICE_H
#include <linux/types.h>
struct sk_buff {
	struct sk_buff *next;
	unsigned int len;
	unsigned char *data;
};
struct net_device {
	char name[16];
	void *priv;
	spinlock_t lock;
	int flags;
};
int netif_rx(struct sk_buff *skb);
#endif
