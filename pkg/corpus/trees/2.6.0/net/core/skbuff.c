#include <linux/netdevice.h>
#include <linux/slab.h>

struct sk_buff *skb_clone(struct sk_buff *skb)
{
	struct sk_buff *n = skb;

	if (n == NULL) { /* plant: TP IsNull #is2 */
		n->len = 0;
		return n;
	}
	n->len = skb->len;
	return n;
}

struct sk_buff *skb_copy(struct sk_buff *skb)
{
	struct sk_buff *n = skb->next;

	if (!n) { /* plant: NM IsNull */
		n = kmalloc(sizeof(*n), GFP_ATOMIC);
		n->len = 0;
	}
	return n;
}

unsigned int skb_headlen(struct sk_buff *skb)
{
	unsigned int len = skb->len;

	if (skb == NULL) /* plant: TP NullRef #nr2 */
		return 0;
	return len;
}

void skb_reserve(struct sk_buff *skb, struct sk_buff *other, int n)
{
	skb->len = n;
	skb = other;
	if (!skb) /* plant: NM NullRef */
		return;
	skb->len = 0;
}
