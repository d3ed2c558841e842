#include <linux/sched.h>
#include <linux/slab.h>
#include <linux/rcupdate.h>

struct srcu_struct {
	int completed;
};

struct notifier {
	struct notifier *next;
	int priority;
};

static struct srcu_struct notify_srcu;
static struct notifier *chain_head;

int notifier_call_chain(int val)
{
	int idx;
	void *scratch;

	idx = srcu_read_lock(&notify_srcu);
	scratch = kmalloc(128, GFP_KERNEL); /* plant: TP BlockRCU #br2 */
	srcu_read_unlock(&notify_srcu, idx);
	kfree(scratch);
	return val;
}

int notifier_count(void)
{
	int idx;
	void *scratch;

	idx = srcu_read_lock(&notify_srcu);
	scratch = kmalloc(128, GFP_ATOMIC); /* plant: NM BlockRCU */
	srcu_read_unlock(&notify_srcu, idx);
	kfree(scratch);
	return 0;
}

int notifier_first_prio(void)
{
	struct notifier *n;
	int idx;

	idx = srcu_read_lock(&notify_srcu);
	n = rcu_dereference(chain_head); /* plant: NM DerefRCU */
	idx = n->priority;
	srcu_read_unlock(&notify_srcu, idx);
	return idx;
}

int notifier_register(struct notifier *nb)
{
	srcu_read_lock(&notify_srcu); /* plant: TP LockRCU #lr2 */
	nb->next = chain_head;
	chain_head = nb;
	return 0;
}
