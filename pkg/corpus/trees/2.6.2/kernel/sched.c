#include <linux/sched.h>
#include <linux/rcupdate.h>

struct task {
	int prio;
	struct task *parent;
};

static int sched_wait(struct task *t)
{
	schedule();
	return 0;
}

int sched_setparam(struct task *t, int prio)
{
	rcu_read_lock();
	t->prio = prio;
	sched_wait(t); /* plant: TP BlockRCU #br1 */
	rcu_read_unlock();
	return 0;
}

int sched_yield_task(struct task *t)
{
	rcu_read_lock();
	t->prio = 0;
	rcu_read_unlock();
	sched_wait(t); /* plant: NM BlockRCU */
	return 0;
}


void sched_balance(struct task *t)
{
	rcu_read_lock();
	t->prio = 0;
	schedule(); /* plant: TP BlockRCU #br3 */
	rcu_read_unlock();
}

