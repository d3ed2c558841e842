#include <linux/rcupdate.h>

struct pid {
	int nr;
	struct pid *next;
};

static struct pid *pid_hash;

int pid_nr_unlocked(void)
{
	struct pid *p;

	p = rcu_dereference(pid_hash); /* plant: TP DerefRCU #dr1 */
	return p->nr;
}

struct pid *pid_next_unlocked(struct pid *p)
{
	return rcu_dereference(p->next); /* plant: TP DerefRCU #dr2 */
}

int pid_nr(void)
{
	struct pid *p;
	int nr;

	rcu_read_lock();
	p = rcu_dereference(pid_hash); /* plant: NM DerefRCU */
	nr = p->nr;
	rcu_read_unlock();
	return nr;
}

int find_pid(int nr)
{
	struct pid *p;

	rcu_read_lock(); /* plant: TP LockRCU #lr1 */
	for (p = pid_hash; p; p = p->next) {
		if (p->nr == nr)
			return 1;
	}
	rcu_read_unlock();
	return 0;
}

int count_pids(void)
{
	struct pid *p;
	int n = 0;

	rcu_read_lock(); /* plant: NM LockRCU */
	rcu_read_lock(); /* plant: NM LockRCU */
	for (p = pid_hash; p; p = p->next)
		n++;
	rcu_read_unlock();
	rcu_read_unlock();
	return n;
}
