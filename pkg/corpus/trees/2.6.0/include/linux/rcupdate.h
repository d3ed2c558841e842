#ifndef _LINUX_RCUPDATE_H
#define _LINUX_RCUPDATE_H
void rcu_read_lock(void);
void rcu_read_unlock(void);
#define rcu_dereference(p) (p)
#endif
