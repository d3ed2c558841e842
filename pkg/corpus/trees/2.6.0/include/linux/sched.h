#ifndef _LINUX_SCHED_H
#define _LINUX_SCHED_H
void schedule(void);
void spin_lock(spinlock_t *l);
void spin_unlock(spinlock_t *l);
int spin_trylock(spinlock_t *l);
void mutex_lock(struct mutex *m);
void mutex_unlock(struct mutex *m);
void cli(void);
void sti(void);
#endif
