#include <linux/sched.h>

static int trap_count;

void do_trap(int nr)
{
	unsigned long flags;

	local_irq_save(flags); /* plant: TP LockIntr #li2 */
	trap_count += nr;
}

void do_debug(int nr)
{
	unsigned long flags;

	save_and_cli(flags); /* plant: NM LockIntr */
	trap_count = nr;
	restore_flags(flags);
}
