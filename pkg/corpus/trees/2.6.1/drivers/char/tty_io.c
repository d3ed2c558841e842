#include <linux/types.h>
#include <asm/uaccess.h>

#define TTY_MAX 16

static int tty_table[TTY_MAX];
static char tty_flags[TTY_MAX];

int tty_ioctl_get(int *uptr)
{
	int i;

	get_user(i, uptr); /* plant: TP Range #ra1 */
	return tty_table[i];
}

int tty_ioctl_set(int *uptr)
{
	int i;

	get_user(i, uptr); /* plant: NM Range */
	if (i >= TTY_MAX)
		return -EINVAL;
	tty_table[i] = 0;
	return 0;
}

int tty_set_flag(const void *arg)
{
	unsigned int idx;

	if (copy_from_user(&idx, arg, sizeof(idx))) /* plant: TP Range #ra2 */
		return -EFAULT;
	tty_flags[idx] = 1;
	return 0;
}

int tty_clear_flag(const void *arg)
{
	unsigned int n;

	if (copy_from_user(&n, arg, sizeof(n))) /* plant: NM Range */
		return -EFAULT;
	if (n < TTY_MAX)
		tty_flags[n] = 0;
	return 0;
}
