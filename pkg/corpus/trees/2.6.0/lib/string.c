#include <linux/types.h>

#define NAME_LEN 64

size_t strlen(const char *s)
{
	const char *sc = s;

	while (*sc != 0)
		sc++;
	return sc - s;
}

int format_table(void)
{
	char line[1024]; /* plant: TP Var #va1 */
	int tmp[255]; /* plant: NM Var */
	char name[NAME_LEN]; /* plant: NM Var */

	line[0] = 0;
	tmp[0] = 0;
	name[0] = 0;
	return 0;
}
