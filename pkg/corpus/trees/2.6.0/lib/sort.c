#include <linux/types.h>

static int scratch_cmp(const void *a, const void *b)
{
	return 0;
}

void sort_big(void)
{
	static char keep[4096]; /* plant: NM Var */
	char small[1023]; /* plant: NM Var */
	u32 words[300]; /* plant: TP Var #va3 */

	keep[0] = small[0];
	words[0] = 0;
}
