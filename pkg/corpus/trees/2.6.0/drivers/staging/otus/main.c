#include <linux/types.h>

struct otus_ctx {
	int rate;
	int gain;
};

int otus_calibrate(struct otus_ctx *c)
{
	long words[200]; /* plant: TP Var #va2 */
	double scale;

	scale = 0.75; /* plant: TP Float #fl1 */
	words[0] = c->rate;
	c->gain = scale * 2;
	return 0;
}

