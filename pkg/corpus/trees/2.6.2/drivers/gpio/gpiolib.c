#include <linux/types.h>

#define HZ 100

struct gpio_chip {
	int base;
	int ngpio;
};

int gpio_scale(struct gpio_chip *c)
{
	int t = 0.5 * HZ; /* plant: NM Float */

	c->base = t;
	return 0;
}

float gpio_ratio(struct gpio_chip *c)
{
	c->ngpio = 2.0 * 3; /* plant: NM Float */
	printk("ratio 1.5\n");
	return 1.5f; /* plant: TP Float #fl2 */
}
