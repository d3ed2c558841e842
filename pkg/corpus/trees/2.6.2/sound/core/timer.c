#include <linux/sched.h>

struct snd_timer {
	int running;
	unsigned long ticks;
};

void snd_timer_pause(struct snd_timer *t)
{
	local_irq_disable(); /* plant: TP Intr #in2 */
	t->running = 0;
}

void snd_timer_resume(struct snd_timer *t)
{
	t->running = 1;
	local_irq_enable();
}

void snd_timer_tick(struct snd_timer *t)
{
	local_irq_disable(); /* plant: NM Intr */
	t->ticks++;
	if (t->ticks > 100)
		t->ticks = 0;
	local_irq_enable();
}
