#include <linux/sched.h>

struct snd_pcm {
	int state;
	int period;
};

int snd_pcm_start(struct snd_pcm *pcm)
{
	cli(); /* plant: NM Intr */
	if (pcm->state != 0) {
			sti();
		return -EBUSY;
	}
	pcm->state = 1;
	sti();
	return 0;
}

int snd_pcm_stop(struct snd_pcm *pcm)
{
	cli(); /* plant: NM Intr */
	pcm->state = 0;
	sti();
	return 0;
}

