#include <linux/slab.h>
#include <asm/uaccess.h>

struct comedi_dev {
	int channels[8];
	int *buf;
};

int comedi_read(struct comedi_dev *d, int *uptr)
{
	int ch;

	get_user(ch, uptr); /* plant: TP Range #ra3 */
	return d->channels[ch];
}

void comedi_close(struct comedi_dev *d)
{
	kfree(d); /* plant: TP Free #fr3 */
	kfree(d->buf);
}

