#include <linux/slab.h>

struct kmem_buf {
	unsigned int len;
	unsigned char *data;
	int used;
};

static void release_buf(struct kmem_buf *b)
{
	kfree(b);
}

static void maybe_release(struct kmem_buf *b, int really)
{
	if (really)
		kfree(b);
}

unsigned int buf_drop(struct kmem_buf *b)
{
	kfree(b); /* plant: TP Free #fr1 */
	return b->len;
}

void buf_put(struct kmem_buf *b)
{
	release_buf(b); /* plant: TP Free #fr2 */
	b->used = 0;
}

void buf_clear(struct kmem_buf *b)
{
	kfree(b); /* plant: NM Free */
	b = NULL;
}

void buf_destroy(struct kmem_buf *b)
{
	kfree(b->data); /* plant: NM Free */
	kfree(b);
}

void buf_soft_put(struct kmem_buf *b)
{
	maybe_release(b, 0); /* plant: NM Free */
	b->used = 1;
}
