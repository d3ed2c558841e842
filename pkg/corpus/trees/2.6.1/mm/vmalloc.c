#include <linux/slab.h>

struct vm_struct {
	unsigned long size;
	void *addr;
};
struct vm_area {
	struct vm_struct *vm;
	int flags;
};

struct vm_struct *get_vm_area(unsigned long size)
{
	struct vm_struct *area;

	area = kmalloc(sizeof(struct vm_area), GFP_ATOMIC); /* plant: TP Size #sz1 */
	if (!area)
		return NULL;
	area->size = size;
	return area;
}

struct vm_area *new_vm_area(void)
{
	struct vm_area *va;

	va = kmalloc(sizeof(va), GFP_ATOMIC); /* plant: TP Size #sz2 */
	return va;
}

struct vm_area *alloc_vm_area(void)
{
	struct vm_area *va;

	va = kmalloc(sizeof(*va), GFP_ATOMIC); /* plant: NM Size */
	return va;
}

struct vm_struct *vm_struct_alloc(void)
{
	struct vm_struct *vs;

	vs = kmalloc(sizeof(struct vm_struct), GFP_ATOMIC); /* plant: NM Size */
	return vs;
}

char *vm_name_alloc(int n)
{
	char *buf;

	buf = kmalloc(sizeof(char) * n, GFP_ATOMIC); /* plant: NM Size */
	return buf;
}
