#ifndef _ASM_UACCESS_H
#define _ASM_UACCESS_H
unsigned long copy_from_user(void *to, const void *from, unsigned long n);
#define get_user(x, ptr) __get_user_check((x), (ptr))
#endif
