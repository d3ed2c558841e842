#ifndef _LINUX_TYPES_H
#define _LINUX_TYPES_H
typedef unsigned char u8;
typedef unsigned short u16;
typedef unsigned int u32;
typedef unsigned long long u64;
typedef unsigned long size_t;
typedef int spinlock_t;
typedef int rwlock_t;
struct mutex { int count; };
struct list_head { struct list_head *next, *prev; };
#define NULL ((void *)0)
#define GFP_KERNEL 0x10
#define GFP_ATOMIC 0x20
#define EINVAL 22
#define ENOMEM 12
#define ENODEV 19
#define EBUSY 16
#define EIO 5
#define EFAULT 14
#endif
