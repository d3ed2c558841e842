#ifndef _LINUX_FS_H
#define _LINUX_FS_H
#include <linux/types.h>
struct super_block {
	spinlock_t s_lock;
	struct mutex s_mutex;
	unsigned long s_blocksize;
	void *s_fs_info;
};
struct inode {
	struct super_block *i_sb;
	unsigned long i_ino;
	unsigned int i_count;
	void *i_private;
};
struct file {
	struct inode *f_inode;
	unsigned int f_flags;
};
#endif
