#include <linux/fs.h>

static rwlock_t tasklist_lock;

int proc_pid_lookup(struct inode *dir, int pid)
{
	read_lock(&tasklist_lock);
	read_lock(&tasklist_lock); /* plant: NM Lock */
	dir->i_count++;
	read_unlock(&tasklist_lock);
	read_unlock(&tasklist_lock);
	return 0;
}

int proc_fill_inode(struct inode *inode)
{
	spin_lock(&inode->i_sb->s_lock);
	spin_lock(&inode->i_sb->s_lock); /* plant: TP Lock #lk3 */
	inode->i_count++;
	spin_unlock(&inode->i_sb->s_lock);
	spin_unlock(&inode->i_sb->s_lock);
	return 0;
}
