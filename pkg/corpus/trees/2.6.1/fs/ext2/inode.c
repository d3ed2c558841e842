#include <linux/fs.h>
#include <linux/sched.h>

static int ext2_sync_sb(struct super_block *sb)
{
	schedule();
	return 0;
}

int ext2_write_inode(struct inode *inode, int wait)
{
	struct super_block *sb = inode->i_sb;

	mutex_lock(&sb->s_mutex); /* plant: NM Lock */
	if (inode->i_ino == 0) {
		mutex_unlock(&sb->s_mutex);
	return -EIO;
	}
	if (wait)
		ext2_sync_sb(sb);
	mutex_unlock(&sb->s_mutex);
	return 0;
}

int ext2_flush(struct super_block *sb)
{
	spin_lock(&sb->s_lock);
	ext2_sync_sb(sb); /* plant: TP BlockLock #bl3 */
	spin_unlock(&sb->s_lock);
	return 0;
}

