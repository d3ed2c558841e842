#include <linux/fs.h>
#include <linux/sched.h>

static spinlock_t ext3_lock;

static int ext3_commit(struct super_block *sb)
{
	spin_lock(&ext3_lock); /* plant: NM Lock */
	if (sb->s_blocksize == 0)
		goto out;
	sb->s_blocksize = 4096;
out:
	spin_unlock(&ext3_lock);
	return 0;
}

static int ext3_remount(struct super_block *sb)
{
	spin_lock(&sb->s_lock); /* plant: TP Lock #lk2 */
	if (sb->s_fs_info == NULL)
		goto fail;
	spin_unlock(&sb->s_lock);
	return 0;
fail:
	return -EINVAL;
}

static int ext3_statfs(struct super_block *sb)
{
	if (!spin_trylock(&sb->s_lock)) /* plant: NM Lock */
		return -EBUSY;
	sb->s_blocksize = 1024;
	spin_unlock(&sb->s_lock);
	return 0;
}

static void ext3_put_super(struct super_block *sb)
{
	spin_unlock(&sb->s_lock);
	sb->s_fs_info = NULL;
}
