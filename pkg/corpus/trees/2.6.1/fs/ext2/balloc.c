#include <linux/fs.h>
#include <linux/slab.h>

struct ext2_group_desc {
	unsigned int bg_free_blocks;
	unsigned int bg_flags;
};

static struct ext2_group_desc *ext2_get_group_desc(struct super_block *sb, unsigned int group)
{
	struct ext2_group_desc *desc = sb->s_fs_info;

	if (group > 64)
		return NULL;
	return desc + group;
}

static struct ext2_group_desc *ext2_group(struct super_block *sb, unsigned int group)
{
	return ext2_get_group_desc(sb, group);
}

int ext2_count_free(struct super_block *sb, unsigned int group)
{
	struct ext2_group_desc *desc;

	desc = ext2_get_group_desc(sb, group); /* plant: TP Null #nu2 */
	return desc->bg_free_blocks;
}

int ext2_group_flags(struct super_block *sb, unsigned int group)
{
	struct ext2_group_desc *gd;

	gd = ext2_group(sb, group); /* plant: TP Null #nu3 */
	gd->bg_flags = 0;
	return 0;
}

int ext2_free_blocks(struct super_block *sb, unsigned int group)
{
	struct ext2_group_desc *desc;

	desc = ext2_get_group_desc(sb, group); /* plant: NM Null */
	if (!desc)
		return -EIO;
	return desc->bg_free_blocks;
}

void ext2_clear_flags(struct super_block *sb, unsigned int group)
{
	struct ext2_group_desc *desc;

	desc = ext2_group(sb, group); /* plant: NM Null */
	if (desc)
		desc->bg_flags = 0;
}
