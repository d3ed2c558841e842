"""A small synthetic kernel with planted faults, in three versions.

Every planted fault carries a marker comment on the line where its report
is anchored::

    /* plant: TP Lock #lk1 */      a report must appear here
    /* plant: NM Lock */           a near miss: no report may appear here

``#id`` names the fault across versions; ``CORRELATION_LEDGER`` records by
hand how each fault of one version relates to the next.

Run ``python -m kernscan.corpus DIR`` to write the trees, a manifest, a commit
log and both ledgers as data files.
"""

from __future__ import annotations

import datetime as dt
import json
import os
import random
import re
import sys
from dataclasses import dataclass
from typing import Callable

VERSIONS = (("2.6.0", "2003-12-17"), ("2.6.1", "2004-01-08"), ("2.6.2", "2004-02-03"))


def _c(text: str) -> str:
    """Dedent a template and turn 4-space indentation into tabs."""
    lines = text.strip("\n").splitlines()
    ind = min((len(l) - len(l.lstrip(" ")) for l in lines if l.strip()), default=0)
    out = []
    for l in lines:
        l = l[ind:]
        n = len(l) - len(l.lstrip(" "))
        out.append("\t" * (n // 4) + " " * (n % 4) + l.lstrip(" "))
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# headers (clean)

_TYPES_H = _c("""
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
""")

_SLAB_H = _c("""
    #ifndef _LINUX_SLAB_H
    #define _LINUX_SLAB_H
    #include <linux/types.h>
    void *kmalloc(size_t size, int flags);
    void *kzalloc(size_t size, int flags);
    void kfree(const void *p);
    #endif
""")

_SCHED_H = _c("""
    #ifndef _LINUX_SCHED_H
    #define _LINUX_SCHED_H
    void schedule(void);
    void spin_lock(spinlock_t *l);
    void spin_unlock(spinlock_t *l);
    int spin_trylock(spinlock_t *l);
    void mutex_lock(struct mutex *m);
    void mutex_unlock(struct mutex *m);
    void cli(void);
    void sti(void);
    #endif
""")

_LIST_H = _c("""
    #ifndef _LINUX_LIST_H
    #define _LINUX_LIST_H
    #include <linux/types.h>
    static inline void INIT_LIST_HEAD(struct list_head *list)
    {
        list->next = list;
        list->prev = list;
    }

    static inline int list_empty(const struct list_head *head)
    {
        return head->next == head;
    }

    static inline void __list_add(struct list_head *new, struct list_head *prev, struct list_head *next)
    {
        next->prev = new;
        new->next = next;
        new->prev = prev;
        prev->next = new;
    }
    #endif
""")

_NETDEV_H = _c("""
    #ifndef _LINUX_NETDEVICE_H
    #define _LINUX_NETDEVICE_H
    #include <linux/types.h>
    struct sk_buff {
        struct sk_buff *next;
        unsigned int len;
        unsigned char *data;
    };
    struct net_device {
        char name[16];
        void *priv;
        spinlock_t lock;
        int flags;
    };
    int netif_rx(struct sk_buff *skb);
    #endif
""")

_FS_H = _c("""
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
""")

_RCU_H = _c("""
    #ifndef _LINUX_RCUPDATE_H
    #define _LINUX_RCUPDATE_H
    void rcu_read_lock(void);
    void rcu_read_unlock(void);
    #define rcu_dereference(p) (p)
    #endif
""")

_UACCESS_H = _c("""
    #ifndef _ASM_UACCESS_H
    #define _ASM_UACCESS_H
    unsigned long copy_from_user(void *to, const void *from, unsigned long n);
    #define get_user(x, ptr) __get_user_check((x), (ptr))
    #endif
""")

# ---------------------------------------------------------------------------
# drivers/net: BlockLock, BlockIntr

_NE_DRV = """
    #include <linux/netdevice.h>
    #include <linux/slab.h>

    static spinlock_t ne_lock;
    static int ne_count;

    static int ne_fill(struct net_device *dev)
    {
        void *buf;

        spin_lock(&ne_lock);
        buf = kmalloc(512, GFP_KERNEL); /* plant: TP BlockLock #bl1 */
        spin_unlock(&ne_lock);
        if (!buf)
            return -ENOMEM;
        dev->priv = buf;
        return 0;
    }

    static int ne_refill(struct net_device *dev)
    {
        void *buf;

        spin_lock(&ne_lock);
        buf = kmalloc(512, GFP_ATOMIC); /* plant: NM BlockLock */
        spin_unlock(&ne_lock);
        if (buf == NULL)
            return -ENOMEM;
        dev->priv = buf;
        return 0;
    }

    static void ne_tick(void)
    {
        spin_lock(&ne_lock);
        ne_count++;
        spin_unlock(&ne_lock);
        schedule(); /* plant: NM BlockLock */
    }
"""


def _ne_drv(v: int) -> str:
    head = ""
    if v >= 1:
        head = "#include <linux/types.h>\n#include <linux/list.h>\n/* ring buffer handling reworked */\n"
    return head + _c(_NE_DRV)


_E1000 = _c("""
    #include <linux/netdevice.h>
    #include <linux/slab.h>

    struct e1000_adapter {
        struct net_device *netdev;
        spinlock_t stats_lock;
        struct mutex cfg_mutex;
        unsigned int tx_count;
    };

    static int e1000_wait_reset(struct e1000_adapter *a)
    {
        schedule();
        return 0;
    }

    static int e1000_setup_rings(struct e1000_adapter *a)
    {
        unsigned long flags;

        spin_lock_irqsave(&a->stats_lock, flags);
        e1000_wait_reset(a); /* plant: TP BlockLock #bl2; TP BlockIntr #bi1 */
        spin_unlock_irqrestore(&a->stats_lock, flags);
        return 0;
    }

    static int e1000_config(struct e1000_adapter *a)
    {
        void *cfg;

        mutex_lock(&a->cfg_mutex);
        cfg = kzalloc(64, GFP_KERNEL); /* plant: NM BlockLock */
        mutex_unlock(&a->cfg_mutex);
        if (!cfg)
            return -ENOMEM;
        kfree(cfg);
        return 0;
    }

    static void e1000_irq_sync(struct e1000_adapter *a)
    {
        local_irq_disable();
        kmalloc(32, GFP_KERNEL); /* plant: TP BlockIntr #bi2 */
        local_irq_enable();
    }

    static void e1000_irq_quiet(struct e1000_adapter *a)
    {
        local_irq_disable();
        a->tx_count = 0;
        local_irq_enable();
        e1000_wait_reset(a); /* plant: NM BlockIntr */
    }

    static void e1000_irq_atomic(struct e1000_adapter *a)
    {
        void *p;

        cli();
        p = kmalloc(16, GFP_ATOMIC); /* plant: NM BlockIntr */
        sti();
        kfree(p);
    }
""")

# ---------------------------------------------------------------------------
# fs: BlockLock (interprocedural), Lock, Null


def _ext2_inode(v: int) -> str:
    fixed = v >= 1
    tail = "        mutex_unlock(&sb->s_mutex);\n" if fixed else ""
    marker = "/* plant: NM Lock */" if fixed else "/* plant: TP Lock #lk1 */"
    return _c(f"""
    #include <linux/fs.h>
    #include <linux/sched.h>

    static int ext2_sync_sb(struct super_block *sb)
    {{
        schedule();
        return 0;
    }}

    int ext2_write_inode(struct inode *inode, int wait)
    {{
        struct super_block *sb = inode->i_sb;

        mutex_lock(&sb->s_mutex); {marker}
        if (inode->i_ino == 0) {{
    {tail}        return -EIO;
        }}
        if (wait)
            ext2_sync_sb(sb);
        mutex_unlock(&sb->s_mutex);
        return 0;
    }}

    int ext2_flush(struct super_block *sb)
    {{
        spin_lock(&sb->s_lock);
        ext2_sync_sb(sb); /* plant: TP BlockLock #bl3 */
        spin_unlock(&sb->s_lock);
        return 0;
    }}
    """)


_EXT2_BALLOC = _c("""
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
""")

_EXT3_SUPER = _c("""
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
""")

_PROC_BASE = _c("""
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
""")

# ---------------------------------------------------------------------------
# net: Null (changed in 2.6.1), IsNull, NullRef


def _route(v: int) -> str:
    if v == 0:
        body = """
        int ip_route_output(struct net_device *dev, int key)
        {
            struct rtable *rt;

            rt = rt_cache_lookup(key); /* plant: TP Null #nu1 */
            rt->dst = dev;
            return 0;
        }
        """
    else:
        body = """
        int ip_route_output(struct net_device *dev, int key)
        {
            struct rtable *rt;
            int hash = key & 255;

            if (hash == 0)
                hash = 1;
            rt = rt_cache_lookup(hash); /* plant: TP Null #nu1 */
            rt->dst = dev;
            rt->hash = hash;
            return 0;
        }
        """
    return _c("""
        #include <linux/netdevice.h>

        struct rtable {
            struct net_device *dst;
            int hash;
        };

        static struct rtable rt_table[256];

        static struct rtable *rt_cache_lookup(int key)
        {
            if (key < 0 || key > 255)
                return NULL;
            return &rt_table[key];
        }
    """) + "\n" + _c(body)


_NET_DEV = _c("""
    #include <linux/netdevice.h>

    int dev_open(struct net_device *dev)
    {
        if (!dev) { /* plant: TP IsNull #is1 */
            printk("dev_open: %s\\n", dev->name);
            return -ENODEV;
        }
        dev->flags = 1;
        return 0;
    }

    int dev_close(struct net_device *dev)
    {
        if (dev != NULL) /* plant: NM IsNull */
            dev->flags = 0;
        return 0;
    }

    int dev_ioctl(struct net_device *dev, int cmd)
    {
        int n = dev->flags;

        if (!dev) /* plant: TP NullRef #nr1 */
            return -ENODEV;
        return n + cmd;
    }

    int dev_set_mtu(struct net_device *dev, int mtu)
    {
        if (!dev) /* plant: NM NullRef */
            return -ENODEV;
        dev->flags = mtu;
        return 0;
    }
""")

_SKBUFF = _c("""
    #include <linux/netdevice.h>
    #include <linux/slab.h>

    struct sk_buff *skb_clone(struct sk_buff *skb)
    {
        struct sk_buff *n = skb;

        if (n == NULL) { /* plant: TP IsNull #is2 */
            n->len = 0;
            return n;
        }
        n->len = skb->len;
        return n;
    }

    struct sk_buff *skb_copy(struct sk_buff *skb)
    {
        struct sk_buff *n = skb->next;

        if (!n) { /* plant: NM IsNull */
            n = kmalloc(sizeof(*n), GFP_ATOMIC);
            n->len = 0;
        }
        return n;
    }

    unsigned int skb_headlen(struct sk_buff *skb)
    {
        unsigned int len = skb->len;

        if (skb == NULL) /* plant: TP NullRef #nr2 */
            return 0;
        return len;
    }

    void skb_reserve(struct sk_buff *skb, struct sk_buff *other, int n)
    {
        skb->len = n;
        skb = other;
        if (!skb) /* plant: NM NullRef */
            return;
        skb->len = 0;
    }
""")

# ---------------------------------------------------------------------------
# drivers/char: Range


_TTY_IO = _c("""
    #include <linux/types.h>
    #include <asm/uaccess.h>

    #define TTY_MAX 16

    static int tty_table[TTY_MAX];
    static char tty_flags[TTY_MAX];

    int tty_ioctl_get(int *uptr)
    {
        int i;

        get_user(i, uptr); /* plant: TP Range #ra1 */
        return tty_table[i];
    }

    int tty_ioctl_set(int *uptr)
    {
        int i;

        get_user(i, uptr); /* plant: NM Range */
        if (i >= TTY_MAX)
            return -EINVAL;
        tty_table[i] = 0;
        return 0;
    }

    int tty_set_flag(const void *arg)
    {
        unsigned int idx;

        if (copy_from_user(&idx, arg, sizeof(idx))) /* plant: TP Range #ra2 */
            return -EFAULT;
        tty_flags[idx] = 1;
        return 0;
    }

    int tty_clear_flag(const void *arg)
    {
        unsigned int n;

        if (copy_from_user(&n, arg, sizeof(n))) /* plant: NM Range */
            return -EFAULT;
        if (n < TTY_MAX)
            tty_flags[n] = 0;
        return 0;
    }
""")

# ---------------------------------------------------------------------------
# sound: Intr (fixed in 2.6.2)


def _pcm(v: int) -> str:
    fixed = v >= 2
    restore = "            sti();\n" if fixed else ""
    marker = "/* plant: NM Intr */" if fixed else "/* plant: TP Intr #in1 */"
    return _c(f"""
    #include <linux/sched.h>

    struct snd_pcm {{
        int state;
        int period;
    }};

    int snd_pcm_start(struct snd_pcm *pcm)
    {{
        cli(); {marker}
        if (pcm->state != 0) {{
    {restore}            return -EBUSY;
        }}
        pcm->state = 1;
        sti();
        return 0;
    }}

    int snd_pcm_stop(struct snd_pcm *pcm)
    {{
        cli(); /* plant: NM Intr */
        pcm->state = 0;
        sti();
        return 0;
    }}
    """)


_SND_TIMER = _c("""
    #include <linux/sched.h>

    struct snd_timer {
        int running;
        unsigned long ticks;
    };

    void snd_timer_pause(struct snd_timer *t)
    {
        local_irq_disable(); /* plant: TP Intr #in2 */
        t->running = 0;
    }

    void snd_timer_resume(struct snd_timer *t)
    {
        t->running = 1;
        local_irq_enable();
    }

    void snd_timer_tick(struct snd_timer *t)
    {
        local_irq_disable(); /* plant: NM Intr */
        t->ticks++;
        if (t->ticks > 100)
            t->ticks = 0;
        local_irq_enable();
    }
""")

# ---------------------------------------------------------------------------
# arch: LockIntr (lines shift in 2.6.2)


def _irq(v: int) -> str:
    extra = ""
    if v >= 2:
        extra = _c("""
        static int irq_debug;

        void irq_set_debug(int on)
        {
            irq_debug = on;
        }
        """) + "\n"
    return _c("""
    #include <linux/sched.h>

    struct irq_desc {
        spinlock_t lock;
        int depth;
        int status;
    };
    """) + "\n" + extra + _c("""
    int disable_irq(struct irq_desc *desc)
    {
        unsigned long flags;

        spin_lock_irqsave(&desc->lock, flags); /* plant: TP LockIntr #li1 */
        if (desc->depth < 0)
            return -EINVAL;
        desc->depth++;
        spin_unlock_irqrestore(&desc->lock, flags);
        return 0;
    }

    int enable_irq(struct irq_desc *desc)
    {
        unsigned long flags;

        spin_lock_irqsave(&desc->lock, flags); /* plant: NM LockIntr */
        desc->depth--;
        spin_unlock_irqrestore(&desc->lock, flags);
        return 0;
    }
    """)


_TRAPS = _c("""
    #include <linux/sched.h>

    static int trap_count;

    void do_trap(int nr)
    {
        unsigned long flags;

        local_irq_save(flags); /* plant: TP LockIntr #li2 */
        trap_count += nr;
    }

    void do_debug(int nr)
    {
        unsigned long flags;

        save_and_cli(flags); /* plant: NM LockIntr */
        trap_count = nr;
        restore_flags(flags);
    }
""")

# ---------------------------------------------------------------------------
# mm / lib: Free, Size, Var, Float


_SLAB_C = _c("""
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
""")

_VMALLOC = _c("""
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
""")

_LIB_STRING = _c("""
    #include <linux/types.h>

    #define NAME_LEN 64

    size_t strlen(const char *s)
    {
        const char *sc = s;

        while (*sc != 0)
            sc++;
        return sc - s;
    }

    int format_table(void)
    {
        char line[1024]; /* plant: TP Var #va1 */
        int tmp[255]; /* plant: NM Var */
        char name[NAME_LEN]; /* plant: NM Var */

        line[0] = 0;
        tmp[0] = 0;
        name[0] = 0;
        return 0;
    }
""")

_LIB_SORT = _c("""
    #include <linux/types.h>

    static int scratch_cmp(const void *a, const void *b)
    {
        return 0;
    }

    void sort_big(void)
    {
        static char keep[4096]; /* plant: NM Var */
        char small[1023]; /* plant: NM Var */
        u32 words[300]; /* plant: TP Var #va3 */

        keep[0] = small[0];
        words[0] = 0;
    }
""")


def _otus(v: int) -> str | None:
    if v >= 1:
        return None
    return _c("""
    #include <linux/types.h>

    struct otus_ctx {
        int rate;
        int gain;
    };

    int otus_calibrate(struct otus_ctx *c)
    {
        long words[200]; /* plant: TP Var #va2 */
        double scale;

        scale = 0.75; /* plant: TP Float #fl1 */
        words[0] = c->rate;
        c->gain = scale * 2;
        return 0;
    }
    """)


_GPIO = _c("""
    #include <linux/types.h>

    #define HZ 100

    struct gpio_chip {
        int base;
        int ngpio;
    };

    int gpio_scale(struct gpio_chip *c)
    {
        int t = 0.5 * HZ; /* plant: NM Float */

        c->base = t;
        return 0;
    }

    float gpio_ratio(struct gpio_chip *c)
    {
        c->ngpio = 2.0 * 3; /* plant: NM Float */
        printk("ratio 1.5\\n");
        return 1.5f; /* plant: TP Float #fl2 */
    }
""")


def _comedi(v: int) -> str | None:
    if v != 1:
        return None
    return _c("""
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
    """)


# ---------------------------------------------------------------------------
# kernel: RCU checkers


def _sched(v: int) -> str:
    extra = ""
    if v >= 2:
        extra = "\n" + _c("""
        void sched_balance(struct task *t)
        {
            rcu_read_lock();
            t->prio = 0;
            schedule(); /* plant: TP BlockRCU #br3 */
            rcu_read_unlock();
        }
        """)
    return _c("""
    #include <linux/sched.h>
    #include <linux/rcupdate.h>

    struct task {
        int prio;
        struct task *parent;
    };

    static int sched_wait(struct task *t)
    {
        schedule();
        return 0;
    }

    int sched_setparam(struct task *t, int prio)
    {
        rcu_read_lock();
        t->prio = prio;
        sched_wait(t); /* plant: TP BlockRCU #br1 */
        rcu_read_unlock();
        return 0;
    }

    int sched_yield_task(struct task *t)
    {
        rcu_read_lock();
        t->prio = 0;
        rcu_read_unlock();
        sched_wait(t); /* plant: NM BlockRCU */
        return 0;
    }
    """) + extra


_SRCU = _c("""
    #include <linux/sched.h>
    #include <linux/slab.h>
    #include <linux/rcupdate.h>

    struct srcu_struct {
        int completed;
    };

    struct notifier {
        struct notifier *next;
        int priority;
    };

    static struct srcu_struct notify_srcu;
    static struct notifier *chain_head;

    int notifier_call_chain(int val)
    {
        int idx;
        void *scratch;

        idx = srcu_read_lock(&notify_srcu);
        scratch = kmalloc(128, GFP_KERNEL); /* plant: TP BlockRCU #br2 */
        srcu_read_unlock(&notify_srcu, idx);
        kfree(scratch);
        return val;
    }

    int notifier_count(void)
    {
        int idx;
        void *scratch;

        idx = srcu_read_lock(&notify_srcu);
        scratch = kmalloc(128, GFP_ATOMIC); /* plant: NM BlockRCU */
        srcu_read_unlock(&notify_srcu, idx);
        kfree(scratch);
        return 0;
    }

    int notifier_first_prio(void)
    {
        struct notifier *n;
        int idx;

        idx = srcu_read_lock(&notify_srcu);
        n = rcu_dereference(chain_head); /* plant: NM DerefRCU */
        idx = n->priority;
        srcu_read_unlock(&notify_srcu, idx);
        return idx;
    }

    int notifier_register(struct notifier *nb)
    {
        srcu_read_lock(&notify_srcu); /* plant: TP LockRCU #lr2 */
        nb->next = chain_head;
        chain_head = nb;
        return 0;
    }
""")

_PID = _c("""
    #include <linux/rcupdate.h>

    struct pid {
        int nr;
        struct pid *next;
    };

    static struct pid *pid_hash;

    int pid_nr_unlocked(void)
    {
        struct pid *p;

        p = rcu_dereference(pid_hash); /* plant: TP DerefRCU #dr1 */
        return p->nr;
    }

    struct pid *pid_next_unlocked(struct pid *p)
    {
        return rcu_dereference(p->next); /* plant: TP DerefRCU #dr2 */
    }

    int pid_nr(void)
    {
        struct pid *p;
        int nr;

        rcu_read_lock();
        p = rcu_dereference(pid_hash); /* plant: NM DerefRCU */
        nr = p->nr;
        rcu_read_unlock();
        return nr;
    }

    int find_pid(int nr)
    {
        struct pid *p;

        rcu_read_lock(); /* plant: TP LockRCU #lr1 */
        for (p = pid_hash; p; p = p->next) {
            if (p->nr == nr)
                return 1;
        }
        rcu_read_unlock();
        return 0;
    }

    int count_pids(void)
    {
        struct pid *p;
        int n = 0;

        rcu_read_lock(); /* plant: NM LockRCU */
        rcu_read_lock(); /* plant: NM LockRCU */
        for (p = pid_hash; p; p = p->next)
            n++;
        rcu_read_unlock();
        rcu_read_unlock();
        return n;
    }
""")

# ---------------------------------------------------------------------------
# clean filler: code that carries notes but no faults


def _filler(prefix: str, n: int) -> str:
    return _c(f"""
    #include <linux/slab.h>
    #include <linux/sched.h>

    struct {prefix}_state {{
        spinlock_t lock;
        int count;
        int *table;
    }};

    static int {prefix}_limit = {n};

    int {prefix}_init(struct {prefix}_state *s)
    {{
        s->table = kmalloc(sizeof(int) * {n}, GFP_KERNEL);
        if (!s->table)
            return -ENOMEM;
        s->count = 0;
        return 0;
    }}

    int {prefix}_add(struct {prefix}_state *s, int v)
    {{
        int ret = 0;

        spin_lock(&s->lock);
        if (s->count >= {prefix}_limit) {{
            ret = -EBUSY;
            goto out;
        }}
        s->table[s->count] = v;
        s->count++;
    out:
        spin_unlock(&s->lock);
        return ret;
    }}

    void {prefix}_exit(struct {prefix}_state *s)
    {{
        kfree(s->table);
        s->table = NULL;
    }}
    """)


_FILLERS = {
    "drivers/block/loop.c": "loop",
    "drivers/scsi/sd.c": "sd",
    "drivers/usb/core/hub.c": "hub",
    "drivers/input/evdev.c": "evdev",
    "drivers/staging/line6/pcm.c": "line6",
    "fs/nfs/inode.c": "nfs",
    "fs/proc/array.c": "proc_array",
    "net/core/sock.c": "sock",
    "net/ipv4/tcp.c": "tcp",
    "sound/pci/ac97.c": "ac97",
    "arch/x86/mm/fault.c": "x86_fault",
    "arch/arm/kernel/setup.c": "arm_setup",
    "mm/mmap.c": "mmap",
    "kernel/fork.c": "fork",
    "kernel/timer.c": "timer",
    "ipc/msg.c": "msg",
    "security/commoncap.c": "cap",
}


@dataclass(frozen=True)
class _File:
    path: str
    make: Callable[[int], str | None]


def _static(text: str) -> Callable[[int], str]:
    return lambda v: text


FILES = [
    _File("include/linux/types.h", _static(_TYPES_H)),
    _File("include/linux/slab.h", _static(_SLAB_H)),
    _File("include/linux/sched.h", _static(_SCHED_H)),
    _File("include/linux/list.h", _static(_LIST_H)),
    _File("include/linux/netdevice.h", _static(_NETDEV_H)),
    _File("include/linux/fs.h", _static(_FS_H)),
    _File("include/linux/rcupdate.h", _static(_RCU_H)),
    _File("include/asm/uaccess.h", _static(_UACCESS_H)),
    _File("drivers/net/ne_drv.c", _ne_drv),
    _File("drivers/net/e1000/e1000_main.c", _static(_E1000)),
    _File("drivers/char/tty_io.c", _static(_TTY_IO)),
    _File("drivers/gpio/gpiolib.c", _static(_GPIO)),
    _File("drivers/staging/otus/main.c", _otus),
    _File("drivers/staging/comedi/core.c", _comedi),
    _File("fs/ext2/inode.c", _ext2_inode),
    _File("fs/ext2/balloc.c", _static(_EXT2_BALLOC)),
    _File("fs/ext3/super.c", _static(_EXT3_SUPER)),
    _File("fs/proc/base.c", _static(_PROC_BASE)),
    _File("net/ipv4/route.c", _route),
    _File("net/core/dev.c", _static(_NET_DEV)),
    _File("net/core/skbuff.c", _static(_SKBUFF)),
    _File("sound/core/pcm.c", _pcm),
    _File("sound/core/timer.c", _static(_SND_TIMER)),
    _File("arch/x86/kernel/irq.c", _irq),
    _File("arch/x86/kernel/traps.c", _static(_TRAPS)),
    _File("mm/slab.c", _static(_SLAB_C)),
    _File("mm/vmalloc.c", _static(_VMALLOC)),
    _File("lib/string.c", _static(_LIB_STRING)),
    _File("lib/sort.c", _static(_LIB_SORT)),
    _File("kernel/sched.c", _sched),
    _File("kernel/srcu.c", _static(_SRCU)),
    _File("kernel/pid.c", _static(_PID)),
] + [_File(p, _static(_filler(pfx, 16 + 8 * i))) for i, (p, pfx) in enumerate(sorted(_FILLERS.items()))]


# ---------------------------------------------------------------------------
# Hand ledger: how each fault of one version relates to the next


def _same(*ids: str) -> dict[str, str]:
    return {i: "auto_same" for i in ids}


_STABLE = (
    "bl2", "bi1", "bi2", "bl3", "nu2", "nu3", "lk2", "lk3", "is1", "nr1", "is2", "nr2",
    "ra1", "ra2", "in2", "li2", "fr1", "fr2", "sz1", "sz2", "va1", "va3", "fl2",
    "br1", "br2", "lr2", "dr1", "dr2", "lr1",
)

CORRELATION_LEDGER: dict[tuple[str, str], dict[str, str]] = {
    ("2.6.0", "2.6.1"): {
        **_same(*_STABLE),
        "bl1": "auto_same",  # three lines added above it
        "in1": "auto_same",
        "li1": "auto_same",
        "lk1": "dead",  # fixed
        "nu1": "unknown",  # function rewritten around it
        "va2": "dead",  # file removed
        "fl1": "dead",  # file removed
    },
    ("2.6.1", "2.6.2"): {
        **_same(*_STABLE),
        "bl1": "auto_same",
        "nu1": "auto_same",
        "li1": "auto_same",  # new code inserted above it
        "in1": "dead",  # fixed
        "ra3": "dead",  # file removed
        "fr3": "dead",  # file removed
    },
}


# ---------------------------------------------------------------------------


_MARK = re.compile(r"/\* plant: (.*?) \*/")
_ITEM = re.compile(r"^(TP|NM) (\w+)(?: #(\w+))?$")


@dataclass(frozen=True)
class Plant:
    version: str
    file: str
    line: int
    checker: str
    positive: bool
    id: str = ""


def parse_plants(version: str, path: str, text: str) -> list[Plant]:
    out = []
    for n, line in enumerate(text.splitlines(), 1):
        for m in _MARK.finditer(line):
            for item in m.group(1).split(";"):
                it = _ITEM.match(item.strip())
                if it is None:
                    raise ValueError(f"{path}:{n}: bad plant marker {item!r}")
                out.append(Plant(version, path, n, it.group(2), it.group(1) == "TP", it.group(3) or ""))
    return out


def version_files(v: int) -> dict[str, str]:
    out = {}
    for f in FILES:
        text = f.make(v)
        if text is not None:
            out[f.path] = text
    return out


def plants() -> list[Plant]:
    out = []
    for i, (name, _) in enumerate(VERSIONS):
        for path, text in sorted(version_files(i).items()):
            out.extend(parse_plants(name, path, text))
    return out


_DEVELOPERS = ("akpm", "davem", "gregkh", "jgarzik", "rml", "viro", "torvalds", "tiwai")
_MESSAGES = (
    "fix locking in error path",
    "cleanup: remove dead code",
    "fix null dereference found by sparse",
    "update driver to new api",
    "Found by the Stanford checker: missing unlock",
    "coverity: fix leak on failure",
    "add support for new hardware",
    "whitespace fixes",
)


def commit_log(seed: int = 2004) -> str:
    """A tab-separated commit log touching the corpus files.

    Commits before the first release give files their first-seen dates;
    the rest fall inside the release windows and touch files that differ.
    """
    rng = random.Random(seed)
    rows = []
    first = dt.date.fromisoformat(VERSIONS[0][1])
    paths0 = sorted(version_files(0))
    for i, path in enumerate(paths0):
        day = first - dt.timedelta(days=60 + 41 * i)
        rows.append((day, path, rng.choice(_DEVELOPERS), "initial import"))
    for v in range(1, len(VERSIONS)):
        lo = dt.date.fromisoformat(VERSIONS[v - 1][1])
        hi = dt.date.fromisoformat(VERSIONS[v][1])
        old, new = version_files(v - 1), version_files(v)
        touched = sorted(p for p in set(old) | set(new) if old.get(p) != new.get(p))
        touched += rng.sample(sorted(set(old) & set(new)), 4)
        for path in touched:
            for _ in range(rng.randint(1, 3)):
                day = lo + dt.timedelta(days=rng.randint(1, (hi - lo).days))
                rows.append((day, path, rng.choice(_DEVELOPERS), rng.choice(_MESSAGES)))
    rows.sort()
    out = []
    for n, (day, path, dev, msg) in enumerate(rows, 1):
        committer = "torvalds" if n % 3 else dev
        out.append(f"c{n:05d}\t{dev}\t{committer}\t{day.isoformat()}\t{path}\t{msg}")
    return "\n".join(out) + "\n"


def write_corpus(root: str) -> str:
    """Write every version under *root* and return the manifest path."""
    rows = []
    for i, (name, date) in enumerate(VERSIONS):
        vroot = os.path.join(root, "trees", name)
        for path, text in sorted(version_files(i).items()):
            full = os.path.join(vroot, path)
            os.makedirs(os.path.dirname(full), exist_ok=True)
            with open(full, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        rows.append({"name": name, "date": date, "root": f"trees/{name}"})
    with open(os.path.join(root, "commits.log"), "w", encoding="utf-8", newline="\n") as fh:
        fh.write(commit_log())
    with open(os.path.join(root, "plants.jsonl"), "w", encoding="utf-8") as fh:
        for p in plants():
            fh.write(json.dumps(p.__dict__, sort_keys=True) + "\n")
    with open(os.path.join(root, "correlation_ledger.json"), "w", encoding="utf-8") as fh:
        ledger = {f"{a}__{b}": dict(sorted(m.items())) for (a, b), m in CORRELATION_LEDGER.items()}
        json.dump(ledger, fh, indent=1, sort_keys=True)
        fh.write("\n")
    manifest = os.path.join(root, "manifest.json")
    with open(manifest, "w", encoding="utf-8") as fh:
        json.dump({"versions": rows}, fh, indent=1)
        fh.write("\n")
    return manifest


if __name__ == "__main__":
    if len(sys.argv) != 2:
        sys.exit("usage: python -m kernscan.corpus DIR")
    print(write_corpus(sys.argv[1]))
