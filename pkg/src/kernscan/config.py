"""Function lists and thresholds shared by the closures and the checkers."""

from __future__ import annotations

from dataclasses import dataclass, field


def _t(*names: str) -> tuple[str, ...]:
    return tuple(names)


def _expand(pattern: str, parts: tuple[str, ...]) -> tuple[str, ...]:
    return tuple(pattern.format(p) for p in parts)


@dataclass(frozen=True)
class CheckerConfig:
    lock_fns: tuple[str, ...] = _expand("{}_lock", ("mutex", "spin", "read", "write")) + _expand(
        "{}_trylock", ("mutex", "spin", "read", "write")
    )
    unlock_fns: tuple[str, ...] = _expand("{}_unlock", ("mutex", "spin", "read", "write"))
    # locks that may be held across a blocking call
    sleeping_lock_fns: tuple[str, ...] = _t("mutex_lock", "mutex_trylock")
    intr_off_fns: tuple[str, ...] = _t("cli", "local_irq_disable")
    intr_on_fns: tuple[str, ...] = _t("sti", "local_irq_enable")
    combined_fns: tuple[str, ...] = (
        _expand("{}_lock_irq", ("read", "write", "spin"))
        + _expand("{}_lock_irqsave", ("read", "write", "spin"))
        + _t("local_irq_save", "save_and_cli")
    )
    combined_release_fns: tuple[str, ...] = (
        _expand("{}_unlock_irq", ("read", "write", "spin"))
        + _expand("{}_unlock_irqrestore", ("read", "write", "spin"))
        + _t("local_irq_restore", "restore_flags")
    )
    # combined functions that only touch the interrupt state
    combined_intr_only_fns: tuple[str, ...] = _t("local_irq_save", "save_and_cli")
    rcu_lock_fns: tuple[str, ...] = _t(
        "rcu_read_lock", "srcu_read_lock", "rcu_read_lock_bh", "rcu_read_lock_sched",
        "rcu_read_lock_sched_notrace",
    )
    rcu_unlock_fns: tuple[str, ...] = _t(
        "rcu_read_unlock", "srcu_read_unlock", "rcu_read_unlock_bh", "rcu_read_unlock_sched",
        "rcu_read_unlock_sched_notrace",
    )
    rcu_deref_fns: tuple[str, ...] = _t("rcu_dereference",)
    user_copy_fns: tuple[str, ...] = _t("memcpy_fromfs", "copy_from_user", "get_user")
    alloc_fns: tuple[str, ...] = _t("kmalloc", "kzalloc")
    free_fns: tuple[str, ...] = _t("kfree",)
    blocking_seed_fns: tuple[str, ...] = _t("schedule",)
    var_byte_threshold: int = 1024
    one_byte_types: tuple[str, ...] = _t("char", "signed char", "unsigned char", "u8", "s8")
    type_sizes: dict = field(default_factory=lambda: dict(TYPE_SIZES), compare=False)

    def __post_init__(self):
        if set(self.lock_fns) & set(self.unlock_fns):
            raise ValueError("lock_fns and unlock_fns must be disjoint")

    def element_size(self, type_name: str, pointer: bool = False) -> int:
        if pointer:
            return 8
        t = " ".join(type_name.split())
        if t in self.type_sizes:
            return self.type_sizes[t]
        return 4


TYPE_SIZES = {
    "char": 1, "signed char": 1, "unsigned char": 1,
    "u8": 1, "s8": 1, "__u8": 1, "__s8": 1, "uint8_t": 1, "int8_t": 1, "bool": 1, "_Bool": 1,
    "short": 2, "short int": 2, "unsigned short": 2, "signed short": 2, "unsigned short int": 2,
    "u16": 2, "s16": 2, "__u16": 2, "__s16": 2, "__le16": 2, "__be16": 2, "uint16_t": 2, "int16_t": 2,
    "int": 4, "unsigned": 4, "unsigned int": 4, "signed": 4, "signed int": 4, "float": 4,
    "u32": 4, "s32": 4, "__u32": 4, "__s32": 4, "__le32": 4, "__be32": 4, "uint32_t": 4, "int32_t": 4,
    "long": 8, "unsigned long": 8, "signed long": 8, "long int": 8, "unsigned long int": 8,
    "long long": 8, "unsigned long long": 8, "double": 8, "long double": 8,
    "u64": 8, "s64": 8, "__u64": 8, "__s64": 8, "__le64": 8, "__be64": 8, "uint64_t": 8, "int64_t": 8,
    "size_t": 8, "ssize_t": 8, "loff_t": 8,
}

DEFAULT_CONFIG = CheckerConfig()
