"""Seeded instance generators.

Everything here is deterministic in (kind, n, m, seed, index): per-instance
seeds are derived by hashing, never by sharing one RNG stream across
instances, so regenerating index 7 alone gives the same instance as
generating all ten.
"""

from __future__ import annotations

import hashlib
import random
from dataclasses import dataclass

from .core import MAX_WIDTH, derived_map, equality_relation, kernel_relation, table_map
from .problems import (
    ConstrainedLongChoiceInstance,
    LocalOptInstance,
    LongChoiceInstance,
    PigeonInstance,
    QuotientPigeonInstance,
)

KINDS = (
    "random_table",
    "kernel_equivalence",
    "equality_equivalence",
    "localopt_dag",
    "pigeon_random",
    "long_choice_random",
    "constrained_long_choice_random",
)

# Predicate tables beyond this many input bits switch to a hashed backend;
# the table would be pointlessly large and the solver only probes it.
TABLE_PREDICATE_BITS = 12


class GeneratorError(ValueError):
    pass


def derive_seed(base: int, *parts) -> int:
    text = ":".join([str(base), *(str(p) for p in parts)])
    digest = hashlib.sha256(text.encode()).hexdigest()
    return int(digest[:16], 16) & (2**63 - 1)


def rng_for(base: int, *parts) -> random.Random:
    return random.Random(derive_seed(base, *parts))


@dataclass(frozen=True)
class GeneratorConfig:
    kind: str
    n: int
    seed: int
    m: int = 0
    count: int = 1

    def __post_init__(self):
        if self.kind not in KINDS:
            raise GeneratorError(f"unknown generator kind {self.kind!r}")
        if not 2 <= self.n <= MAX_WIDTH:
            raise GeneratorError(f"n={self.n} outside [2, {MAX_WIDTH}]")
        if self.kind == "localopt_dag":
            m = self.m or self.n
            if not 1 <= m <= MAX_WIDTH:
                raise GeneratorError(f"m={m} outside [1, {MAX_WIDTH}]")
        if self.count < 1:
            raise GeneratorError("count must be positive")


def _random_unary_table(rng: random.Random, n: int) -> list[int]:
    size = 1 << n
    return [rng.randint(1, size) for _ in range(size)]


def _random_relation_table(rng: random.Random, n: int) -> list[int]:
    return [rng.getrandbits(1) for _ in range(1 << (2 * n))]


def qp_instance(family: str, n: int, seed: int) -> QuotientPigeonInstance:
    """One quotient-pigeon instance from the named relation family."""
    rng = rng_for(seed, "qp", family, n)
    size = 1 << n
    c = table_map(1, n, n, _random_unary_table(rng, n), label="generated")
    if family == "equality":
        e = equality_relation(n)
    elif family == "kernel":
        levels = [rng.randint(1, size) for _ in range(size)]
        e = kernel_relation(table_map(1, n, n, levels, label="potential"))
    elif family == "random":
        e = table_map(2, n, 1, _random_relation_table(rng, n), boolean=True,
                      label="generated")
    else:
        raise GeneratorError(f"unknown relation family {family!r}")
    return QuotientPigeonInstance(n, c, e, rng.randint(1, size))


def localopt_instance(n: int, m: int, seed: int) -> LocalOptInstance:
    """Random potential with a successor map that usually climbs.

    Per point, a coin decides between a uniformly random successor and one
    drawn from the strictly-better-potential points (self when none exist),
    so walks make progress yet genuine optima stay common.
    """
    rng = rng_for(seed, "localopt", n, m)
    size = 1 << n
    p_tab = [rng.randint(1, 1 << m) for _ in range(size)]
    f_tab = []
    for x in range(1, size + 1):
        if rng.random() < 0.5:
            better = [y for y in range(1, size + 1) if p_tab[y - 1] > p_tab[x - 1]]
            f_tab.append(rng.choice(better) if better else x)
        else:
            f_tab.append(rng.randint(1, size))
    return LocalOptInstance(
        n, m,
        table_map(1, n, n, f_tab, label="generated"),
        table_map(1, n, m, p_tab, label="generated"),
    )


def pigeon_instance(n: int, seed: int) -> PigeonInstance:
    rng = rng_for(seed, "pigeon", n)
    size = 1 << n
    c = table_map(1, n, n, _random_unary_table(rng, n), label="generated")
    return PigeonInstance(n, c, rng.randint(1, size))


class HashedPredicate:
    """Deterministic pseudo-random boolean of its arguments.

    Backs predicate maps whose truth table would be too large to hold;
    blake2b keyed by (seed, stage) keeps it stable across runs and
    processes.
    """

    __slots__ = ("seed", "stage")

    def __init__(self, seed: int, stage: int):
        self.seed = seed
        self.stage = stage

    def __call__(self, *args) -> int:
        text = f"{self.seed}:{self.stage}:{','.join(str(a) for a in args)}"
        return hashlib.blake2b(text.encode(), digest_size=2).digest()[0] & 1


def _random_predicate(rng: random.Random, seed: int, n: int, stage: int):
    arity = stage + 2
    bits = n * arity
    if bits <= TABLE_PREDICATE_BITS:
        tab = [rng.getrandbits(1) for _ in range(1 << bits)]
        return table_map(arity, n, 1, tab, boolean=True, label="generated")
    return derived_map(arity, n, 1, HashedPredicate(seed, stage), boolean=True,
                       label="hashed")


def long_choice_instance(n: int, seed: int) -> LongChoiceInstance:
    rng = rng_for(seed, "long_choice", n)
    preds = tuple(
        _random_predicate(rng, seed, n, k) for k in range(n - 1)
    )
    return LongChoiceInstance(n, preds)


def constrained_long_choice_instance(n: int, seed: int) -> ConstrainedLongChoiceInstance:
    rng = rng_for(seed, "clc", n)
    base = long_choice_instance(n, derive_seed(seed, "base"))
    return ConstrainedLongChoiceInstance(n, base.predicates,
                                         rng.randint(1, 1 << n))


def gen_instance(cfg: GeneratorConfig) -> list:
    """The instance batch a config describes, deterministically."""
    out = []
    for idx in range(cfg.count):
        item_seed = derive_seed(cfg.seed, cfg.kind, cfg.n, cfg.m, idx)
        if cfg.kind == "random_table":
            out.append(qp_instance("random", cfg.n, item_seed))
        elif cfg.kind == "kernel_equivalence":
            out.append(qp_instance("kernel", cfg.n, item_seed))
        elif cfg.kind == "equality_equivalence":
            out.append(qp_instance("equality", cfg.n, item_seed))
        elif cfg.kind == "localopt_dag":
            out.append(localopt_instance(cfg.n, cfg.m or cfg.n, item_seed))
        elif cfg.kind == "pigeon_random":
            out.append(pigeon_instance(cfg.n, item_seed))
        elif cfg.kind == "long_choice_random":
            out.append(long_choice_instance(cfg.n, item_seed))
        elif cfg.kind == "constrained_long_choice_random":
            out.append(constrained_long_choice_instance(cfg.n, item_seed))
        else:  # pragma: no cover - config validation rejects earlier
            raise GeneratorError(cfg.kind)
    return out
