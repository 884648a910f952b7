"""Explicit finite domains and the total maps the whole lab runs on.

Conventions, fixed once and used everywhere:

* Elements are 1-based. The element v of a width-w domain stands for the
  bit pattern of v-1, most significant bit first. Serialized payloads are
  1-based as well.
* Pair domains are flattened with the first coordinate in the high bits:
  (a, b) over [2^m] x [2^n] is element (a-1)*2^n + b of [2^(m+n)].
* Relation- and predicate-valued maps (boolean=True) yield raw bits 0/1,
  not 1-based elements; their tables store 0s and 1s.

A map can carry up to three backends. The dense table is the source of
truth when present; a circuit, if also present, is checkable against it
exhaustively; `fn` is a plain python callable for maps whose tables would
be silly to materialize (derived constructions name themselves in
`label`).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator

from . import circuits
from .circuits import CircuitIR

# Exhaustive scans and dense tables stay desk-scale below this width.
MAX_WIDTH = 10
MAX_TABLE_BITS = 20


class DomainError(ValueError):
    """Value or operand outside the declared finite domain."""


class SizeLimitError(ValueError):
    """An exhaustive operation was asked to exceed the desk-scale guard."""


class BackendMismatchError(ValueError):
    """Table and circuit backends of one map disagree on some input."""


def check_width(n: int, what: str = "width") -> int:
    if not isinstance(n, int) or n < 1:
        raise DomainError(f"{what} must be a positive integer, got {n!r}")
    if n > MAX_WIDTH:
        raise SizeLimitError(f"{what} {n} exceeds the desk-scale bound {MAX_WIDTH}")
    return n


def domain_size(width: int) -> int:
    return 1 << width


def check_element(v: int, width: int, what: str = "element") -> int:
    if not isinstance(v, int) or isinstance(v, bool) or not 1 <= v <= (1 << width):
        raise DomainError(f"{what} {v!r} outside [1, 2^{width}]")
    return v


def pack_pair(a: int, b: int, low_width: int) -> int:
    """Flatten (a, b) with a in the high bits."""
    return (a - 1) * (1 << low_width) + b


def unpack_pair(v: int, low_width: int) -> tuple[int, int]:
    low = (v - 1) % (1 << low_width) + 1
    high = (v - 1) // (1 << low_width) + 1
    return high, low


def element_bits(v: int, width: int) -> tuple[int, ...]:
    x = v - 1
    return tuple((x >> (width - 1 - i)) & 1 for i in range(width))


def bits_element(bits) -> int:
    x = 0
    for b in bits:
        x = (x << 1) | b
    return x + 1


# ============================================================
# finite sets
# ============================================================


@dataclass(frozen=True)
class FiniteSet:
    """A subset of [2^n], members kept sorted ascending and de-duplicated."""

    n: int
    members: tuple[int, ...]

    def __post_init__(self):
        check_width(self.n, "set width")
        prev = 0
        for v in self.members:
            check_element(v, self.n, "set member")
            if v <= prev:
                raise DomainError("set members must be strictly ascending")
            prev = v

    @classmethod
    def of(cls, n: int, values) -> "FiniteSet":
        return cls(n, tuple(sorted(set(values))))

    @classmethod
    def full(cls, n: int) -> "FiniteSet":
        return cls(n, tuple(range(1, (1 << n) + 1)))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(self.members)

    def __contains__(self, v) -> bool:
        return v in set(self.members) if len(self.members) > 8 else v in self.members

    def without(self, values) -> "FiniteSet":
        drop = set(values)
        return FiniteSet(self.n, tuple(v for v in self.members if v not in drop))


def k_smallest(x: FiniteSet, kappa: int) -> FiniteSet:
    """The kappa least members of x; kappa may be 0."""
    if not 0 <= kappa <= len(x):
        raise DomainError(f"kappa {kappa} outside [0, {len(x)}]")
    return FiniteSet(x.n, x.members[:kappa])


def unfilled_set(x: FiniteSet, points, f: "EvaluableMap") -> FiniteSet:
    """Members of x that are not the image under f of any listed point."""
    if f.arity != 1 or f.in_width != x.n or f.boolean or f.out_width != x.n:
        raise DomainError("unfilled_set needs a unary self-map on the set's domain")
    images = {f(check_element(p, x.n, "point")) for p in points}
    return FiniteSet(x.n, tuple(v for v in x.members if v not in images))


def iterate_from(f: "EvaluableMap", x0: int, t: int) -> int:
    """t-fold application f(f(...f(x0)))."""
    if f.arity != 1 or f.boolean or f.out_width != f.in_width:
        raise DomainError("iterate_from needs a unary self-map")
    if t < 0:
        raise DomainError("iteration count must be nonnegative")
    v = check_element(x0, f.in_width, "start point")
    for _ in range(t):
        v = f(v)
    return v


# ============================================================
# evaluable maps
# ============================================================


@dataclass(frozen=True)
class EvaluableMap:
    """A total map [2^in_width]^arity -> [2^out_width] (or -> {0,1})."""

    arity: int
    in_width: int
    out_width: int
    boolean: bool = False
    table: tuple[int, ...] | None = None
    circuit: CircuitIR | None = None
    fn: Callable | None = field(default=None, compare=False)
    label: str = ""

    def __post_init__(self):
        if self.arity < 1:
            raise DomainError("arity must be at least 1")
        check_width(self.in_width, "input width")
        if self.boolean:
            if self.out_width != 1:
                raise DomainError("boolean maps must declare out_width 1")
        else:
            check_width(self.out_width, "output width")
        if self.table is None and self.circuit is None and self.fn is None:
            raise DomainError("map needs at least one backend")
        if self.table is not None:
            bits = self.arity * self.in_width
            if bits > MAX_TABLE_BITS:
                raise SizeLimitError(
                    f"table backend over {bits} input bits exceeds {MAX_TABLE_BITS}"
                )
            size = 1 << bits
            if len(self.table) != size:
                raise DomainError(f"table length {len(self.table)} != {size}")
            lo, hi = (0, 1) if self.boolean else (1, 1 << self.out_width)
            for v in self.table:
                if not lo <= v <= hi:
                    raise DomainError(f"table entry {v} outside [{lo}, {hi}]")
        if self.circuit is not None:
            if self.circuit.input_count != self.arity * self.in_width:
                raise DomainError("circuit input bit count disagrees with signature")
            want = 1 if self.boolean else self.out_width
            if self.circuit.output_count != want:
                raise DomainError("circuit output bit count disagrees with signature")

    @property
    def backend(self) -> str:
        if self.table is not None:
            return "table"
        if self.circuit is not None:
            return "circuit"
        return "derived"

    def _index(self, args) -> int:
        idx = 0
        for a in args:
            idx = (idx << self.in_width) | (a - 1)
        return idx

    def __call__(self, *args: int) -> int:
        if len(args) != self.arity:
            raise DomainError(f"map takes {self.arity} arguments, got {len(args)}")
        table = self.table
        if table is not None:
            # hot path: fold the bounds check into the index computation
            w = self.in_width
            hi = 1 << w
            idx = 0
            for a in args:
                if a.__class__ is not int or not 1 <= a <= hi:
                    check_element(a, w, "argument")
                idx = (idx << w) | (a - 1)
            return table[idx]
        for a in args:
            check_element(a, self.in_width, "argument")
        if self.circuit is not None:
            bits = []
            for a in args:
                bits.extend(element_bits(a, self.in_width))
            out = circuits.simulate(self.circuit, bits)
            return out[0] if self.boolean else bits_element(out)
        out = self.fn(*args)
        lo, hi = (0, 1) if self.boolean else (1, 1 << self.out_width)
        if not isinstance(out, int) or not lo <= out <= hi:
            raise DomainError(f"derived backend produced {out!r} outside [{lo}, {hi}]")
        return out


def evaluate(m: EvaluableMap, args) -> int:
    """Spec-shaped alias for calling the map on a tuple of arguments."""
    return m(*args)


def table_map(arity, in_width, out_width, table, *, boolean=False, label="",
              circuit=None) -> EvaluableMap:
    return EvaluableMap(arity, in_width, out_width, boolean, tuple(table),
                        circuit, None, label)


def circuit_map(arity, in_width, out_width, circuit, *, boolean=False,
                label="") -> EvaluableMap:
    return EvaluableMap(arity, in_width, out_width, boolean, None, circuit,
                        None, label)


def derived_map(arity, in_width, out_width, fn, *, boolean=False,
                label="") -> EvaluableMap:
    return EvaluableMap(arity, in_width, out_width, boolean, None, None, fn, label)


def materialize(m: EvaluableMap) -> EvaluableMap:
    """Rebuild any map as a table-backed one (guards apply)."""
    if m.table is not None:
        return m
    bits = m.arity * m.in_width
    if bits > MAX_TABLE_BITS:
        raise SizeLimitError(f"cannot materialize a {bits}-input-bit table")
    size = 1 << m.in_width
    args_space = _tuples(size, m.arity)
    table = tuple(m(*args) for args in args_space)
    return table_map(m.arity, m.in_width, m.out_width, table,
                     boolean=m.boolean, label=m.label, circuit=m.circuit)


def _tuples(size: int, arity: int):
    if arity == 1:
        for a in range(1, size + 1):
            yield (a,)
    else:
        for head in range(1, size + 1):
            for rest in _tuples(size, arity - 1):
                yield (head, *rest)


def attach_circuit(m: EvaluableMap) -> EvaluableMap:
    """Synthesize a truth-table circuit backend alongside the table."""
    t = materialize(m)
    bits_in = t.arity * t.in_width
    width_out = 1 if t.boolean else t.out_width
    rows = []
    for v in t.table:
        rows.append((v,) if t.boolean else element_bits(v, width_out))
    circ = circuits.from_bit_table(bits_in, rows)
    return table_map(t.arity, t.in_width, t.out_width, t.table,
                     boolean=t.boolean, label=t.label, circuit=circ)


def validate_backends(m: EvaluableMap) -> None:
    """Exhaustively compare table and circuit backends; raise on any clash."""
    if m.table is None or m.circuit is None:
        return
    size = 1 << m.in_width
    for args in _tuples(size, m.arity):
        bits = []
        for a in args:
            bits.extend(element_bits(a, m.in_width))
        out = circuits.simulate(m.circuit, bits)
        got = out[0] if m.boolean else bits_element(out)
        want = m.table[m._index(args)]
        if got != want:
            raise BackendMismatchError(
                f"backends disagree at {args}: table {want}, circuit {got}"
            )


# ---- stock constructions -----------------------------------------


def identity_map(n: int) -> EvaluableMap:
    size = 1 << n
    return table_map(1, n, n, range(1, size + 1), label="identity")


def constant_map(c: int, n: int, arity: int = 1) -> EvaluableMap:
    check_element(c, n, "constant")
    size = 1 << (arity * n)
    circ = circuits.constant(element_bits(c, n), input_count=arity * n)
    if arity * n <= MAX_TABLE_BITS:
        return table_map(arity, n, n, [c] * size, label=f"constant[{c}]", circuit=circ)
    return circuit_map(arity, n, n, circ, label=f"constant[{c}]")


def equality_relation(n: int) -> EvaluableMap:
    """E(x, y) = 1 iff x == y, table-backed with a combinator circuit."""
    size = 1 << n
    table = [1 if x == y else 0 for x in range(size) for y in range(size)]
    return table_map(2, n, 1, table, boolean=True, label="equality",
                     circuit=circuits.equality(n))


class KernelFn:
    """Callable backend for a potential-kernel relation.

    Kept as a class (rather than a closure) so vectorized scans can reach
    the underlying potential values without re-evaluating the map.
    """

    __slots__ = ("values", "value_width")

    def __init__(self, values, value_width: int = 0):
        self.values = tuple(values)
        self.value_width = value_width

    def __call__(self, x, y):
        return 1 if self.values[x - 1] == self.values[y - 1] else 0


def kernel_relation(p: EvaluableMap) -> EvaluableMap:
    """E(x, y) = 1 iff p(x) == p(y): the kernel of a potential map."""
    if p.arity != 1 or p.boolean:
        raise DomainError("kernel_relation wants a unary element-valued map")
    return derived_map(2, p.in_width, 1,
                       KernelFn(as_unary_table(p), p.out_width), boolean=True,
                       label=f"kernel[{p.label or 'p'}]")


def as_unary_table(m: EvaluableMap) -> list[int]:
    """Dense output list for a unary map, indexed by x-1."""
    if m.arity != 1:
        raise DomainError("as_unary_table wants a unary map")
    if m.table is not None:
        return list(m.table)
    return [m(x) for x in range(1, (1 << m.in_width) + 1)]


def as_relation_rows(e: EvaluableMap) -> list[list[int]]:
    """Dense 0/1 rows for a binary relation map: rows[x-1][y-1] = e(x, y)."""
    if e.arity != 2 or not e.boolean:
        raise DomainError("as_relation_rows wants a binary boolean map")
    size = 1 << e.in_width
    if e.table is not None:
        t = e.table
        return [list(t[r * size:(r + 1) * size]) for r in range(size)]
    return [[e(x, y) for y in range(1, size + 1)] for x in range(1, size + 1)]
