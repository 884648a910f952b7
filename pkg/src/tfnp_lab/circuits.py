"""Gate-level circuits over {AND, OR, XOR, NOT, CONST0, CONST1}.

A circuit is a flat acyclic node list: nodes 0..input_count-1 are the input
bits, gate i is node input_count+i, and every gate may only reference
strictly earlier nodes, so well-formedness implies acyclicity.

The combinators below are what the reductions use when they synthesize a
new map out of old ones.  Each one splices its operands' gate lists into a
fresh circuit, so gate counts add up: the documented bound for every
combinator is linear in the operand sizes plus a term linear in the bit
widths involved.
"""

from __future__ import annotations

from dataclasses import dataclass

OP_ARITY = {"AND": 2, "OR": 2, "XOR": 2, "NOT": 1, "CONST0": 0, "CONST1": 0}


class CircuitError(ValueError):
    """Malformed circuit: bad op, bad operand reference, width clash."""


@dataclass(frozen=True)
class CircuitIR:
    input_count: int
    gates: tuple[tuple[str, tuple[int, ...]], ...]
    outputs: tuple[int, ...]

    def __post_init__(self):
        if self.input_count < 0:
            raise CircuitError("negative input count")
        for pos, (op, operands) in enumerate(self.gates):
            if op not in OP_ARITY:
                raise CircuitError(f"unknown gate op {op!r}")
            if len(operands) != OP_ARITY[op]:
                raise CircuitError(
                    f"gate {op} at {pos} wants {OP_ARITY[op]} operands, got {len(operands)}"
                )
            node = self.input_count + pos
            for ref in operands:
                if not 0 <= ref < node:
                    raise CircuitError(
                        f"gate at {pos} references node {ref}; only nodes below {node} exist"
                    )
        node_count = self.input_count + len(self.gates)
        for ref in self.outputs:
            if not 0 <= ref < node_count:
                raise CircuitError(f"output references missing node {ref}")

    @property
    def gate_count(self) -> int:
        return len(self.gates)

    @property
    def output_count(self) -> int:
        return len(self.outputs)


def simulate(circuit: CircuitIR, bits) -> tuple[int, ...]:
    """Evaluate the circuit on a sequence of 0/1 input bits."""
    if len(bits) != circuit.input_count:
        raise CircuitError(
            f"expected {circuit.input_count} input bits, got {len(bits)}"
        )
    values = list(bits)
    for op, operands in circuit.gates:
        if op == "AND":
            v = values[operands[0]] & values[operands[1]]
        elif op == "OR":
            v = values[operands[0]] | values[operands[1]]
        elif op == "XOR":
            v = values[operands[0]] ^ values[operands[1]]
        elif op == "NOT":
            v = 1 - values[operands[0]]
        elif op == "CONST0":
            v = 0
        else:  # CONST1
            v = 1
        values.append(v)
    return tuple(values[ref] for ref in circuit.outputs)


class _Builder:
    """Mutable scratchpad for assembling a CircuitIR."""

    def __init__(self, input_count: int):
        self.input_count = input_count
        self.gates: list[tuple[str, tuple[int, ...]]] = []

    def gate(self, op: str, *operands: int) -> int:
        self.gates.append((op, operands))
        return self.input_count + len(self.gates) - 1

    def const(self, bit: int) -> int:
        return self.gate("CONST1" if bit else "CONST0")

    def splice(self, circuit: CircuitIR, input_nodes) -> list[int]:
        """Inline another circuit's gates, rewiring its inputs to the given
        nodes of this builder.  Returns the nodes now carrying its outputs."""
        if len(input_nodes) != circuit.input_count:
            raise CircuitError("splice arity mismatch")
        remap = list(input_nodes)
        for op, operands in circuit.gates:
            remap.append(self.gate(op, *(remap[r] for r in operands)))
        return [remap[r] for r in circuit.outputs]

    def finish(self, outputs) -> CircuitIR:
        return CircuitIR(self.input_count, tuple(self.gates), tuple(outputs))


# ============================================================
# combinators
# ============================================================


def constant(bits, input_count: int = 0) -> CircuitIR:
    """Ignore all inputs and emit the fixed bit pattern.  Gates: len(bits)."""
    b = _Builder(input_count)
    return b.finish([b.const(bit) for bit in bits])


def compose(outer: CircuitIR, inner: CircuitIR) -> CircuitIR:
    """outer(inner(x)).  Gates: inner + outer."""
    if inner.output_count != outer.input_count:
        raise CircuitError(
            f"compose width clash: inner yields {inner.output_count} bits, "
            f"outer wants {outer.input_count}"
        )
    b = _Builder(inner.input_count)
    mid = b.splice(inner, range(inner.input_count))
    out = b.splice(outer, mid)
    return b.finish(out)


def pair(f: CircuitIR, g: CircuitIR) -> CircuitIR:
    """(f(x), g(x)) over a shared input.  Gates: f + g."""
    if f.input_count != g.input_count:
        raise CircuitError("pair operands disagree on input width")
    b = _Builder(f.input_count)
    left = b.splice(f, range(f.input_count))
    right = b.splice(g, range(g.input_count))
    return b.finish(left + right)


def parallel(f: CircuitIR, g: CircuitIR) -> CircuitIR:
    """(f(x), g(y)) over concatenated disjoint inputs.  Gates: f + g."""
    b = _Builder(f.input_count + g.input_count)
    left = b.splice(f, range(f.input_count))
    right = b.splice(g, range(f.input_count, f.input_count + g.input_count))
    return b.finish(left + right)


def select(cond: CircuitIR, a: CircuitIR, b: CircuitIR) -> CircuitIR:
    """Bitwise mux: cond(x) ? a(x) : b(x).

    All three operands read the same input block; cond must emit one bit
    and a, b must agree on output width.  Gates: cond + a + b + 3*width + 1.
    """
    if not (cond.input_count == a.input_count == b.input_count):
        raise CircuitError("select operands disagree on input width")
    if cond.output_count != 1:
        raise CircuitError("select condition must emit exactly one bit")
    if a.output_count != b.output_count:
        raise CircuitError("select branches disagree on output width")
    bld = _Builder(cond.input_count)
    (c,) = bld.splice(cond, range(cond.input_count))
    not_c = bld.gate("NOT", c)
    a_out = bld.splice(a, range(a.input_count))
    b_out = bld.splice(b, range(b.input_count))
    outs = []
    for abit, bbit in zip(a_out, b_out):
        outs.append(bld.gate("OR", bld.gate("AND", c, abit), bld.gate("AND", not_c, bbit)))
    return bld.finish(outs)


def equality(width: int) -> CircuitIR:
    """One bit: are two width-bit operands identical?  Gates: 3*width."""
    if width < 1:
        raise CircuitError("equality needs positive width")
    b = _Builder(2 * width)
    acc = None
    for i in range(width):
        same = b.gate("NOT", b.gate("XOR", i, width + i))
        acc = same if acc is None else b.gate("AND", acc, same)
    return b.finish([acc])


def compare_leq(width: int) -> CircuitIR:
    """One bit: unsigned x <= y, both width bits MSB first.  Gates: ~6*width."""
    if width < 1:
        raise CircuitError("compare_leq needs positive width")
    b = _Builder(2 * width)
    gt = None          # x > y decided at some earlier bit
    eq_prefix = None   # all bits so far equal
    for i in range(width):
        x, y = i, width + i
        here_gt = b.gate("AND", x, b.gate("NOT", y))
        if eq_prefix is not None:
            here_gt = b.gate("AND", eq_prefix, here_gt)
        gt = here_gt if gt is None else b.gate("OR", gt, here_gt)
        same = b.gate("NOT", b.gate("XOR", x, y))
        eq_prefix = same if eq_prefix is None else b.gate("AND", eq_prefix, same)
    return b.finish([b.gate("NOT", gt)])


def project(input_count: int, positions) -> CircuitIR:
    """Pass selected input bits through in the given order.  Gates: 0."""
    return CircuitIR(input_count, (), tuple(positions))


def and_all(width: int) -> CircuitIR:
    """AND-reduce width input bits to one.  Gates: width - 1."""
    if width < 1:
        raise CircuitError("and_all needs positive width")
    b = _Builder(width)
    acc = 0
    for i in range(1, width):
        acc = b.gate("AND", acc, i)
    return b.finish([acc])


def prepend_flipped_bit(f: CircuitIR) -> CircuitIR:
    """From f compute (1-b, f(x)) on input (b, x).  Gates: f + 1.

    This is the doubling trick: the leading input bit comes back inverted,
    so no input can ever equal its own image.
    """
    b = _Builder(1 + f.input_count)
    flipped = b.gate("NOT", 0)
    rest = b.splice(f, range(1, 1 + f.input_count))
    return b.finish([flipped] + rest)


def from_bit_table(input_count: int, rows) -> CircuitIR:
    """Sum-of-minterms synthesis from an explicit truth table.

    rows[i] is the output bit tuple for the input pattern with value i
    (bits MSB first).  Gate count is O(2^input_count * input_count) per
    output bit; this is test plumbing, not one of the cheap combinators.
    """
    if input_count > 12:
        raise CircuitError("refusing truth-table synthesis beyond 12 input bits")
    size = 1 << input_count
    if len(rows) != size:
        raise CircuitError(f"need {size} rows, got {len(rows)}")
    width = len(rows[0]) if rows else 0
    b = _Builder(input_count)
    inverted = [b.gate("NOT", i) for i in range(input_count)]

    minterm_cache: dict[int, int] = {}

    def minterm(pattern: int) -> int:
        if pattern in minterm_cache:
            return minterm_cache[pattern]
        acc = None
        for i in range(input_count):
            bit_on = (pattern >> (input_count - 1 - i)) & 1
            lit = i if bit_on else inverted[i]
            acc = lit if acc is None else b.gate("AND", acc, lit)
        if acc is None:
            acc = b.const(1)
        minterm_cache[pattern] = acc
        return acc

    outs = []
    for j in range(width):
        acc = None
        for pattern in range(size):
            if len(rows[pattern]) != width:
                raise CircuitError("ragged truth table")
            if rows[pattern][j]:
                t = minterm(pattern)
                acc = t if acc is None else b.gate("OR", acc, t)
        outs.append(b.const(0) if acc is None else acc)
    return b.finish(outs)
