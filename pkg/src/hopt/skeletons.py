"""Circuit skeletons: DAGs of typed insertion holes, compiled to terms.

A skeleton is compiled to a morphism whose only non-structural constructors
are insertions, one per hole, with domain (tensor of hole types in
topological order) * (global inputs in declared order) and codomain the
tensor of global outputs.  Layout is deterministic so compiled terms are
byte-stable across runs: topological ties break on node id, and wire routing
uses adjacent transpositions applied to a left-nested live wire list.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .objects import (
    UNIT,
    Arrow,
    ObjExpr,
    Signature,
    Tensor,
    dimension,
    is_first_order,
    obj_to_str,
)
from .semantics import (
    ExactMatrix,
    Interpretation,
    eval_term,
    ones_row,
    vectorize,
)
from .terms import (
    Assoc,
    AssocInv,
    Compose,
    Eps,
    Id,
    MorTerm,
    Swap,
    TensorM,
    TypedTerm,
    typecheck,
)


class StructuralError(Exception):
    """A skeleton violates its shape invariants; the message names the culprit."""


class AssignmentError(Exception):
    """A hole assignment does not match its hole type or causal-mode constraints."""


@dataclass(frozen=True)
class SkeletonNode:
    node_id: str
    hole: Arrow  # first-order source and target


@dataclass(frozen=True)
class Wire:
    source: tuple[str, str]  # ("input", name) | ("node", id)
    target: tuple[str, str]  # ("output", name) | ("node", id)
    wtype: ObjExpr


@dataclass(frozen=True)
class CircuitSkeleton:
    nodes: tuple[SkeletonNode, ...]
    inputs: tuple[tuple[str, ObjExpr], ...]
    outputs: tuple[tuple[str, ObjExpr], ...]
    wires: tuple[Wire, ...]

    def node(self, node_id: str) -> SkeletonNode:
        for n in self.nodes:
            if n.node_id == node_id:
                return n
        raise StructuralError(f"unknown node {node_id!r}")


def validate_skeleton(sk: CircuitSkeleton, sig: Signature) -> None:
    node_ids = [n.node_id for n in sk.nodes]
    if len(set(node_ids)) != len(node_ids):
        raise StructuralError("duplicate node ids")
    in_names = [n for n, _ in sk.inputs]
    out_names = [n for n, _ in sk.outputs]
    if len(set(in_names)) != len(in_names) or len(set(out_names)) != len(out_names):
        raise StructuralError("duplicate global port names")
    for n in sk.nodes:
        if not isinstance(n.hole, Arrow):
            raise StructuralError(f"node {n.node_id!r} hole type must be an arrow")
        if not (is_first_order(n.hole.source) and is_first_order(n.hole.target)):
            raise StructuralError(f"node {n.node_id!r} hole type must be first-order")
    for _, t in list(sk.inputs) + list(sk.outputs):
        if not is_first_order(t):
            raise StructuralError("global wire types must be first-order")

    def port_type(end: tuple[str, str], as_source: bool) -> ObjExpr:
        kind, name = end
        if kind == "input":
            if not as_source:
                raise StructuralError(f"global input {name!r} used as a target")
            for n, t in sk.inputs:
                if n == name:
                    return t
            raise StructuralError(f"unknown global input {name!r}")
        if kind == "output":
            if as_source:
                raise StructuralError(f"global output {name!r} used as a source")
            for n, t in sk.outputs:
                if n == name:
                    return t
            raise StructuralError(f"unknown global output {name!r}")
        if kind == "node":
            hole = sk.node(name).hole
            return hole.target if as_source else hole.source
        raise StructuralError(f"bad wire endpoint {end!r}")

    used_sources: set[tuple[str, str]] = set()
    used_targets: set[tuple[str, str]] = set()
    for w in sk.wires:
        if not is_first_order(w.wtype):
            raise StructuralError(f"wire {w.source}->{w.target} has a higher-order type")
        st = port_type(w.source, True)
        tt = port_type(w.target, False)
        if st != w.wtype or tt != w.wtype:
            raise StructuralError(
                f"wire {w.source}->{w.target} type {obj_to_str(w.wtype)} does not match"
                f" ports {obj_to_str(st)} / {obj_to_str(tt)}"
            )
        if w.source in used_sources:
            raise StructuralError(f"port {w.source} used twice as a source")
        if w.target in used_targets:
            raise StructuralError(f"port {w.target} used twice as a target")
        used_sources.add(w.source)
        used_targets.add(w.target)
    for n in sk.nodes:
        if ("node", n.node_id) not in used_sources:
            raise StructuralError(f"node {n.node_id!r} output port is unused")
        if ("node", n.node_id) not in used_targets:
            raise StructuralError(f"node {n.node_id!r} input port is unused")
    for name, _ in sk.inputs:
        if ("input", name) not in used_sources:
            raise StructuralError(f"global input {name!r} is unused")
    for name, _ in sk.outputs:
        if ("output", name) not in used_targets:
            raise StructuralError(f"global output {name!r} is unused")
    topo_order(sk)  # raises on cycles


def topo_order(sk: CircuitSkeleton) -> list[str]:
    """Topological node order, ties broken by node id."""
    preds: dict[str, set[str]] = {n.node_id: set() for n in sk.nodes}
    succs: dict[str, set[str]] = {n.node_id: set() for n in sk.nodes}
    for w in sk.wires:
        if w.source[0] == "node" and w.target[0] == "node":
            preds[w.target[1]].add(w.source[1])
            succs[w.source[1]].add(w.target[1])
    order: list[str] = []
    ready = sorted(nid for nid, ps in preds.items() if not ps)
    while ready:
        nid = ready.pop(0)
        order.append(nid)
        for nxt in sorted(succs[nid]):
            preds[nxt].discard(nid)
            if not preds[nxt]:
                ready.append(nxt)
        ready.sort()
    if len(order) != len(sk.nodes):
        stuck = sorted(set(preds) - set(order))
        raise StructuralError(f"cycle through node {stuck[0]!r}")
    return order


def _obj_of(types: list[ObjExpr]) -> ObjExpr:
    if not types:
        return UNIT
    out = types[0]
    for t in types[1:]:
        out = Tensor(out, t)
    return out


class _LiveList:
    """Left-nested list of live wires; emits structural terms for rearrangements."""

    def __init__(self, entries: list[tuple[object, ObjExpr]]):
        self.entries = list(entries)  # (key, type)
        self.steps: list[MorTerm] = []

    def types(self) -> list[ObjExpr]:
        return [t for _, t in self.entries]

    def index_of(self, key) -> int:
        for i, (k, _) in enumerate(self.entries):
            if k == key:
                return i
        raise StructuralError(f"wire {key!r} is not live")

    def _pad(self, block: MorTerm, rest: list[ObjExpr]) -> MorTerm:
        for t in rest:
            block = TensorM(block, Id(t))
        return block

    def swap_adjacent(self, i: int) -> None:
        types = self.types()
        a, b = types[i], types[i + 1]
        if i == 0:
            block: MorTerm = Swap(a, b)
        else:
            prefix = _obj_of(types[:i])
            block = Compose(
                AssocInv(prefix, b, a),
                Compose(TensorM(Id(prefix), Swap(a, b)), Assoc(prefix, a, b)),
            )
        self.steps.append(self._pad(block, types[i + 2:]))
        self.entries[i], self.entries[i + 1] = self.entries[i + 1], self.entries[i]

    def move_to(self, key, target: int) -> None:
        i = self.index_of(key)
        while i > target:
            self.swap_adjacent(i - 1)
            i -= 1
        while i < target:
            self.swap_adjacent(i)
            i += 1

    def apply_eps(self, hole_key, wire_key, hole: Arrow, out_key) -> None:
        self.move_to(hole_key, 0)
        self.move_to(wire_key, 1)
        rest = self.types()[2:]
        self.steps.append(self._pad(Eps(hole.source, hole.target), rest))
        self.entries = [(out_key, hole.target)] + self.entries[2:]


def skeleton_to_term(sk: CircuitSkeleton, sig: Signature) -> TypedTerm:
    """Compile a skeleton to a typed term with one insertion per hole."""
    validate_skeleton(sk, sig)
    order = topo_order(sk)
    wire_in: dict[str, int] = {}
    wire_out: dict[str, int] = {}
    for idx, w in enumerate(sk.wires):
        if w.target[0] == "node":
            wire_in[w.target[1]] = idx
        if w.source[0] == "node":
            wire_out[w.source[1]] = idx

    entries: list[tuple[object, ObjExpr]] = []
    for nid in order:
        entries.append((("hole", nid), sk.node(nid).hole))
    for name, t in sk.inputs:
        src_wire = next(i for i, w in enumerate(sk.wires) if w.source == ("input", name))
        entries.append((("wire", src_wire), t))

    live = _LiveList(entries)
    for nid in order:
        node = sk.node(nid)
        live.apply_eps(("hole", nid), ("wire", wire_in[nid]), node.hole,
                       ("wire", wire_out[nid]))
    for pos, (name, _) in enumerate(sk.outputs):
        tgt_wire = next(i for i, w in enumerate(sk.wires) if w.target == ("output", name))
        live.move_to(("wire", tgt_wire), pos)

    dom = _obj_of([t for _, t in entries])
    term: MorTerm = Id(dom)
    for step in live.steps:
        term = Compose(step, term) if not isinstance(term, Id) else step
    if not live.steps:
        term = Id(dom)
    return typecheck(term, sig)


def hole_order(sk: CircuitSkeleton) -> list[str]:
    return topo_order(sk)


def fill_holes(sk: CircuitSkeleton, assignment: dict[str, object],
               interp: Interpretation) -> ExactMatrix:
    """Plug a process into every hole and evaluate the resulting channel.

    Assignment values may be terms or matrices; each must match its hole type
    (and be stochastic in causal mode)."""
    compiled = skeleton_to_term(sk, interp.sig)
    order = topo_order(sk)
    hats: list[ExactMatrix] = []
    for nid in order:
        if nid not in assignment:
            raise AssignmentError(f"no process assigned to hole {nid!r}")
        node = sk.node(nid)
        val = assignment[nid]
        rows = dimension(node.hole.target, interp.sig)
        cols = dimension(node.hole.source, interp.sig)
        if isinstance(val, (TypedTerm, MorTerm)):
            typed = val if isinstance(val, TypedTerm) else typecheck(val, interp.sig)
            if typed.dom != node.hole.source or typed.cod != node.hole.target:
                raise AssignmentError(
                    f"hole {nid!r} expects {obj_to_str(node.hole)},"
                    f" got {obj_to_str(typed.dom)} -> {obj_to_str(typed.cod)}"
                )
            mat = eval_term(typed, interp)
        elif isinstance(val, ExactMatrix):
            mat = val
        else:
            raise AssignmentError(f"hole {nid!r}: cannot interpret {type(val).__name__}")
        if (mat.rows, mat.cols) != (rows, cols):
            raise AssignmentError(f"hole {nid!r}: matrix is {mat.rows}x{mat.cols},"
                                  f" expected {rows}x{cols}")
        if interp.mode == "causal" and not mat.is_stochastic():
            raise AssignmentError(f"hole {nid!r}: causal mode needs a stochastic fill")
        hats.append(vectorize(mat))

    plug: ExactMatrix | None = None
    for h in hats:
        plug = h if plug is None else plug.kron(h)
    gin_dim = 1
    for _, t in sk.inputs:
        gin_dim *= dimension(t, interp.sig)
    ident = ExactMatrix.identity(gin_dim)
    plug = ident if plug is None else plug.kron(ident)
    return eval_term(compiled, interp).mul(plug)


# ---------------------------------------------------------------------------
# Combs: skeletons whose holes lie on a single path.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Comb:
    """A skeleton with a designated linear hole order along one path."""

    skeleton: CircuitSkeleton
    hole_ids: tuple[str, ...]

    @property
    def arity(self) -> int:
        return len(self.hole_ids)


def chain_comb(systems: list[ObjExpr]) -> Comb:
    """The n-hole comb threading A_0 -> A_1 -> ... -> A_n through n holes."""
    if len(systems) < 2:
        raise StructuralError("a comb needs at least one hole, so two systems")
    n = len(systems) - 1
    nodes = tuple(
        SkeletonNode(f"h{i}", Arrow(systems[i], systems[i + 1])) for i in range(n)
    )
    wires = [Wire(("input", "in0"), ("node", "h0"), systems[0])]
    for i in range(n - 1):
        wires.append(Wire(("node", f"h{i}"), ("node", f"h{i+1}"), systems[i + 1]))
    wires.append(Wire(("node", f"h{n-1}"), ("output", "out0"), systems[n]))
    sk = CircuitSkeleton(
        nodes=nodes,
        inputs=(("in0", systems[0]),),
        outputs=(("out0", systems[n]),),
        wires=tuple(wires),
    )
    return Comb(skeleton=sk, hole_ids=tuple(f"h{i}" for i in range(n)))


def validate_comb(comb: Comb, sig: Signature) -> None:
    """Holes must be totally ordered along a single wire path."""
    validate_skeleton(comb.skeleton, sig)
    ids = list(comb.hole_ids)
    if sorted(ids) != sorted(n.node_id for n in comb.skeleton.nodes):
        raise StructuralError("comb hole order must cover exactly the skeleton nodes")
    for a, b in zip(ids, ids[1:]):
        if not any(w.source == ("node", a) and w.target == ("node", b)
                   for w in comb.skeleton.wires):
            raise StructuralError(f"holes {a!r} and {b!r} are not wired in sequence")


# ---------------------------------------------------------------------------
# Pairwise signalling analysis of a concrete channel.
# ---------------------------------------------------------------------------

def signalling_analysis(channel: ExactMatrix,
                        input_partition: list[ObjExpr],
                        output_partition: list[ObjExpr],
                        sig: Signature) -> list[list[bool]]:
    """Entry (i, j) is True iff input block i can signal to output block j:
    discard every other output block and compare the marginals as the block-i
    input ranges over a basis (exactly, for every setting of the other inputs)."""
    din = [dimension(t, sig) for t in input_partition]
    dout = [dimension(t, sig) for t in output_partition]
    total_in, total_out = 1, 1
    for d in din:
        total_in *= d
    for d in dout:
        total_out *= d
    if (channel.rows, channel.cols) != (total_out, total_in):
        raise StructuralError(
            f"channel is {channel.rows}x{channel.cols}, partitions give {total_out}x{total_in}"
        )

    def col_index(assign: list[int]) -> int:
        idx = 0
        for d, v in zip(din, assign):
            idx = idx * d + v
        return idx

    result = [[False] * len(dout) for _ in range(len(din))]
    for j, dj in enumerate(dout):
        marg: ExactMatrix | None = None
        for k, dk in enumerate(dout):
            piece = ExactMatrix.identity(dk) if k == j else ones_row(dk)
            marg = piece if marg is None else marg.kron(piece)
        mj = marg.mul(channel)  # dj x total_in
        for i, di in enumerate(din):
            if di == 1:
                continue
            others = [r for r in range(len(din)) if r != i]
            signals = False
            for setting in _mixed_radix([din[r] for r in others]):
                ref: list[Fraction] | None = None
                for v in range(di):
                    assign = [0] * len(din)
                    for r, s in zip(others, setting):
                        assign[r] = s
                    assign[i] = v
                    col = mj.col_list(col_index(assign))
                    if ref is None:
                        ref = col
                    elif col != ref:
                        signals = True
                        break
                if signals:
                    break
            result[i][j] = signals
    return result


def _mixed_radix(dims: list[int]):
    if not dims:
        yield []
        return
    for rest in _mixed_radix(dims[1:]):
        for v in range(dims[0]):
            yield [v] + rest


def to_dot(sk: CircuitSkeleton) -> str:
    """Graphviz rendering: holes as boxes labeled with types, wires as edges."""
    lines = ["digraph skeleton {", "  rankdir=LR;"]
    for name, t in sk.inputs:
        lines.append(f'  "in:{name}" [shape=plaintext, label="{name} : {obj_to_str(t)}"];')
    for n in sk.nodes:
        lines.append(f'  "{n.node_id}" [shape=box, label="{n.node_id} : {obj_to_str(n.hole)}"];')
    for name, t in sk.outputs:
        lines.append(f'  "out:{name}" [shape=plaintext, label="{name} : {obj_to_str(t)}"];')

    def dot_end(end: tuple[str, str]) -> str:
        kind, name = end
        if kind == "input":
            return f"in:{name}"
        if kind == "output":
            return f"out:{name}"
        return name

    for w in sk.wires:
        lines.append(
            f'  "{dot_end(w.source)}" -> "{dot_end(w.target)}" [label="{obj_to_str(w.wtype)}"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
