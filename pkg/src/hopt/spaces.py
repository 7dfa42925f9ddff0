"""State and effect spaces of the designated-discard (causal) model.

Universally quantified claims over "all causal states/effects" are
discharged by finite spanning sets plus linearity: each function here
returns a set of vectors whose affine hull is the full space in question.

Supported shapes: first-order objects, arrows between first-order objects,
and tensor products of supported shapes.  Anything else raises
UnsupportedCausalType (the corresponding checks report inapplicable).
"""

from __future__ import annotations

import random
from fractions import Fraction

from .objects import (
    Arrow,
    ObjExpr,
    Signature,
    Tensor,
    Unit,
    dimension,
    is_first_order,
    obj_to_str,
)
from .semantics import (
    ExactMatrix,
    random_stochastic,
    vectorize,
)


class UnsupportedCausalType(Exception):
    """No finite spanning-set rule for this object shape."""


def _deterministic_channels(din: int, dout: int) -> list[ExactMatrix]:
    """Spanning set for column-stochastic matrices: the base channel sending
    everything to outcome 0, plus single-column deviations to each other outcome."""
    def chan(assign: dict[int, int]) -> ExactMatrix:
        data = [Fraction(0)] * (dout * din)
        for j in range(din):
            i = assign.get(j, 0)
            data[i * din + j] = Fraction(1)
        return ExactMatrix(dout, din, data)

    span = [chan({})]
    for j in range(din):
        for i in range(1, dout):
            span.append(chan({j: i}))
    return span


def causal_state_span(obj: ObjExpr, sig: Signature) -> list[ExactMatrix]:
    """Column vectors affinely spanning the causal states of obj."""
    if isinstance(obj, Unit):
        return [ExactMatrix.column([Fraction(1)])]
    if is_first_order(obj):
        d = dimension(obj, sig)
        basis = []
        for i in range(d):
            v = [Fraction(0)] * d
            v[i] = Fraction(1)
            basis.append(ExactMatrix.column(v))
        return basis
    if isinstance(obj, Arrow):
        if not (is_first_order(obj.source) and is_first_order(obj.target)):
            raise UnsupportedCausalType(f"no state span for {obj_to_str(obj)}")
        din = dimension(obj.source, sig)
        dout = dimension(obj.target, sig)
        return [vectorize(c) for c in _deterministic_channels(din, dout)]
    if isinstance(obj, Tensor):
        left = causal_state_span(obj.left, sig)
        right = causal_state_span(obj.right, sig)
        return [u.kron(w) for u in left for w in right]
    raise UnsupportedCausalType(f"no state span for {obj_to_str(obj)}")


def causal_effect_span(obj: ObjExpr, sig: Signature) -> list[ExactMatrix]:
    """Row covectors affinely spanning the causal effects on obj.

    On first-order objects the span is the single designated discard; on an
    arrow between first-order objects the causal effects are exactly
    insert-a-state-then-discard, affinely spanned by the point-state inserts.
    """
    if is_first_order(obj):
        d = dimension(obj, sig)
        return [ExactMatrix.row([Fraction(1)] * d)]
    if isinstance(obj, Arrow):
        if not (is_first_order(obj.source) and is_first_order(obj.target)):
            raise UnsupportedCausalType(f"no effect span for {obj_to_str(obj)}")
        din = dimension(obj.source, sig)
        dout = dimension(obj.target, sig)
        span = []
        for a in range(din):
            e = [Fraction(0)] * (din * dout)
            for b in range(dout):
                e[a * dout + b] = Fraction(1)
            span.append(ExactMatrix.row(e))
        return span
    raise UnsupportedCausalType(f"no effect span for {obj_to_str(obj)}")


def normalizing_effects(obj: ObjExpr, sig: Signature) -> list[ExactMatrix]:
    """Causal effects that must give 1 on every causal state of obj: the
    discard on first-order factors, state-insert-then-discard on arrow
    factors, all pairwise products across tensors."""
    if is_first_order(obj):
        return [ExactMatrix.row([Fraction(1)] * dimension(obj, sig))]
    if isinstance(obj, (Arrow, Tensor)):
        if isinstance(obj, Arrow):
            return causal_effect_span(obj, sig)
        left = normalizing_effects(obj.left, sig)
        right = normalizing_effects(obj.right, sig)
        return [e.kron(f) for e in left for f in right]
    raise UnsupportedCausalType(f"no normalizing effects for {obj_to_str(obj)}")


def insert_state_effect(rho: ExactMatrix, din: int, dout: int) -> ExactMatrix:
    """The causal effect on an arrow object that inserts state rho and
    discards the output: covector e[a*dout + b] = rho[a]."""
    if rho.cols != 1 or rho.rows != din:
        raise ValueError("state shape mismatch")
    e = [Fraction(0)] * (din * dout)
    for a in range(din):
        for b in range(dout):
            e[a * dout + b] = rho.data[a]
    return ExactMatrix.row(e)


def random_distribution(d: int, rng: random.Random, max_entry: int = 9) -> ExactMatrix:
    weights = [rng.randint(0, max_entry) for _ in range(d)]
    if sum(weights) == 0:
        weights[rng.randrange(d)] = 1
    total = sum(weights)
    return ExactMatrix.column([Fraction(w, total) for w in weights])


def random_causal_state(obj: ObjExpr, sig: Signature, rng: random.Random,
                        mix: int = 4, max_entry: int = 9) -> ExactMatrix:
    """Seeded causal state: on first-order objects a random distribution, on
    arrows the static form of a random channel, on tensors a random convex
    mixture of product states."""
    if isinstance(obj, Unit):
        return ExactMatrix.column([Fraction(1)])
    if is_first_order(obj):
        return random_distribution(dimension(obj, sig), rng, max_entry)
    if isinstance(obj, Arrow):
        if not (is_first_order(obj.source) and is_first_order(obj.target)):
            raise UnsupportedCausalType(f"no random state for {obj_to_str(obj)}")
        din = dimension(obj.source, sig)
        dout = dimension(obj.target, sig)
        return vectorize(random_stochastic(dout, din, rng, max_entry))
    if isinstance(obj, Tensor):
        parts = []
        for _ in range(mix):
            u = random_causal_state(obj.left, sig, rng, mix, max_entry)
            w = random_causal_state(obj.right, sig, rng, mix, max_entry)
            parts.append(u.kron(w))
        weights = random_distribution(mix, rng, max_entry)
        out = parts[0].scale(weights.data[0])
        for k in range(1, mix):
            out = out.add(parts[k].scale(weights.data[k]))
        return out
    raise UnsupportedCausalType(f"no random state for {obj_to_str(obj)}")
