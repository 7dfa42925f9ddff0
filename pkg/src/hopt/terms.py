"""Morphism language: free terms over base generators plus canonical processes.

Primitive constructors cover the structural morphisms of a symmetric monoidal
category, the insertion/eta/composition-supermap/partial-insertion family, the
static identity, the designated discard, and the static form Hat(f) of an
arbitrary term.  Everything else (currying, dualiser, lifting, static
currying, the arrow bifunctor) is a derived construction whose defining
equations are checked by evaluation, not assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .objects import (
    UNIT,
    Arrow,
    ObjExpr,
    Signature,
    Tensor,
    is_causal_object,
    is_first_order,
    obj_to_str,
    validate_obj,
)


class HoptTypeError(Exception):
    """A term fails to typecheck; the message names the offending subterm."""


class MorTerm:
    """Marker base class for morphism terms."""

    __slots__ = ()

    def __str__(self) -> str:
        return term_to_str(self)


@dataclass(frozen=True, slots=True)
class Gen(MorTerm):
    name: str


@dataclass(frozen=True, slots=True)
class Id(MorTerm):
    obj: ObjExpr


@dataclass(frozen=True, slots=True)
class Compose(MorTerm):
    # after . before, i.e. apply `before` first
    after: MorTerm
    before: MorTerm


@dataclass(frozen=True, slots=True)
class TensorM(MorTerm):
    left: MorTerm
    right: MorTerm


@dataclass(frozen=True, slots=True)
class Swap(MorTerm):
    left: ObjExpr
    right: ObjExpr


@dataclass(frozen=True, slots=True)
class LUnit(MorTerm):
    obj: ObjExpr  # I * A -> A


@dataclass(frozen=True, slots=True)
class LUnitInv(MorTerm):
    obj: ObjExpr  # A -> I * A


@dataclass(frozen=True, slots=True)
class RUnit(MorTerm):
    obj: ObjExpr  # A * I -> A


@dataclass(frozen=True, slots=True)
class RUnitInv(MorTerm):
    obj: ObjExpr  # A -> A * I


@dataclass(frozen=True, slots=True)
class Assoc(MorTerm):
    a: ObjExpr
    b: ObjExpr
    c: ObjExpr  # (A * B) * C -> A * (B * C)


@dataclass(frozen=True, slots=True)
class AssocInv(MorTerm):
    a: ObjExpr
    b: ObjExpr
    c: ObjExpr  # A * (B * C) -> (A * B) * C


@dataclass(frozen=True, slots=True)
class Eps(MorTerm):
    source: ObjExpr
    target: ObjExpr  # (A => B) * A -> B


@dataclass(frozen=True, slots=True)
class Eta(MorTerm):
    obj: ObjExpr  # A -> (I => A)


@dataclass(frozen=True, slots=True)
class SeqComp(MorTerm):
    source: ObjExpr
    mid: ObjExpr
    target: ObjExpr  # (B => C) * (A => B) -> (A => C)


@dataclass(frozen=True, slots=True)
class ParComp(MorTerm):
    a: ObjExpr
    a_out: ObjExpr
    b: ObjExpr
    b_out: ObjExpr  # (A => A') * (B => B') -> (A * B) => (A' * B')


@dataclass(frozen=True, slots=True)
class DeltaPartial(MorTerm):
    held: ObjExpr
    slot: ObjExpr
    target: ObjExpr  # ((C * A) => B) * C -> (A => B)


@dataclass(frozen=True, slots=True)
class HatId(MorTerm):
    obj: ObjExpr  # I -> (A => A)


@dataclass(frozen=True, slots=True)
class Discard(MorTerm):
    obj: ObjExpr  # A -> I, causal first-order A only


@dataclass(frozen=True, slots=True)
class Hat(MorTerm):
    body: MorTerm  # I -> (dom(body) => cod(body))


@dataclass(frozen=True)
class TypedTerm:
    """A term together with its (checked) domain and codomain."""

    term: MorTerm
    dom: ObjExpr
    cod: ObjExpr


def term_to_str(term: MorTerm) -> str:
    """Render a term in the concrete syntax used by the DSL front end."""
    def render(t: MorTerm, ctx: int) -> str:
        # ctx: 0 = compose position, 1 = tensor, 2 = atom
        if isinstance(t, Compose):
            s = f"{render(t.after, 0)} . {render(t.before, 1)}"
            return f"({s})" if ctx >= 1 else s
        if isinstance(t, TensorM):
            s = f"{render(t.left, 1)} * {render(t.right, 2)}"
            return f"({s})" if ctx >= 2 else s
        return atom(t)

    def o(x: ObjExpr) -> str:
        return obj_to_str(x)

    def atom(t: MorTerm) -> str:
        if isinstance(t, Gen):
            return t.name
        if isinstance(t, Id):
            return f"id({o(t.obj)})"
        if isinstance(t, Swap):
            return f"swap({o(t.left)}, {o(t.right)})"
        if isinstance(t, LUnit):
            return f"lunit({o(t.obj)})"
        if isinstance(t, LUnitInv):
            return f"lunit_inv({o(t.obj)})"
        if isinstance(t, RUnit):
            return f"runit({o(t.obj)})"
        if isinstance(t, RUnitInv):
            return f"runit_inv({o(t.obj)})"
        if isinstance(t, Assoc):
            return f"assoc({o(t.a)}, {o(t.b)}, {o(t.c)})"
        if isinstance(t, AssocInv):
            return f"assoc_inv({o(t.a)}, {o(t.b)}, {o(t.c)})"
        if isinstance(t, Eps):
            return f"eps({o(t.source)}, {o(t.target)})"
        if isinstance(t, Eta):
            return f"eta({o(t.obj)})"
        if isinstance(t, SeqComp):
            return f"seq({o(t.source)}, {o(t.mid)}, {o(t.target)})"
        if isinstance(t, ParComp):
            return f"par({o(t.a)}, {o(t.a_out)}, {o(t.b)}, {o(t.b_out)})"
        if isinstance(t, DeltaPartial):
            return f"delta({o(t.held)}, {o(t.slot)}, {o(t.target)})"
        if isinstance(t, HatId):
            return f"hatid({o(t.obj)})"
        if isinstance(t, Discard):
            return f"discard({o(t.obj)})"
        if isinstance(t, Hat):
            return f"hat({render(t.body, 0)})"
        raise TypeError(f"not a morphism term: {t!r}")

    return render(term, 0)


def typecheck(term: MorTerm, sig: Signature) -> TypedTerm:
    """Compute dom/cod of a term, raising HoptTypeError on any mismatch.

    Deterministic and total on well-formed trees; composition requires
    syntactic equality of the intermediate object.
    """
    dom, cod = _infer(term, sig)
    return TypedTerm(term, dom, cod)


def _infer(t: MorTerm, sig: Signature) -> tuple[ObjExpr, ObjExpr]:
    if isinstance(t, Gen):
        return sig.gen_type(t.name)
    if isinstance(t, Id):
        validate_obj(t.obj, sig)
        return t.obj, t.obj
    if isinstance(t, Compose):
        bdom, bcod = _infer(t.before, sig)
        adom, acod = _infer(t.after, sig)
        if bcod != adom:
            raise HoptTypeError(
                f"composition mismatch: cod {obj_to_str(bcod)} of {term_to_str(t.before)}"
                f" != dom {obj_to_str(adom)} of {term_to_str(t.after)}"
            )
        return bdom, acod
    if isinstance(t, TensorM):
        ldom, lcod = _infer(t.left, sig)
        rdom, rcod = _infer(t.right, sig)
        return Tensor(ldom, rdom), Tensor(lcod, rcod)
    if isinstance(t, Swap):
        validate_obj(t.left, sig)
        validate_obj(t.right, sig)
        return Tensor(t.left, t.right), Tensor(t.right, t.left)
    if isinstance(t, LUnit):
        validate_obj(t.obj, sig)
        return Tensor(UNIT, t.obj), t.obj
    if isinstance(t, LUnitInv):
        validate_obj(t.obj, sig)
        return t.obj, Tensor(UNIT, t.obj)
    if isinstance(t, RUnit):
        validate_obj(t.obj, sig)
        return Tensor(t.obj, UNIT), t.obj
    if isinstance(t, RUnitInv):
        validate_obj(t.obj, sig)
        return t.obj, Tensor(t.obj, UNIT)
    if isinstance(t, Assoc):
        for x in (t.a, t.b, t.c):
            validate_obj(x, sig)
        return Tensor(Tensor(t.a, t.b), t.c), Tensor(t.a, Tensor(t.b, t.c))
    if isinstance(t, AssocInv):
        for x in (t.a, t.b, t.c):
            validate_obj(x, sig)
        return Tensor(t.a, Tensor(t.b, t.c)), Tensor(Tensor(t.a, t.b), t.c)
    if isinstance(t, Eps):
        validate_obj(t.source, sig)
        validate_obj(t.target, sig)
        return Tensor(Arrow(t.source, t.target), t.source), t.target
    if isinstance(t, Eta):
        validate_obj(t.obj, sig)
        return t.obj, Arrow(UNIT, t.obj)
    if isinstance(t, SeqComp):
        for x in (t.source, t.mid, t.target):
            validate_obj(x, sig)
        return (
            Tensor(Arrow(t.mid, t.target), Arrow(t.source, t.mid)),
            Arrow(t.source, t.target),
        )
    if isinstance(t, ParComp):
        for x in (t.a, t.a_out, t.b, t.b_out):
            validate_obj(x, sig)
        return (
            Tensor(Arrow(t.a, t.a_out), Arrow(t.b, t.b_out)),
            Arrow(Tensor(t.a, t.b), Tensor(t.a_out, t.b_out)),
        )
    if isinstance(t, DeltaPartial):
        for x in (t.held, t.slot, t.target):
            validate_obj(x, sig)
        return (
            Tensor(Arrow(Tensor(t.held, t.slot), t.target), t.held),
            Arrow(t.slot, t.target),
        )
    if isinstance(t, HatId):
        validate_obj(t.obj, sig)
        return UNIT, Arrow(t.obj, t.obj)
    if isinstance(t, Discard):
        validate_obj(t.obj, sig)
        if not is_first_order(t.obj):
            raise HoptTypeError(f"discard needs a first-order object, got {obj_to_str(t.obj)}")
        if not is_causal_object(t.obj, sig):
            raise HoptTypeError(f"discard needs a causal object, got {obj_to_str(t.obj)}")
        return t.obj, UNIT
    if isinstance(t, Hat):
        bdom, bcod = _infer(t.body, sig)
        return UNIT, Arrow(bdom, bcod)
    raise TypeError(f"not a morphism term: {t!r}")


def _as_typed(f: MorTerm | TypedTerm, sig: Signature) -> TypedTerm:
    if isinstance(f, TypedTerm):
        return typecheck(f.term, sig)
    return typecheck(f, sig)


def hat(f: MorTerm | TypedTerm, sig: Signature) -> TypedTerm:
    """Static form f-hat : I -> (A => B) of a process f : A -> B."""
    tf = _as_typed(f, sig)
    return typecheck(Hat(tf.term), sig)


def name_state(f: MorTerm | TypedTerm, sig: Signature) -> TypedTerm:
    """Static representation eta . rho of a state rho : I -> B."""
    tf = _as_typed(f, sig)
    if tf.dom != UNIT:
        raise HoptTypeError(f"name needs a state (dom I), got dom {obj_to_str(tf.dom)}")
    return typecheck(Compose(Eta(tf.cod), tf.term), sig)


name = name_state


def curry(f: MorTerm | TypedTerm, sig: Signature) -> TypedTerm:
    """Curried form C -> (A => B) of f : (C * A) -> B, built via the partial
    insertion: Delta . (hat(f) * id_C) . lunit_inv."""
    tf = _as_typed(f, sig)
    if not isinstance(tf.dom, Tensor):
        raise HoptTypeError(f"curry needs a tensor domain, got {obj_to_str(tf.dom)}")
    held, slot = tf.dom.left, tf.dom.right
    t = Compose(
        Compose(
            DeltaPartial(held, slot, tf.cod),
            TensorM(Hat(tf.term), Id(held)),
        ),
        LUnitInv(held),
    )
    return typecheck(t, sig)


def insertion_image(g: MorTerm | TypedTerm, sig: Signature) -> TypedTerm:
    """E(g) = eps . (g * id_A) : C * A -> B for g : C -> (A => B)."""
    tg = _as_typed(g, sig)
    if not isinstance(tg.cod, Arrow):
        raise HoptTypeError(f"insertion image needs an arrow codomain, got {obj_to_str(tg.cod)}")
    a, b = tg.cod.source, tg.cod.target
    return typecheck(Compose(Eps(a, b), TensorM(tg.term, Id(a))), sig)


def dualiser(a: ObjExpr, sig: Signature) -> TypedTerm:
    """d_A : A -> ((A => I) => I), the currying of eps . swap."""
    validate_obj(a, sig)
    ev = Compose(Eps(a, UNIT), Swap(a, Arrow(a, UNIT)))  # A * (A => I) -> I
    return curry(ev, sig)


def lift(a: ObjExpr, b: ObjExpr, sig: Signature) -> TypedTerm:
    """T_AB : (A => B) -> ((B => I) => (A => I)), by two curryings of the
    evaluate-then-discard composite."""
    validate_obj(a, sig)
    validate_obj(b, sig)
    fab, eb = Arrow(a, b), Arrow(b, UNIT)
    # ((A=>B) * (B=>I)) * A -> I : shuffle to (B=>I) * ((A=>B) * A), insert twice
    shuffled = Compose(Assoc(eb, fab, a), TensorM(Swap(fab, eb), Id(a)))
    ev = Compose(Eps(b, UNIT), Compose(TensorM(Id(eb), Eps(a, b)), shuffled))
    inner = curry(ev, sig)  # (A=>B) * (B=>I) -> (A => I)
    return curry(inner, sig)


def phi(c: ObjExpr, a: ObjExpr, b: ObjExpr, sig: Signature) -> TypedTerm:
    """Static currying (C => (A => B)) -> ((C * A) => B), the currying of the
    double insertion."""
    for x in (c, a, b):
        validate_obj(x, sig)
    f = Arrow(c, Arrow(a, b))
    ev = Compose(
        Eps(a, b),
        Compose(TensorM(Eps(c, Arrow(a, b)), Id(a)), AssocInv(f, c, a)),
    )  # F * (C * A) -> B
    return curry(ev, sig)


def phi_inv(c: ObjExpr, a: ObjExpr, b: ObjExpr, sig: Signature) -> TypedTerm:
    """The currying of the partial insertion itself: ((C * A) => B) -> (C => (A => B))."""
    for x in (c, a, b):
        validate_obj(x, sig)
    return curry(DeltaPartial(c, a, b), sig)


def arrow_functor(f: MorTerm | TypedTerm, g: MorTerm | TypedTerm, sig: Signature) -> TypedTerm:
    """(f => g) : (A => B) -> (A' => B') for f : A' -> A and g : B -> B',
    built from the sequential-composition supermap and static forms."""
    tf = _as_typed(f, sig)
    tg = _as_typed(g, sig)
    a_in, a = tf.dom, tf.cod
    b, b_out = tg.dom, tg.cod
    fab = Arrow(a, b)
    # pre-composition with f: (A => B) -> (A' => B)
    pre = Compose(
        SeqComp(a_in, a, b),
        Compose(TensorM(Id(fab), Hat(tf.term)), RUnitInv(fab)),
    )
    # post-composition with g on the result
    t = Compose(
        SeqComp(a_in, b, b_out),
        Compose(TensorM(Hat(tg.term), pre), LUnitInv(fab)),
    )
    return typecheck(t, sig)
