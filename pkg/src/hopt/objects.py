"""Object language: the free algebra of system types.

Objects are finite syntax trees built from declared base systems by the
binary tensor product and the internal hom (arrow).  Equality is strictly
syntactic: unitors and associators are explicit morphisms elsewhere, never
silent rewrites of the trees themselves.
"""

from __future__ import annotations

from dataclasses import dataclass


class SignatureError(Exception):
    """A name is undeclared, duplicated, or otherwise clashes with the signature."""


class ObjExpr:
    """Marker base class for object expressions."""

    __slots__ = ()

    def __str__(self) -> str:
        return obj_to_str(self)


@dataclass(frozen=True, slots=True)
class Unit(ObjExpr):
    """The monoidal unit I."""


@dataclass(frozen=True, slots=True)
class Base(ObjExpr):
    name: str


@dataclass(frozen=True, slots=True)
class Tensor(ObjExpr):
    left: ObjExpr
    right: ObjExpr


@dataclass(frozen=True, slots=True)
class Arrow(ObjExpr):
    source: ObjExpr
    target: ObjExpr


UNIT = Unit()


def obj_to_str(obj: ObjExpr) -> str:
    """Render an object with `*` for tensor and `=>` for the internal hom.

    `=>` binds loosest and associates to the right; `*` associates to the
    left.  Output re-parses to the same tree.
    """
    def render(o: ObjExpr, ctx: int) -> str:
        # ctx: 0 = arrow position (loosest), 1 = tensor, 2 = atom
        if isinstance(o, Unit):
            return "I"
        if isinstance(o, Base):
            return o.name
        if isinstance(o, Tensor):
            s = f"{render(o.left, 1)} * {render(o.right, 2)}"
            return f"({s})" if ctx >= 2 else s
        if isinstance(o, Arrow):
            s = f"{render(o.source, 1)} => {render(o.target, 0)}"
            return f"({s})" if ctx >= 1 else s
        raise TypeError(f"not an object expression: {o!r}")

    return render(obj, 0)


@dataclass(frozen=True)
class Signature:
    """Declared base systems and generators; fixes the first-order theory.

    base_objects: ordered (name, dimension) pairs, dimension >= 1.
    base_generators: ordered (name, dom, cod) triples over this signature.
    causal_bases: subset of base object names flagged causal.
    """

    base_objects: tuple[tuple[str, int], ...] = ()
    base_generators: tuple[tuple[str, ObjExpr, ObjExpr], ...] = ()
    causal_bases: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "base_objects", tuple(self.base_objects))
        object.__setattr__(self, "base_generators", tuple(self.base_generators))
        object.__setattr__(self, "causal_bases", frozenset(self.causal_bases))
        seen: set[str] = set()
        for name, dim in self.base_objects:
            if name in seen:
                raise SignatureError(f"duplicate name {name!r}")
            seen.add(name)
            if not isinstance(dim, int) or dim < 1:
                raise SignatureError(f"base {name!r} needs a positive integer dimension, got {dim!r}")
        for name, dom, cod in self.base_generators:
            if name in seen:
                raise SignatureError(f"duplicate name {name!r}")
            seen.add(name)
            validate_obj(dom, self)
            validate_obj(cod, self)
        missing = self.causal_bases - {n for n, _ in self.base_objects}
        if missing:
            raise SignatureError(f"causal flags on undeclared bases: {sorted(missing)}")

    def dim_of_base(self, name: str) -> int:
        for n, d in self.base_objects:
            if n == name:
                return d
        raise SignatureError(f"undeclared base object {name!r}")

    def gen_type(self, name: str) -> tuple[ObjExpr, ObjExpr]:
        for n, dom, cod in self.base_generators:
            if n == name:
                return dom, cod
        raise SignatureError(f"undeclared generator {name!r}")

    def has_base(self, name: str) -> bool:
        return any(n == name for n, _ in self.base_objects)


def validate_obj(obj: ObjExpr, sig: Signature) -> None:
    """Check every base name in obj is declared; raise SignatureError otherwise."""
    if isinstance(obj, Unit):
        return
    if isinstance(obj, Base):
        if not sig.has_base(obj.name):
            raise SignatureError(f"undeclared base object {obj.name!r}")
        return
    if isinstance(obj, Tensor):
        validate_obj(obj.left, sig)
        validate_obj(obj.right, sig)
        return
    if isinstance(obj, Arrow):
        validate_obj(obj.source, sig)
        validate_obj(obj.target, sig)
        return
    raise TypeError(f"not an object expression: {obj!r}")


def is_first_order(obj: ObjExpr) -> bool:
    """True iff no arrow node occurs in obj (i.e. obj lives in the first-order theory)."""
    if isinstance(obj, (Unit, Base)):
        return True
    if isinstance(obj, Tensor):
        return is_first_order(obj.left) and is_first_order(obj.right)
    if isinstance(obj, Arrow):
        return False
    raise TypeError(f"not an object expression: {obj!r}")


def dimension(obj: ObjExpr, sig: Signature) -> int:
    """Model dimension: 1 on the unit, declared on bases, multiplicative on
    tensor and arrow (the internal hom of the matrix model has dim(A)*dim(B))."""
    if isinstance(obj, Unit):
        return 1
    if isinstance(obj, Base):
        return sig.dim_of_base(obj.name)
    if isinstance(obj, Tensor):
        return dimension(obj.left, sig) * dimension(obj.right, sig)
    if isinstance(obj, Arrow):
        return dimension(obj.source, sig) * dimension(obj.target, sig)
    raise TypeError(f"not an object expression: {obj!r}")


def dual(obj: ObjExpr) -> ObjExpr:
    """The effect type A => I."""
    return Arrow(obj, UNIT)


def double_dual(obj: ObjExpr) -> ObjExpr:
    """The effect-on-effects type (A => I) => I."""
    return Arrow(Arrow(obj, UNIT), UNIT)


def is_causal_object(obj: ObjExpr, sig: Signature) -> bool:
    """First-order and built only from causal-flagged bases (and the unit)."""
    if isinstance(obj, Unit):
        return True
    if isinstance(obj, Base):
        return obj.name in sig.causal_bases
    if isinstance(obj, Tensor):
        return is_causal_object(obj.left, sig) and is_causal_object(obj.right, sig)
    return False
