"""Textual front end: parser, AST, pretty-printer, and resolver for .hopt files.

A source file is a sequence of sections: signature blocks, object aliases,
let-bound term definitions, skeleton blocks, and check directives.  Line
comments start with '#'.  The grammar is LL(1); parse errors carry line and
column plus the expected tokens.  Canonical-constructor names are reserved
and cannot be shadowed by user declarations.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from . import terms as T
from .objects import (
    UNIT,
    Arrow,
    Base,
    ObjExpr,
    Signature,
    SignatureError,
    Tensor,
)
from .skeletons import CircuitSkeleton, SkeletonNode, StructuralError, Wire, validate_skeleton
from .terms import MorTerm, TypedTerm, typecheck


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.line = line
        self.col = col


KEYWORDS = {
    "signature", "base", "dim", "causal", "gen", "object", "let", "skeleton",
    "node", "input", "output", "wire", "check_eq", "check_theorem",
    "dims", "seeds", "samples", "in", "out", "I",
}

# constructor name -> argument kinds ("o" object, "t" term)
CONSTRUCTORS = {
    "id": "o", "eps": "oo", "eta": "o", "seq": "ooo", "par": "oooo",
    "delta": "ooo", "hatid": "o", "discard": "o", "swap": "oo",
    "lunit": "o", "lunit_inv": "o", "runit": "o", "runit_inv": "o",
    "assoc": "ooo", "assoc_inv": "ooo",
    "curry": "t", "hat": "t", "name": "t",
    "dualiser": "o", "lift": "oo", "phi": "ooo", "phi_inv": "ooo",
}

RESERVED = KEYWORDS | set(CONSTRUCTORS)

PUNCT = ("->", "=>", "{", "}", "(", ")", ";", ":", ",", ".", "*", "=")


@dataclass(frozen=True)
class Token:
    kind: str  # "ident" | "int" | punctuation literal | "eof"
    text: str
    line: int
    col: int


def tokenize(src: str) -> list[Token]:
    toks: list[Token] = []
    line, col, i = 1, 1, 0
    n = len(src)
    while i < n:
        ch = src[i]
        if ch == "\n":
            i += 1
            line += 1
            col = 1
            continue
        if ch in " \t\r":
            i += 1
            col += 1
            continue
        if ch == "#":
            while i < n and src[i] != "\n":
                i += 1
            continue
        two = src[i:i + 2]
        if two in ("->", "=>"):
            toks.append(Token(two, two, line, col))
            i += 2
            col += 2
            continue
        if ch in "{}();:,.*=":
            toks.append(Token(ch, ch, line, col))
            i += 1
            col += 1
            continue
        if ch.isdigit():
            start = i
            while i < n and src[i].isdigit():
                i += 1
            text = src[start:i]
            toks.append(Token("int", text, line, col))
            col += i - start
            continue
        if ch.isalpha() or ch == "_":
            start = i
            while i < n and (src[i].isalnum() or src[i] == "_"):
                i += 1
            text = src[start:i]
            toks.append(Token("ident", text, line, col))
            col += i - start
            continue
        raise ParseError(f"unexpected character {ch!r}", line, col)
    toks.append(Token("eof", "", line, col))
    return toks


# ---------------------------------------------------------------------------
# AST (positions excluded from equality so round-trips compare structurally).
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Pos:
    line: int
    col: int


def _pos_field():
    return field(compare=False, repr=False)


@dataclass(frozen=True)
class OUnit:
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class OName:
    name: str
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class OTensor:
    left: "ObjAst"
    right: "ObjAst"
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class OArrow:
    source: "ObjAst"
    target: "ObjAst"
    pos: Pos = _pos_field()


ObjAst = OUnit | OName | OTensor | OArrow


@dataclass(frozen=True)
class TName:
    name: str
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class TCtor:
    ctor: str
    args: tuple
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class TCompose:
    after: "TermAst"
    before: "TermAst"
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class TTensor:
    left: "TermAst"
    right: "TermAst"
    pos: Pos = _pos_field()


TermAst = TName | TCtor | TCompose | TTensor


@dataclass(frozen=True)
class SigBase:
    name: str
    dim: int
    causal: bool
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class SigGen:
    name: str
    dom: ObjAst
    cod: ObjAst
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class SignatureBlock:
    entries: tuple
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class ObjectDef:
    name: str
    obj: ObjAst
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class TermDef:
    name: str
    term: TermAst
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class SkelNodeDecl:
    name: str
    obj: ObjAst
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class SkelPortDecl:
    kind: str  # "input" | "output"
    name: str
    obj: ObjAst
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class SkelWireDecl:
    source: tuple
    target: tuple  # ("name", ident) | ("port", ident, "in"/"out")
    obj: ObjAst
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class SkeletonBlock:
    name: str
    entries: tuple
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class CheckEqDirective:
    left: TermAst
    right: TermAst
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class CheckTheoremDirective:
    theorem: str
    dims: tuple | None
    seeds: tuple | None
    samples: int | None
    pos: Pos = _pos_field()


@dataclass(frozen=True)
class SourceFileAst:
    items: tuple


class Parser:
    def __init__(self, src: str):
        self.toks = tokenize(src)
        self.i = 0

    def peek(self) -> Token:
        return self.toks[self.i]

    def next(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, kind: str, what: str | None = None) -> Token:
        t = self.peek()
        if t.kind != kind and not (kind == "ident" and t.kind == "ident"):
            expected = what or repr(kind)
            raise ParseError(f"expected {expected}, got {t.text!r}", t.line, t.col)
        return self.next()

    def expect_ident(self, word: str | None = None) -> Token:
        t = self.peek()
        if t.kind != "ident" or (word is not None and t.text != word):
            want = repr(word) if word else "an identifier"
            raise ParseError(f"expected {want}, got {t.text!r}", t.line, t.col)
        return self.next()

    def at_word(self, word: str) -> bool:
        t = self.peek()
        return t.kind == "ident" and t.text == word

    def pos(self) -> Pos:
        t = self.peek()
        return Pos(t.line, t.col)

    # -- objects ------------------------------------------------------

    def parse_obj(self) -> ObjAst:
        left = self.parse_obj_tensor()
        if self.peek().kind == "=>":
            p = self.pos()
            self.next()
            right = self.parse_obj()
            return OArrow(left, right, pos=p)
        return left

    def parse_obj_tensor(self) -> ObjAst:
        out = self.parse_obj_atom()
        while self.peek().kind == "*":
            p = self.pos()
            self.next()
            out = OTensor(out, self.parse_obj_atom(), pos=p)
        return out

    def parse_obj_atom(self) -> ObjAst:
        t = self.peek()
        if t.kind == "(":
            self.next()
            inner = self.parse_obj()
            self.expect(")")
            return inner
        if t.kind == "ident":
            self.next()
            if t.text == "I":
                return OUnit(pos=Pos(t.line, t.col))
            return OName(t.text, pos=Pos(t.line, t.col))
        raise ParseError(f"expected an object, got {t.text!r}", t.line, t.col)

    # -- terms --------------------------------------------------------

    def parse_term(self) -> TermAst:
        out = self.parse_term_tensor()
        while self.peek().kind == ".":
            p = self.pos()
            self.next()
            out = TCompose(out, self.parse_term_tensor(), pos=p)
        return out

    def parse_term_tensor(self) -> TermAst:
        out = self.parse_term_atom()
        while self.peek().kind == "*":
            p = self.pos()
            self.next()
            out = TTensor(out, self.parse_term_atom(), pos=p)
        return out

    def parse_term_atom(self) -> TermAst:
        t = self.peek()
        if t.kind == "(":
            self.next()
            inner = self.parse_term()
            self.expect(")")
            return inner
        if t.kind != "ident":
            raise ParseError(f"expected a term, got {t.text!r}", t.line, t.col)
        self.next()
        p = Pos(t.line, t.col)
        if t.text in CONSTRUCTORS:
            kinds = CONSTRUCTORS[t.text]
            self.expect("(")
            args = []
            for k, kind in enumerate(kinds):
                if k:
                    self.expect(",")
                args.append(self.parse_obj() if kind == "o" else self.parse_term())
            self.expect(")")
            return TCtor(t.text, tuple(args), pos=p)
        if t.text in KEYWORDS:
            raise ParseError(f"reserved word {t.text!r} cannot be a term", t.line, t.col)
        return TName(t.text, pos=p)

    # -- sections -----------------------------------------------------

    def parse_file(self) -> SourceFileAst:
        items = []
        while self.peek().kind != "eof":
            items.append(self.parse_item())
        return SourceFileAst(tuple(items))

    def parse_item(self):
        t = self.peek()
        if t.kind != "ident":
            raise ParseError(f"expected a section keyword, got {t.text!r}", t.line, t.col)
        if t.text == "signature":
            return self.parse_signature_block()
        if t.text == "object":
            return self.parse_object_def()
        if t.text == "let":
            return self.parse_term_def()
        if t.text == "skeleton":
            return self.parse_skeleton_block()
        if t.text == "check_eq":
            return self.parse_check_eq()
        if t.text == "check_theorem":
            return self.parse_check_theorem()
        raise ParseError(
            f"expected one of signature/object/let/skeleton/check_eq/check_theorem,"
            f" got {t.text!r}", t.line, t.col)

    def parse_signature_block(self) -> SignatureBlock:
        p = self.pos()
        self.expect_ident("signature")
        self.expect("{")
        entries = []
        while not self.peek().kind == "}":
            t = self.peek()
            if self.at_word("base"):
                bp = self.pos()
                self.next()
                name = self.expect("ident", "a base name")
                self._check_fresh_name(name)
                self.expect(":")
                self.expect_ident("dim")
                dim = int(self.expect("int", "a dimension").text)
                causal = False
                if self.at_word("causal"):
                    self.next()
                    causal = True
                self.expect(";")
                entries.append(SigBase(name.text, dim, causal, pos=bp))
            elif self.at_word("gen"):
                gp = self.pos()
                self.next()
                name = self.expect("ident", "a generator name")
                self._check_fresh_name(name)
                self.expect(":")
                dom = self.parse_obj()
                self.expect("->")
                cod = self.parse_obj()
                self.expect(";")
                entries.append(SigGen(name.text, dom, cod, pos=gp))
            else:
                raise ParseError(f"expected 'base' or 'gen', got {t.text!r}", t.line, t.col)
        self.expect("}")
        return SignatureBlock(tuple(entries), pos=p)

    def _check_fresh_name(self, tok: Token) -> None:
        if tok.text in RESERVED:
            raise ParseError(f"{tok.text!r} is reserved and cannot be declared",
                             tok.line, tok.col)

    def parse_object_def(self) -> ObjectDef:
        p = self.pos()
        self.expect_ident("object")
        name = self.expect("ident", "an object alias")
        self._check_fresh_name(name)
        self.expect("=")
        obj = self.parse_obj()
        self.expect(";")
        return ObjectDef(name.text, obj, pos=p)

    def parse_term_def(self) -> TermDef:
        p = self.pos()
        self.expect_ident("let")
        name = self.expect("ident", "a term name")
        self._check_fresh_name(name)
        self.expect("=")
        term = self.parse_term()
        self.expect(";")
        return TermDef(name.text, term, pos=p)

    def parse_skeleton_block(self) -> SkeletonBlock:
        p = self.pos()
        self.expect_ident("skeleton")
        name = self.expect("ident", "a skeleton name")
        self._check_fresh_name(name)
        self.expect("{")
        entries = []
        while self.peek().kind != "}":
            t = self.peek()
            if self.at_word("node"):
                ep = self.pos()
                self.next()
                nname = self.expect("ident", "a node id")
                self.expect(":")
                obj = self.parse_obj()
                self.expect(";")
                entries.append(SkelNodeDecl(nname.text, obj, pos=ep))
            elif self.at_word("input") or self.at_word("output"):
                ep = self.pos()
                kind = self.next().text
                pname = self.expect("ident", "a port name")
                self.expect(":")
                obj = self.parse_obj()
                self.expect(";")
                entries.append(SkelPortDecl(kind, pname.text, obj, pos=ep))
            elif self.at_word("wire"):
                ep = self.pos()
                self.next()
                src = self.parse_endpoint()
                self.expect("->")
                dst = self.parse_endpoint()
                self.expect(":")
                obj = self.parse_obj()
                self.expect(";")
                entries.append(SkelWireDecl(src, dst, obj, pos=ep))
            else:
                raise ParseError(f"expected node/input/output/wire, got {t.text!r}",
                                 t.line, t.col)
        self.expect("}")
        return SkeletonBlock(name.text, tuple(entries), pos=p)

    def parse_endpoint(self) -> tuple:
        name = self.expect("ident", "an endpoint")
        if self.peek().kind == ".":
            self.next()
            port = self.expect("ident", "'in' or 'out'")
            if port.text not in ("in", "out"):
                raise ParseError(f"expected 'in' or 'out', got {port.text!r}",
                                 port.line, port.col)
            return ("port", name.text, port.text)
        return ("name", name.text)

    def parse_check_eq(self) -> CheckEqDirective:
        p = self.pos()
        self.expect_ident("check_eq")
        self.expect("(")
        left = self.parse_term()
        self.expect(",")
        right = self.parse_term()
        self.expect(")")
        self.expect(";")
        return CheckEqDirective(left, right, pos=p)

    def parse_check_theorem(self) -> CheckTheoremDirective:
        p = self.pos()
        self.expect_ident("check_theorem")
        name = self.expect("ident", "a theorem suite name")
        dims = seeds = None
        samples = None
        while self.peek().kind != ";":
            key = self.expect("ident", "dims, seeds or samples")
            self.expect("=")
            if key.text == "dims":
                dims = self.parse_int_tuple()
            elif key.text == "seeds":
                seeds = self.parse_int_tuple()
            elif key.text == "samples":
                samples = int(self.expect("int", "a sample count").text)
            else:
                raise ParseError(f"unknown parameter {key.text!r}", key.line, key.col)
        self.expect(";")
        return CheckTheoremDirective(name.text, dims, seeds, samples, pos=p)

    def parse_int_tuple(self) -> tuple:
        self.expect("(")
        out = [int(self.expect("int", "an integer").text)]
        while self.peek().kind == ",":
            self.next()
            out.append(int(self.expect("int", "an integer").text))
        self.expect(")")
        return tuple(out)


def parse(src: str) -> SourceFileAst:
    return Parser(src).parse_file()


# ---------------------------------------------------------------------------
# Pretty printer (canonical source; re-parsing yields an equal AST).
# ---------------------------------------------------------------------------

def _pp_obj(o: ObjAst, ctx: int = 0) -> str:
    if isinstance(o, OUnit):
        return "I"
    if isinstance(o, OName):
        return o.name
    if isinstance(o, OTensor):
        s = f"{_pp_obj(o.left, 1)} * {_pp_obj(o.right, 2)}"
        return f"({s})" if ctx >= 2 else s
    if isinstance(o, OArrow):
        s = f"{_pp_obj(o.source, 1)} => {_pp_obj(o.target, 0)}"
        return f"({s})" if ctx >= 1 else s
    raise TypeError(o)


def _pp_term(t: TermAst, ctx: int = 0) -> str:
    if isinstance(t, TCompose):
        s = f"{_pp_term(t.after, 0)} . {_pp_term(t.before, 1)}"
        return f"({s})" if ctx >= 1 else s
    if isinstance(t, TTensor):
        s = f"{_pp_term(t.left, 1)} * {_pp_term(t.right, 2)}"
        return f"({s})" if ctx >= 2 else s
    if isinstance(t, TName):
        return t.name
    if isinstance(t, TCtor):
        kinds = CONSTRUCTORS[t.ctor]
        rendered = [
            _pp_obj(a) if kind == "o" else _pp_term(a)
            for a, kind in zip(t.args, kinds)
        ]
        return f"{t.ctor}({', '.join(rendered)})"
    raise TypeError(t)


def _pp_endpoint(e: tuple) -> str:
    if e[0] == "name":
        return e[1]
    return f"{e[1]}.{e[2]}"


def pretty(ast: SourceFileAst) -> str:
    lines: list[str] = []
    for item in ast.items:
        if isinstance(item, SignatureBlock):
            lines.append("signature {")
            for e in item.entries:
                if isinstance(e, SigBase):
                    causal = " causal" if e.causal else ""
                    lines.append(f"  base {e.name} : dim {e.dim}{causal};")
                else:
                    lines.append(f"  gen {e.name} : {_pp_obj(e.dom)} -> {_pp_obj(e.cod)};")
            lines.append("}")
        elif isinstance(item, ObjectDef):
            lines.append(f"object {item.name} = {_pp_obj(item.obj)};")
        elif isinstance(item, TermDef):
            lines.append(f"let {item.name} = {_pp_term(item.term)};")
        elif isinstance(item, SkeletonBlock):
            lines.append(f"skeleton {item.name} {{")
            for e in item.entries:
                if isinstance(e, SkelNodeDecl):
                    lines.append(f"  node {e.name} : {_pp_obj(e.obj)};")
                elif isinstance(e, SkelPortDecl):
                    lines.append(f"  {e.kind} {e.name} : {_pp_obj(e.obj)};")
                else:
                    lines.append(
                        f"  wire {_pp_endpoint(e.source)} -> {_pp_endpoint(e.target)}"
                        f" : {_pp_obj(e.obj)};"
                    )
            lines.append("}")
        elif isinstance(item, CheckEqDirective):
            lines.append(f"check_eq({_pp_term(item.left)}, {_pp_term(item.right)});")
        elif isinstance(item, CheckTheoremDirective):
            parts = [f"check_theorem {item.theorem}"]
            if item.dims is not None:
                parts.append(f"dims=({', '.join(map(str, item.dims))})")
            if item.seeds is not None:
                parts.append(f"seeds=({', '.join(map(str, item.seeds))})")
            if item.samples is not None:
                parts.append(f"samples={item.samples}")
            lines.append(" ".join(parts) + ";")
        else:
            raise TypeError(item)
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Resolution: AST -> signature, objects, terms, skeletons, directives.
# ---------------------------------------------------------------------------

@dataclass
class Program:
    sig: Signature
    objects: dict[str, ObjExpr]
    term_defs: dict[str, TypedTerm]
    skeletons: dict[str, CircuitSkeleton]
    directives: list


def resolve(ast: SourceFileAst) -> Program:
    """Build concrete structures, enforcing declare-before-use throughout."""
    bases: list[tuple[str, int]] = []
    gens: list[tuple[str, ObjExpr, ObjExpr]] = []
    causal: set[str] = set()
    sig = Signature()
    objects: dict[str, ObjExpr] = {}
    term_defs: dict[str, TypedTerm] = {}
    skeletons: dict[str, CircuitSkeleton] = {}
    directives: list = []

    def resolve_obj(o: ObjAst) -> ObjExpr:
        if isinstance(o, OUnit):
            return UNIT
        if isinstance(o, OName):
            if any(n == o.name for n, _ in bases):
                return Base(o.name)
            if o.name in objects:
                return objects[o.name]
            raise SignatureError(f"{o.pos.line}:{o.pos.col}: unknown object {o.name!r}")
        if isinstance(o, OTensor):
            return Tensor(resolve_obj(o.left), resolve_obj(o.right))
        if isinstance(o, OArrow):
            return Arrow(resolve_obj(o.source), resolve_obj(o.target))
        raise TypeError(o)

    def resolve_term(t: TermAst) -> MorTerm:
        if isinstance(t, TName):
            if t.name in term_defs:
                return term_defs[t.name].term
            if any(n == t.name for n, _, _ in gens):
                return T.Gen(t.name)
            raise SignatureError(f"{t.pos.line}:{t.pos.col}: unknown term {t.name!r}")
        if isinstance(t, TCompose):
            return T.Compose(resolve_term(t.after), resolve_term(t.before))
        if isinstance(t, TTensor):
            return T.TensorM(resolve_term(t.left), resolve_term(t.right))
        if isinstance(t, TCtor):
            return resolve_ctor(t)
        raise TypeError(t)

    def resolve_ctor(t: TCtor) -> MorTerm:
        kinds = CONSTRUCTORS[t.ctor]
        args = [
            resolve_obj(a) if kind == "o" else resolve_term(a)
            for a, kind in zip(t.args, kinds)
        ]
        c = t.ctor
        if c == "id":
            return T.Id(args[0])
        if c == "eps":
            return T.Eps(args[0], args[1])
        if c == "eta":
            return T.Eta(args[0])
        if c == "seq":
            return T.SeqComp(args[0], args[1], args[2])
        if c == "par":
            return T.ParComp(args[0], args[1], args[2], args[3])
        if c == "delta":
            return T.DeltaPartial(args[0], args[1], args[2])
        if c == "hatid":
            return T.HatId(args[0])
        if c == "discard":
            return T.Discard(args[0])
        if c == "swap":
            return T.Swap(args[0], args[1])
        if c == "lunit":
            return T.LUnit(args[0])
        if c == "lunit_inv":
            return T.LUnitInv(args[0])
        if c == "runit":
            return T.RUnit(args[0])
        if c == "runit_inv":
            return T.RUnitInv(args[0])
        if c == "assoc":
            return T.Assoc(args[0], args[1], args[2])
        if c == "assoc_inv":
            return T.AssocInv(args[0], args[1], args[2])
        if c == "curry":
            return T.curry(args[0], sig).term
        if c == "hat":
            return T.hat(args[0], sig).term
        if c == "name":
            return T.name_state(args[0], sig).term
        if c == "dualiser":
            return T.dualiser(args[0], sig).term
        if c == "lift":
            return T.lift(args[0], args[1], sig).term
        if c == "phi":
            return T.phi(args[0], args[1], args[2], sig).term
        if c == "phi_inv":
            return T.phi_inv(args[0], args[1], args[2], sig).term
        raise TypeError(c)

    for item in ast.items:
        if isinstance(item, SignatureBlock):
            for e in item.entries:
                if isinstance(e, SigBase):
                    bases.append((e.name, e.dim))
                    if e.causal:
                        causal.add(e.name)
                else:
                    gens.append((e.name, resolve_obj(e.dom), resolve_obj(e.cod)))
            sig = Signature(tuple(bases), tuple(gens), frozenset(causal))
        elif isinstance(item, ObjectDef):
            if item.name in objects or any(n == item.name for n, _ in bases):
                raise SignatureError(f"duplicate object name {item.name!r}")
            objects[item.name] = resolve_obj(item.obj)
        elif isinstance(item, TermDef):
            if item.name in term_defs:
                raise SignatureError(f"duplicate term name {item.name!r}")
            term_defs[item.name] = typecheck(resolve_term(item.term), sig)
        elif isinstance(item, SkeletonBlock):
            if item.name in skeletons:
                raise SignatureError(f"duplicate skeleton name {item.name!r}")
            skeletons[item.name] = resolve_skeleton(item, resolve_obj, sig)
        elif isinstance(item, (CheckEqDirective, CheckTheoremDirective)):
            if isinstance(item, CheckEqDirective):
                left = typecheck(resolve_term(item.left), sig)
                right = typecheck(resolve_term(item.right), sig)
                directives.append(("check_eq", left, right))
            else:
                directives.append(("check_theorem", item.theorem, item.dims,
                                   item.seeds, item.samples))
        else:
            raise TypeError(item)
    return Program(sig, objects, term_defs, skeletons, directives)


def resolve_skeleton(block: SkeletonBlock, resolve_obj, sig: Signature) -> CircuitSkeleton:
    nodes: list[SkeletonNode] = []
    inputs: list[tuple[str, ObjExpr]] = []
    outputs: list[tuple[str, ObjExpr]] = []
    wires: list[Wire] = []
    node_ids: set[str] = set()
    in_names: set[str] = set()
    out_names: set[str] = set()
    for e in block.entries:
        if isinstance(e, SkelNodeDecl):
            obj = resolve_obj(e.obj)
            if not isinstance(obj, Arrow):
                raise StructuralError(
                    f"{e.pos.line}:{e.pos.col}: node {e.name!r} needs an arrow type")
            nodes.append(SkeletonNode(e.name, obj))
            node_ids.add(e.name)
        elif isinstance(e, SkelPortDecl):
            pair = (e.name, resolve_obj(e.obj))
            if e.kind == "input":
                inputs.append(pair)
                in_names.add(e.name)
            else:
                outputs.append(pair)
                out_names.add(e.name)
        else:
            wires.append(Wire(
                _resolve_endpoint(e.source, node_ids, in_names, out_names, True, e),
                _resolve_endpoint(e.target, node_ids, in_names, out_names, False, e),
                resolve_obj(e.obj),
            ))
    sk = CircuitSkeleton(tuple(nodes), tuple(inputs), tuple(outputs), tuple(wires))
    validate_skeleton(sk, sig)
    return sk


def _resolve_endpoint(end: tuple, node_ids: set[str], in_names: set[str],
                      out_names: set[str], as_source: bool, decl) -> tuple[str, str]:
    if end[0] == "port":
        _, name, port = end
        if name not in node_ids:
            raise StructuralError(f"{decl.pos.line}:{decl.pos.col}: unknown node {name!r}")
        want = "out" if as_source else "in"
        if port != want:
            raise StructuralError(
                f"{decl.pos.line}:{decl.pos.col}: node port {name}.{port} cannot be a"
                f" {'source' if as_source else 'target'}")
        return ("node", name)
    _, name = end
    if as_source:
        if name not in in_names:
            raise StructuralError(f"{decl.pos.line}:{decl.pos.col}: unknown input {name!r}")
        return ("input", name)
    if name not in out_names:
        raise StructuralError(f"{decl.pos.line}:{decl.pos.col}: unknown output {name!r}")
    return ("output", name)
