"""Exact matrix semantics for morphism terms.

Everything here is bit-exact: rationals (via fractions.Fraction) or the
boolean semiring, never floating point.

Index convention (normative, used everywhere):
  * the basis of A * B is pairs (a, b) ordered a*dim(B) + b;
  * the basis of A => B is pairs (a, b) ordered a*dim(B) + b;
  * a process f : A -> B is a matrix with entry f[b, a] at (row b, col a),
    so its static form hat(f) is the vector with entry f[b, a] at index
    a*dim(B) + b;
  * the insertion (A => B) * A -> B has entry 1 at
    (row b, col (a*dim(B) + b)*dim(A) + a) and 0 elsewhere.

All closed-form canonical matrices are derived from this convention once,
in this module.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction

from . import terms as T
from .objects import (
    ObjExpr,
    Signature,
    SignatureError,
    dimension,
    is_first_order,
    obj_to_str,
)
from .terms import HoptTypeError, MorTerm, TypedTerm, typecheck


class ConsistencyError(Exception):
    """An internal shape invariant was violated; always a bug, never user error."""


class Semiring:
    """Carrier of matrix arithmetic: exact rationals or booleans."""

    name: str

    def __init__(self, name, zero, one, add, mul):
        self.name = name
        self.zero = zero
        self.one = one
        self.add = add
        self.mul = mul

    def __repr__(self):
        return f"Semiring({self.name})"


RATIONAL = Semiring("rational", Fraction(0), Fraction(1), lambda x, y: x + y, lambda x, y: x * y)
BOOLEAN = Semiring("boolean", False, True, lambda x, y: x or y, lambda x, y: x and y)


class ExactMatrix:
    """Dense row-major matrix over a semiring; treated as immutable."""

    __slots__ = ("rows", "cols", "data", "semiring")

    def __init__(self, rows: int, cols: int, data: list, semiring: Semiring = RATIONAL):
        if rows < 0 or cols < 0 or len(data) != rows * cols:
            raise ConsistencyError(f"bad matrix shape {rows}x{cols} with {len(data)} entries")
        self.rows = rows
        self.cols = cols
        self.data = data
        self.semiring = semiring

    # -- constructors -------------------------------------------------

    @staticmethod
    def zeros(rows: int, cols: int, sr: Semiring = RATIONAL) -> "ExactMatrix":
        return ExactMatrix(rows, cols, [sr.zero] * (rows * cols), sr)

    @staticmethod
    def identity(n: int, sr: Semiring = RATIONAL) -> "ExactMatrix":
        data = [sr.zero] * (n * n)
        for i in range(n):
            data[i * n + i] = sr.one
        return ExactMatrix(n, n, data, sr)

    @staticmethod
    def from_rows(rows_of_entries, sr: Semiring = RATIONAL) -> "ExactMatrix":
        rows = len(rows_of_entries)
        cols = len(rows_of_entries[0]) if rows else 0
        data = []
        for r in rows_of_entries:
            if len(r) != cols:
                raise ConsistencyError("ragged rows")
            data.extend(_coerce(x, sr) for x in r)
        return ExactMatrix(rows, cols, data, sr)

    @staticmethod
    def column(entries, sr: Semiring = RATIONAL) -> "ExactMatrix":
        return ExactMatrix(len(entries), 1, [_coerce(x, sr) for x in entries], sr)

    @staticmethod
    def row(entries, sr: Semiring = RATIONAL) -> "ExactMatrix":
        return ExactMatrix(1, len(entries), [_coerce(x, sr) for x in entries], sr)

    # -- access -------------------------------------------------------

    def __getitem__(self, rc):
        r, c = rc
        return self.data[r * self.cols + c]

    def row_list(self, r: int) -> list:
        return self.data[r * self.cols:(r + 1) * self.cols]

    def col_list(self, c: int) -> list:
        return [self.data[r * self.cols + c] for r in range(self.rows)]

    def to_rows(self) -> list[list]:
        return [self.row_list(r) for r in range(self.rows)]

    # -- algebra ------------------------------------------------------

    def mul(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.cols != other.rows:
            raise ConsistencyError(f"matmul shape mismatch: {self.rows}x{self.cols} . {other.rows}x{other.cols}")
        sr = self._common(other)
        # zero entries are falsy in both semirings, so truthiness skips them
        zero, add, mul = sr.zero, sr.add, sr.mul
        a, b = self.data, other.data
        n, m, p = self.rows, self.cols, other.cols
        out = [zero] * (n * p)
        for i in range(n):
            abase = i * m
            obase = i * p
            for k in range(m):
                aik = a[abase + k]
                if not aik:
                    continue
                bbase = k * p
                for j in range(p):
                    bkj = b[bbase + j]
                    if not bkj:
                        continue
                    out[obase + j] = add(out[obase + j], mul(aik, bkj))
        return ExactMatrix(n, p, out, sr)

    def kron(self, other: "ExactMatrix") -> "ExactMatrix":
        sr = self._common(other)
        mul = sr.mul
        rows = self.rows * other.rows
        cols = self.cols * other.cols
        out = [sr.zero] * (rows * cols)
        for i in range(self.rows):
            for k in range(self.cols):
                a = self.data[i * self.cols + k]
                if not a:
                    continue
                for j in range(other.rows):
                    rbase = (i * other.rows + j) * cols + k * other.cols
                    obase = j * other.cols
                    for l in range(other.cols):
                        b = other.data[obase + l]
                        if not b:
                            continue
                        out[rbase + l] = mul(a, b)
        return ExactMatrix(rows, cols, out, sr)

    def add(self, other: "ExactMatrix") -> "ExactMatrix":
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ConsistencyError("addition shape mismatch")
        sr = self._common(other)
        return ExactMatrix(
            self.rows, self.cols,
            [sr.add(x, y) for x, y in zip(self.data, other.data)], sr,
        )

    def scale(self, s) -> "ExactMatrix":
        sr = self.semiring
        s = _coerce(s, sr)
        return ExactMatrix(self.rows, self.cols, [sr.mul(s, x) for x in self.data], sr)

    def sub(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.semiring is not RATIONAL:
            raise ConsistencyError("subtraction needs the rational semiring")
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ConsistencyError("subtraction shape mismatch")
        return ExactMatrix(
            self.rows, self.cols,
            [x - y for x, y in zip(self.data, other.data)], RATIONAL,
        )

    def transpose(self) -> "ExactMatrix":
        out = [self.semiring.zero] * (self.rows * self.cols)
        for i in range(self.rows):
            for j in range(self.cols):
                out[j * self.rows + i] = self.data[i * self.cols + j]
        return ExactMatrix(self.cols, self.rows, out, self.semiring)

    def is_zero(self) -> bool:
        return all(x == self.semiring.zero for x in self.data)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ExactMatrix)
            and self.rows == other.rows
            and self.cols == other.cols
            and self.semiring is other.semiring
            and self.data == other.data
        )

    def __hash__(self):
        return hash((self.rows, self.cols, tuple(self.data)))

    def __repr__(self):
        return f"ExactMatrix({self.rows}x{self.cols}, {self.semiring.name})"

    def _common(self, other: "ExactMatrix") -> Semiring:
        if self.semiring is not other.semiring:
            raise ConsistencyError("mixed-semiring arithmetic")
        return self.semiring

    # -- rational-only helpers -----------------------------------------

    def column_sums(self) -> list[Fraction]:
        if self.semiring is not RATIONAL:
            raise ConsistencyError("column sums need the rational semiring")
        sums = [Fraction(0)] * self.cols
        for i in range(self.rows):
            base = i * self.cols
            for j in range(self.cols):
                sums[j] += self.data[base + j]
        return sums

    def is_stochastic(self) -> bool:
        """All entries >= 0 and every column sums to 1."""
        if any(x < 0 for x in self.data):
            return False
        return all(s == 1 for s in self.column_sums())


def _coerce(x, sr: Semiring):
    if sr is RATIONAL:
        return x if isinstance(x, Fraction) else Fraction(x)
    if sr is BOOLEAN:
        return bool(x)
    return x


def vectorize(m: ExactMatrix) -> ExactMatrix:
    """Static form of a process matrix: entry m[b, a] lands at index a*rows + b."""
    sr = m.semiring
    out = [sr.zero] * (m.rows * m.cols)
    for b in range(m.rows):
        for a in range(m.cols):
            out[a * m.rows + b] = m.data[b * m.cols + a]
    return ExactMatrix(m.rows * m.cols, 1, out, sr)


def unvectorize(v: ExactMatrix, rows: int, cols: int) -> ExactMatrix:
    """Inverse of vectorize for a process with the given shape."""
    if v.cols != 1 or v.rows != rows * cols:
        raise ConsistencyError("unvectorize shape mismatch")
    sr = v.semiring
    out = [sr.zero] * (rows * cols)
    for a in range(cols):
        for b in range(rows):
            out[b * cols + a] = v.data[a * rows + b]
    return ExactMatrix(rows, cols, out, sr)


# ---------------------------------------------------------------------------
# Closed-form canonical matrices.  a, b, ... are dimensions.
# ---------------------------------------------------------------------------

def swap_matrix(a: int, b: int, sr: Semiring = RATIONAL) -> ExactMatrix:
    out = [sr.zero] * (a * b * a * b)
    cols = a * b
    for i in range(a):
        for j in range(b):
            out[(j * a + i) * cols + (i * b + j)] = sr.one
    return ExactMatrix(b * a, a * b, out, sr)


def eps_matrix(a: int, b: int, sr: Semiring = RATIONAL) -> ExactMatrix:
    # (A => B) * A -> B
    cols = a * b * a
    out = [sr.zero] * (b * cols)
    for i in range(a):
        for j in range(b):
            out[j * cols + ((i * b + j) * a + i)] = sr.one
    return ExactMatrix(b, cols, out, sr)


def hat_id_matrix(a: int, sr: Semiring = RATIONAL) -> ExactMatrix:
    out = [sr.zero] * (a * a)
    for i in range(a):
        out[i * a + i] = sr.one
    return ExactMatrix(a * a, 1, out, sr)


def seq_comp_matrix(a: int, b: int, c: int, sr: Semiring = RATIONAL) -> ExactMatrix:
    # (B => C) * (A => B) -> (A => C); sends g-hat x f-hat to (g . f)-hat
    cols = (b * c) * (a * b)
    out = [sr.zero] * (a * c * cols)
    for i in range(a):
        for j in range(b):
            for k in range(c):
                col = (j * c + k) * (a * b) + (i * b + j)
                out[(i * c + k) * cols + col] = sr.one
    return ExactMatrix(a * c, cols, out, sr)


def par_comp_matrix(a: int, a2: int, b: int, b2: int, sr: Semiring = RATIONAL) -> ExactMatrix:
    # (A => A') * (B => B') -> (A * B) => (A' * B'); sends f-hat x g-hat to (f x g)-hat
    cols = (a * a2) * (b * b2)
    rows = (a * b) * (a2 * b2)
    out = [sr.zero] * (rows * cols)
    for i in range(a):
        for i2 in range(a2):
            for j in range(b):
                for j2 in range(b2):
                    row = (i * b + j) * (a2 * b2) + (i2 * b2 + j2)
                    col = (i * a2 + i2) * (b * b2) + (j * b2 + j2)
                    out[row * cols + col] = sr.one
    return ExactMatrix(rows, cols, out, sr)


def delta_matrix(c: int, a: int, b: int, sr: Semiring = RATIONAL) -> ExactMatrix:
    # ((C * A) => B) * C -> (A => B); inserts the held state into the static process
    cols = (c * a * b) * c
    out = [sr.zero] * (a * b * cols)
    for k in range(c):
        for i in range(a):
            for j in range(b):
                col = ((k * a + i) * b + j) * c + k
                out[(i * b + j) * cols + col] = sr.one
    return ExactMatrix(a * b, cols, out, sr)


def ones_row(n: int, sr: Semiring = RATIONAL) -> ExactMatrix:
    return ExactMatrix(1, n, [sr.one] * n, sr)


def arrow_matrix(f: ExactMatrix, g: ExactMatrix) -> ExactMatrix:
    """Matrix of the (f => g) supermap acting on static forms: kron(f^T, g)."""
    return f.transpose().kron(g)


# ---------------------------------------------------------------------------
# Interpretations and evaluation.
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interpretation:
    """Assignment of matrices to generators over a signature.

    mode "causal" validates that every generator with first-order dom and cod
    is stochastic (the designated discard absorbs it) and enables the discard
    constructor; mode "full" is the unrestricted matrix model.
    """

    sig: Signature
    gen_matrices: dict[str, ExactMatrix] = field(default_factory=dict)
    mode: str = "full"
    semiring: Semiring = RATIONAL

    def __post_init__(self):
        if self.mode not in ("causal", "full"):
            raise ValueError(f"unknown mode {self.mode!r}")
        declared = {name for name, _, _ in self.sig.base_generators}
        for name, mat in self.gen_matrices.items():
            if name not in declared:
                raise SignatureError(f"matrix for undeclared generator {name!r}")
        for name, dom, cod in self.sig.base_generators:
            if name not in self.gen_matrices:
                raise SignatureError(f"no matrix for generator {name!r}")
            mat = self.gen_matrices[name]
            want = (dimension(cod, self.sig), dimension(dom, self.sig))
            if (mat.rows, mat.cols) != want:
                raise SignatureError(
                    f"generator {name!r} matrix is {mat.rows}x{mat.cols}, expected {want[0]}x{want[1]}"
                )
            if mat.semiring is not self.semiring:
                raise SignatureError(f"generator {name!r} matrix uses the wrong semiring")
            if (
                self.mode == "causal"
                and self.semiring is RATIONAL
                and is_first_order(dom)
                and is_first_order(cod)
                and not mat.is_stochastic()
            ):
                raise SignatureError(f"causal mode needs stochastic generators; {name!r} is not")

    def discard_covector(self, obj: ObjExpr) -> ExactMatrix:
        """The designated discard on a causal first-order object: all ones."""
        t = typecheck(T.Discard(obj), self.sig)
        return ones_row(dimension(t.dom, self.sig), self.semiring)


def eval_term(term: MorTerm | TypedTerm, interp: Interpretation) -> ExactMatrix:
    """Evaluate a term to its matrix; compositional in the term tree."""
    typed = term if isinstance(term, TypedTerm) else typecheck(term, interp.sig)
    mat = _eval(typed.term, interp)
    want = (dimension(typed.cod, interp.sig), dimension(typed.dom, interp.sig))
    if (mat.rows, mat.cols) != want:
        raise ConsistencyError(
            f"evaluated shape {mat.rows}x{mat.cols} != typed shape {want[0]}x{want[1]}"
            f" for {T.term_to_str(typed.term)}"
        )
    return mat


def _eval(t: MorTerm, interp: Interpretation) -> ExactMatrix:
    sig, sr = interp.sig, interp.semiring
    d = lambda obj: dimension(obj, sig)
    if isinstance(t, T.Gen):
        return interp.gen_matrices[t.name]
    if isinstance(t, T.Id):
        return ExactMatrix.identity(d(t.obj), sr)
    if isinstance(t, T.Compose):
        return _eval(t.after, interp).mul(_eval(t.before, interp))
    if isinstance(t, T.TensorM):
        return _eval(t.left, interp).kron(_eval(t.right, interp))
    if isinstance(t, T.Swap):
        return swap_matrix(d(t.left), d(t.right), sr)
    if isinstance(t, (T.LUnit, T.LUnitInv, T.RUnit, T.RUnitInv)):
        return ExactMatrix.identity(d(t.obj), sr)
    if isinstance(t, (T.Assoc, T.AssocInv)):
        return ExactMatrix.identity(d(t.a) * d(t.b) * d(t.c), sr)
    if isinstance(t, T.Eps):
        return eps_matrix(d(t.source), d(t.target), sr)
    if isinstance(t, T.Eta):
        return ExactMatrix.identity(d(t.obj), sr)
    if isinstance(t, T.SeqComp):
        return seq_comp_matrix(d(t.source), d(t.mid), d(t.target), sr)
    if isinstance(t, T.ParComp):
        return par_comp_matrix(d(t.a), d(t.a_out), d(t.b), d(t.b_out), sr)
    if isinstance(t, T.DeltaPartial):
        return delta_matrix(d(t.held), d(t.slot), d(t.target), sr)
    if isinstance(t, T.HatId):
        return hat_id_matrix(d(t.obj), sr)
    if isinstance(t, T.Discard):
        if interp.mode != "causal":
            raise HoptTypeError("discard is only available in causal mode")
        return ones_row(d(t.obj), sr)
    if isinstance(t, T.Hat):
        return vectorize(_eval(t.body, interp))
    raise TypeError(f"not a morphism term: {t!r}")


def check_eq(t1: MorTerm | TypedTerm, t2: MorTerm | TypedTerm, interp: Interpretation) -> bool:
    """Exact entrywise equality of evaluations; requires equal dom and cod."""
    ty1 = t1 if isinstance(t1, TypedTerm) else typecheck(t1, interp.sig)
    ty2 = t2 if isinstance(t2, TypedTerm) else typecheck(t2, interp.sig)
    if ty1.dom != ty2.dom or ty1.cod != ty2.cod:
        raise HoptTypeError(
            f"check_eq type mismatch: {obj_to_str(ty1.dom)} -> {obj_to_str(ty1.cod)}"
            f" vs {obj_to_str(ty2.dom)} -> {obj_to_str(ty2.cod)}"
        )
    return eval_term(ty1, interp) == eval_term(ty2, interp)


def random_rational(rng: random.Random, max_entry: int, signed: bool = True) -> Fraction:
    lo = -max_entry if signed else 0
    return Fraction(rng.randint(lo, max_entry), rng.randint(1, max_entry))


def random_matrix(rows: int, cols: int, rng: random.Random, max_entry: int = 9,
                  signed: bool = True) -> ExactMatrix:
    return ExactMatrix(
        rows, cols,
        [random_rational(rng, max_entry, signed) for _ in range(rows * cols)],
        RATIONAL,
    )


def random_stochastic(rows: int, cols: int, rng: random.Random, max_entry: int = 9) -> ExactMatrix:
    """Column-stochastic matrix with nonnegative rational entries."""
    data = [Fraction(0)] * (rows * cols)
    for j in range(cols):
        weights = [rng.randint(0, max_entry) for _ in range(rows)]
        if sum(weights) == 0:
            weights[rng.randrange(rows)] = 1
        total = sum(weights)
        for i in range(rows):
            data[i * cols + j] = Fraction(weights[i], total)
    return ExactMatrix(rows, cols, data, RATIONAL)


def random_interpretation(sig: Signature, seed: int, max_entry: int = 9,
                          mode: str = "full") -> Interpretation:
    """Deterministic-in-seed interpretation with rational generator matrices.

    In causal mode, generators with first-order dom and cod are drawn
    column-stochastic; everything else gets generic rationals with numerator
    and denominator bounded by max_entry.
    """
    rng = random.Random(seed)
    mats: dict[str, ExactMatrix] = {}
    for name, dom, cod in sig.base_generators:
        rows, cols = dimension(cod, sig), dimension(dom, sig)
        if mode == "causal" and is_first_order(dom) and is_first_order(cod):
            mats[name] = random_stochastic(rows, cols, rng, max_entry)
        else:
            mats[name] = random_matrix(rows, cols, rng, max_entry)
    return Interpretation(sig=sig, gen_matrices=mats, mode=mode)


# ---------------------------------------------------------------------------
# JSON wire format for matrices: exact integers as decimal strings.
# ---------------------------------------------------------------------------

def matrix_to_json(m: ExactMatrix) -> dict:
    if m.semiring is RATIONAL:
        entries = [[str(x.numerator), str(x.denominator)] for x in m.data]
    else:
        entries = [["1" if x else "0", "1"] for x in m.data]
    return {"rows": m.rows, "cols": m.cols, "entries": entries}


def matrix_from_json(obj: dict, sr: Semiring = RATIONAL) -> ExactMatrix:
    rows, cols = int(obj["rows"]), int(obj["cols"])
    if sr is RATIONAL:
        data = [Fraction(int(n), int(d)) for n, d in obj["entries"]]
    else:
        data = [n != "0" for n, _ in obj["entries"]]
    return ExactMatrix(rows, cols, data, sr)
