import json
import random
from fractions import Fraction
from itertools import product

import pytest

from hopt.objects import UNIT, Arrow, Base, Signature, Tensor
from hopt.semantics import (
    BOOLEAN,
    ExactMatrix,
    Interpretation,
    check_eq,
    eps_matrix,
    eval_term,
    hat_id_matrix,
    matrix_from_json,
    matrix_to_json,
    random_interpretation,
    random_matrix,
)
from hopt.terms import (
    Assoc,
    Compose,
    Eps,
    Eta,
    Gen,
    Hat,
    HatId,
    HoptTypeError,
    Id,
    LUnit,
    LUnitInv,
    ParComp,
    RUnit,
    RUnitInv,
    SeqComp,
    Swap,
    TensorM,
)

A, B, C = Base("A"), Base("B"), Base("C")


def sig_with_dims(da, db, dc, gens=()):
    return Signature(base_objects=(("A", da), ("B", db), ("C", dc)),
                     base_generators=gens,
                     causal_bases=frozenset({"A", "B", "C"}))


def test_eps_matrix_brute_force():
    # the 2x8 example, verified against a brute-force loop over (a, b', a')
    m = eps_matrix(2, 2)
    assert (m.rows, m.cols) == (2, 8)
    expected = {(0, 0), (0, 5), (1, 2), (1, 7)}
    for b in range(2):
        for a in range(2):
            for bp in range(2):
                for ap in range(2):
                    col = (a * 2 + bp) * 2 + ap
                    want = Fraction(1) if (a == ap and b == bp) else Fraction(0)
                    assert m[b, col] == want
    assert {(r, c) for r in range(2) for c in range(8) if m[r, c] == 1} == expected


def test_hat_id_vector():
    assert hat_id_matrix(2).data == [Fraction(1), Fraction(0), Fraction(0), Fraction(1)]


def test_functoriality_exhaustive_small_dims():
    rng = random.Random(0)
    for da, db, dc in product((1, 2, 3), repeat=3):
        sig = sig_with_dims(da, db, dc, gens=(("f", A, B), ("g", B, C)))
        interp = Interpretation(sig=sig, gen_matrices={
            "f": random_matrix(db, da, rng), "g": random_matrix(dc, db, rng)})
        fm, gm = interp.gen_matrices["f"], interp.gen_matrices["g"]
        assert eval_term(Compose(Gen("g"), Gen("f")), interp) == gm.mul(fm)
        assert eval_term(TensorM(Gen("f"), Gen("g")), interp) == fm.kron(gm)
        assert eval_term(Id(Tensor(A, B)), interp) == ExactMatrix.identity(da * db)


def test_seq_comp_on_hats():
    rng = random.Random(1)
    sig = sig_with_dims(2, 2, 3, gens=(("f", A, B), ("g", B, C)))
    interp = Interpretation(sig=sig, gen_matrices={
        "f": random_matrix(2, 2, rng), "g": random_matrix(3, 2, rng)})
    pair = Compose(SeqComp(A, B, C), TensorM(Hat(Gen("g")), Hat(Gen("f"))))
    lhs = Compose(pair, LUnitInv(UNIT))
    rhs = Hat(Compose(Gen("g"), Gen("f")))
    assert check_eq(lhs, rhs, interp)


def test_par_comp_on_hats():
    rng = random.Random(2)
    sig = sig_with_dims(2, 3, 2, gens=(("f", A, B), ("g", C, A)))
    interp = Interpretation(sig=sig, gen_matrices={
        "f": random_matrix(3, 2, rng), "g": random_matrix(2, 2, rng)})
    pair = Compose(ParComp(A, B, C, A), TensorM(Hat(Gen("f")), Hat(Gen("g"))))
    lhs = Compose(pair, LUnitInv(UNIT))
    rhs = Hat(TensorM(Gen("f"), Gen("g")))
    assert check_eq(lhs, rhs, interp)


def test_structural_morphisms_are_permutations():
    sig = sig_with_dims(2, 3, 4)
    interp = Interpretation(sig=sig)
    assert eval_term(LUnit(A), interp) == ExactMatrix.identity(2)
    assert eval_term(RUnit(B), interp) == ExactMatrix.identity(3)
    assert eval_term(Assoc(A, B, C), interp) == ExactMatrix.identity(24)
    sw = eval_term(Swap(A, B), interp)
    # swap . swap = id
    assert sw.transpose().mul(sw) == ExactMatrix.identity(6)


def test_check_eq_examples():
    sig = sig_with_dims(2, 3, 2)
    interp = Interpretation(sig=sig)
    assert check_eq(LUnit(UNIT), RUnit(UNIT), interp)
    with pytest.raises(HoptTypeError):
        check_eq(Eps(A, B), Eps(B, A), interp)


def test_def2_for_ten_random_stochastic_generators():
    from hopt.semantics import random_stochastic
    for seed in range(10):
        rng = random.Random(seed)
        sig = sig_with_dims(2, 3, 2, gens=(("f", A, B),))
        interp = Interpretation(sig=sig, mode="causal",
                                gen_matrices={"f": random_stochastic(3, 2, rng)})
        lhs = Compose(Eps(A, B), TensorM(Hat(Gen("f")), Id(A)))
        rhs = Compose(Gen("f"), LUnit(A))
        assert check_eq(lhs, rhs, interp)


def test_axiom4_inverse_pair():
    sig = sig_with_dims(3, 2, 2)
    interp = Interpretation(sig=sig)
    fwd = Compose(Eps(UNIT, A), Compose(TensorM(Eta(A), Id(UNIT)), RUnitInv(A)))
    assert check_eq(fwd, Id(A), interp)
    back = Compose(Compose(RUnitInv(Arrow(UNIT, A)), Eta(A)), Eps(UNIT, A))
    assert check_eq(back, Id(Tensor(Arrow(UNIT, A), UNIT)), interp)


def test_consistency_error_message_on_shape_bug():
    from hopt.semantics import ConsistencyError
    with pytest.raises(ConsistencyError):
        ExactMatrix(2, 2, [Fraction(0)] * 3)


def test_random_interpretation_deterministic_and_varied():
    sig = sig_with_dims(2, 2, 2, gens=(("f", A, B), ("g", B, C)))
    i1 = random_interpretation(sig, seed=42)
    i2 = random_interpretation(sig, seed=42)
    assert i1.gen_matrices == i2.gen_matrices
    assert random_interpretation(sig, 0).gen_matrices != random_interpretation(sig, 1).gen_matrices
    seen = set()
    for seed in range(100):
        mats = random_interpretation(sig, seed).gen_matrices
        seen.add(tuple(tuple(m.data) for m in mats.values()))
    assert len(seen) == 100  # no collisions across 100 seeds


def test_random_interpretation_causal_is_stochastic():
    sig = sig_with_dims(2, 3, 2, gens=(("f", A, B), ("h", Arrow(A, B), C)))
    interp = random_interpretation(sig, seed=5, mode="causal")
    assert interp.gen_matrices["f"].is_stochastic()
    # higher-order generators are unconstrained
    assert interp.gen_matrices["h"].rows == 2


def test_interpretation_validation():
    from hopt.objects import SignatureError
    sig = sig_with_dims(2, 2, 2, gens=(("f", A, B),))
    with pytest.raises(SignatureError):
        Interpretation(sig=sig, gen_matrices={})
    with pytest.raises(SignatureError):
        Interpretation(sig=sig, gen_matrices={"f": ExactMatrix.identity(3)})
    with pytest.raises(SignatureError):
        Interpretation(sig=sig, mode="causal",
                       gen_matrices={"f": ExactMatrix.from_rows([[2, 0], [0, 1]])})


def test_boolean_backend_shares_the_evaluator():
    sig = sig_with_dims(2, 2, 2, gens=(("f", A, B), ("h", B, A)))
    fmat = ExactMatrix(2, 2, [True, True, False, True], BOOLEAN)
    hmat = ExactMatrix(2, 2, [False, True, True, False], BOOLEAN)
    interp = Interpretation(sig=sig, gen_matrices={"f": fmat, "h": hmat},
                            semiring=BOOLEAN)
    lhs = Compose(Eps(A, B), TensorM(Hat(Gen("f")), Id(A)))
    rhs = Compose(Gen("f"), LUnit(A))
    assert check_eq(lhs, rhs, interp)
    assert eval_term(HatId(A), interp).data == [True, False, False, True]
    got = eval_term(Compose(Gen("h"), Gen("f")), interp)
    assert got.semiring is BOOLEAN
    assert got == hmat.mul(fmat)


def test_boolean_backend_catches_convention_identities():
    # the composition-supermap and partial-insertion equations are 0/1
    # identities, so they must also hold over the boolean semiring
    from hopt.terms import DeltaPartial
    for da, db, dc in [(1, 2, 2), (2, 2, 3)]:
        sig = sig_with_dims(da, db, dc)
        interp = Interpretation(sig=sig, semiring=BOOLEAN)
        fbc, fab = Arrow(B, C), Arrow(A, B)
        lhs = Compose(Eps(A, C), TensorM(SeqComp(A, B, C), Id(A)))
        rhs = Compose(Eps(B, C), Compose(TensorM(Id(fbc), Eps(A, B)),
                                         Assoc(fbc, fab, A)))
        assert check_eq(lhs, rhs, interp)
        fca = Arrow(Tensor(C, A), B)
        lhsd = Compose(Eps(A, B), TensorM(DeltaPartial(C, A, B), Id(A)))
        rhsd = Compose(Eps(Tensor(C, A), B), Assoc(fca, C, A))
        assert check_eq(lhsd, rhsd, interp)


def test_evaluation_is_pure_under_concurrency():
    from concurrent.futures import ThreadPoolExecutor
    rng = random.Random(13)
    sig = sig_with_dims(2, 3, 2, gens=(("f", A, B),))
    interp = Interpretation(sig=sig, gen_matrices={"f": random_matrix(3, 2, rng)})
    term = Compose(Eps(A, B), TensorM(Hat(Gen("f")), Id(A)))
    expected = eval_term(term, interp)
    with ThreadPoolExecutor(max_workers=8) as pool:
        results = list(pool.map(lambda _: eval_term(term, interp), range(64)))
    assert all(r == expected for r in results)


def test_matrix_json_round_trip():
    rng = random.Random(9)
    m = random_matrix(3, 4, rng)
    obj = matrix_to_json(m)
    text = json.dumps(obj)
    back = matrix_from_json(json.loads(text))
    assert back == m
    assert all(isinstance(n, str) and isinstance(d, str) for n, d in obj["entries"])


def test_discard_requires_causal_mode():
    from hopt.terms import Discard
    sig = sig_with_dims(2, 2, 2)
    full = Interpretation(sig=sig, mode="full")
    with pytest.raises(HoptTypeError):
        eval_term(Discard(A), full)
    causal = Interpretation(sig=sig, mode="causal")
    assert eval_term(Discard(A), causal).data == [Fraction(1), Fraction(1)]
