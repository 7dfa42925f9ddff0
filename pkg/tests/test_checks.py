import json
import random
from fractions import Fraction

from hopt import linalg
from hopt.checks import (
    CausalState,
    bend_to_process,
    build_effect_space_iso,
    check_adjoint_dynamics,
    check_causal,
    check_double_dual,
    check_double_dual_lifting,
    check_enough_effects,
    check_enough_states,
    check_no_correlation_single_state,
    check_no_signalling_states,
    check_non_signalling,
    check_tensor_vs_bipartite,
    check_lifting_dualiser_equivalence,
    check_trivial_if_causal,
    marginalize_first_output,
    run_theorem_suite,
    scratch_interpretation,
    swap_candidate_state,
    THEOREM_SUITES,
)
from hopt.objects import UNIT, Arrow, Base, Tensor, dual
from hopt.semantics import ExactMatrix, eval_term, vectorize
from hopt.spaces import causal_state_span, random_causal_state
from hopt.terms import dualiser


def causal_interp(*dims):
    return scratch_interpretation(tuple(dims), "causal")


def full_interp(*dims):
    return scratch_interpretation(tuple(dims), "full")


# -- causality --------------------------------------------------------------

def test_causal_base_passes_any_dim():
    for d in (1, 2, 3, 4):
        interp = causal_interp(d)
        assert check_causal(Base("X0"), interp).verdict == "pass"


def test_causal_unit_deterministic():
    rep = check_causal(UNIT, causal_interp(2))
    assert rep.verdict == "pass"
    assert rep.details.get("deterministic") is True


def test_causal_fails_in_full_model_with_two_effects():
    rep = check_causal(Base("X0"), full_interp(2))
    assert rep.verdict == "fail"
    e1, e2 = rep.witness["effect_1"], rep.witness["effect_2"]
    assert e1.data == [Fraction(1), Fraction(0)]
    assert e2.data == [Fraction(0), Fraction(1)]


def test_causal_inapplicable_on_higher_order():
    rep = check_causal(Arrow(Base("X0"), Base("X0")), causal_interp(2))
    assert rep.verdict == "inapplicable"


# -- enough states / effects -------------------------------------------------

def test_enough_states_basis_passes():
    assert check_enough_states(Base("X0"), full_interp(2)).verdict == "pass"
    assert check_enough_states(Base("X0"), causal_interp(2)).verdict == "pass"


def test_single_state_dual_fails_enough_states():
    interp = causal_interp(3)
    rep = check_enough_states(dual(Base("X0")), interp)
    assert rep.verdict == "fail"
    assert rep.details == {"rank": 1, "dim": 3}
    # the separating covector re-checks: orthogonal to every causal state
    sep = rep.witness["separating_covector"]
    for s in causal_state_span(dual(Base("X0")), interp.sig):
        assert sep.mul(s).is_zero()


def test_enough_effects_implies_injective_dualisation_dims_up_to_4():
    for d in (1, 2, 3, 4):
        rep = check_enough_effects(Base("X0"), full_interp(d))
        assert rep.verdict == "pass"
        assert rep.details["dualiser_injective"] is True


def test_enough_effects_fails_in_causal_mode_for_dim_above_1():
    assert check_enough_effects(Base("X0"), causal_interp(2)).verdict == "fail"
    assert check_enough_effects(Base("X0"), causal_interp(1)).verdict == "pass"


# -- no correlation with single-state objects --------------------------------

def test_no_correlation_product_states_pass():
    interp = causal_interp(2, 3)
    a, x = Base("X0"), Base("X1")
    y = dual(a)  # single-state: |Hom(I, A => I)| = 1
    rng = random.Random(0)
    typing = Tensor(x, y)
    states = [CausalState(random_causal_state(typing, interp.sig, rng), typing)
              for _ in range(10)]
    rep = check_no_correlation_single_state(y, x, states, interp)
    assert rep.verdict == "pass"


def test_no_correlation_rejects_correlated_vector():
    interp = causal_interp(2, 2)
    a, x = Base("X0"), Base("X1")
    y = dual(a)  # dim 2, single state (1,1)
    # a non-product vector: (1,0,0,1) on X * Y cannot factor against pi = (1,1)
    bad = CausalState(ExactMatrix.column([1, 0, 0, 1]), Tensor(x, y))
    rep = check_no_correlation_single_state(y, x, [bad], interp)
    assert rep.verdict == "fail"
    assert not rep.witness["residual"].is_zero()


def test_no_correlation_trivial_when_x_is_unit():
    interp = causal_interp(2)
    y = dual(Base("X0"))
    state = CausalState(ExactMatrix.column([Fraction(1, 2), Fraction(1, 2)]),
                        Tensor(UNIT, y))
    rep = check_no_correlation_single_state(y, UNIT, [state], interp)
    assert rep.verdict == "pass"


def test_no_correlation_inapplicable_when_y_not_single_state():
    interp = causal_interp(2, 2)
    rep = check_no_correlation_single_state(Base("X0"), Base("X1"), [], interp)
    assert rep.verdict == "inapplicable"


# -- non-signalling -----------------------------------------------------------

def test_non_signalling_product_case():
    interp = causal_interp(2, 2, 3)
    a, a2, x = Base("X0"), Base("X1"), Base("X2")
    typing = Tensor(Arrow(a, a2), x)
    rng = random.Random(1)
    chan = vectorize(ExactMatrix.from_rows([[1, 0], [0, 1]]))
    state_x = ExactMatrix.column([Fraction(1, 3)] * 3)
    st = CausalState(chan.kron(state_x), typing)
    rep = check_non_signalling(st, interp)
    assert rep.verdict == "pass"
    assert rep.witness["x_marginal"] == state_x


def test_non_signalling_seeded_states_pass():
    for dims in [(2, 2, 2), (2, 2, 3), (3, 2, 2)]:
        reports = run_theorem_suite("non_signalling", dims, seed=42, samples=10)
        assert all(r.verdict == "pass" for r in reports)


def test_non_signalling_swap_candidate_fails_with_recheckable_witness():
    interp = causal_interp(2, 2)
    st = swap_candidate_state(Base("X0"), Base("X1"), interp.sig)
    # present it as a state on (A => B) * X with X = (B => A)
    rep = check_non_signalling(st, interp)
    assert rep.verdict == "fail"
    # witness columns re-check against a brute-force marginal
    proc = bend_to_process(st.state, 2, 2, 4)
    marg = marginalize_first_output(proc, 2, 4)
    assert marg.col_list(rep.witness["input_a"]) == rep.witness["marginal_a"].data
    assert marg.col_list(rep.witness["input_b"]) == rep.witness["marginal_b"].data
    assert rep.witness["marginal_a"] != rep.witness["marginal_b"]


def test_non_signalling_full_mode_inapplicable():
    interp = full_interp(2, 2, 2)
    typing = Tensor(Arrow(Base("X0"), Base("X1")), Base("X2"))
    st = CausalState(ExactMatrix.zeros(8, 1), typing)
    assert check_non_signalling(st, interp).verdict == "inapplicable"


# -- tensor vs bipartite -------------------------------------------------------

def test_swap_has_no_preimage_certificate_rechecks():
    interp = causal_interp(2, 2)
    rep = check_tensor_vs_bipartite(Base("X0"), Base("X1"), interp)
    assert rep.verdict == "pass"
    cert = rep.witness["farkas_certificate"]
    v = rep.witness["candidate"]
    span = causal_state_span(
        Tensor(Arrow(Base("X0"), Base("X1")), Arrow(Base("X1"), Base("X0"))),
        interp.sig)
    diffs = linalg.hstack_columns([s.sub(span[0]) for s in span[1:]])
    assert cert.mul(diffs).is_zero()
    assert not cert.mul(v.sub(span[0])).is_zero()


def test_single_state_case_inapplicable():
    interp = causal_interp(1, 1)
    assert check_tensor_vs_bipartite(Base("X0"), Base("X1"), interp).verdict == "inapplicable"


def test_cyclic_shift_channel_also_infeasible():
    interp = causal_interp(2, 3)
    da, db = 2, 3
    shift = ExactMatrix.zeros(db * da, da * db)
    for k in range(da * db):
        shift.data[((k + 1) % (da * db)) * (da * db) + k] = Fraction(1)
    rep = check_tensor_vs_bipartite(Base("X0"), Base("X1"), interp, channel=shift)
    assert rep.verdict == "pass"


# -- adjoint dynamics, double duals --------------------------------------------

def test_adjoint_dynamics_all_small_dims():
    for da in (1, 2, 3):
        for db in (1, 2, 3):
            interp = causal_interp(da, db)
            rep = check_adjoint_dynamics(Base("X0"), Base("X1"), interp)
            assert rep.verdict == "pass", (da, db, rep.details)


def test_double_dual_small_dims_and_unit():
    for d in (1, 2, 3, 4):
        interp = causal_interp(d)
        assert check_double_dual(Base("X0"), interp).verdict == "pass"
    rep = check_double_dual(UNIT, causal_interp(1))
    assert rep.verdict == "pass"
    d_unit = eval_term(dualiser(UNIT, causal_interp(1).sig), causal_interp(1))
    assert d_unit == ExactMatrix.identity(1)


def test_compact_closure_rank_up_to_dim_4():
    # every dualiser and lifting is invertible in the matrix model
    interp = causal_interp(4, 4)
    sig = interp.sig
    assert linalg.is_invertible(eval_term(dualiser(Base("X0"), sig), interp))
    from hopt.terms import lift
    assert linalg.is_invertible(eval_term(lift(Base("X0"), Base("X1"), sig), interp))


def test_lifting_dualiser_verdicts_coincide():
    for dims in [(1,), (2,), (3,), (2, 3), (1, 2, 3)]:
        interp = causal_interp(*dims)
        rep = check_lifting_dualiser_equivalence(dims, interp)
        assert rep.verdict == "pass"
        assert rep.details["all_liftings_iso"] == rep.details["unit_liftings_iso"] \
            == rep.details["all_dualisers_iso"] is True


def test_double_dual_lifting_cases():
    for dims in [(2, 2), (1, 3), (2, 3), (3, 2)]:
        interp = causal_interp(*dims)
        rep = check_double_dual_lifting(Base("X0"), Base("X1"), interp)
        assert rep.verdict == "pass", (dims, rep.details)
        assert rep.details["right_inverse_law"] is True


# -- no-signalling states -------------------------------------------------------

def test_no_signalling_states_products_and_seeded():
    interp = causal_interp(2, 2, 2)
    a, a2, x = Base("X0"), Base("X1"), Base("X2")
    typing = Tensor(Arrow(a, a2), x)
    rng = random.Random(3)
    states = [CausalState(random_causal_state(typing, interp.sig, rng), typing)
              for _ in range(10)]
    rep = check_no_signalling_states(a, a2, x, interp, states, rng=random.Random(4))
    assert rep.verdict == "pass"
    assert rep.details["isomorphism_both_ways"] is True


def test_effect_space_iso_small_dims():
    for da in (1, 2, 3):
        for da2 in (1, 2, 3):
            interp = causal_interp(da, da2)
            rep = check_no_signalling_states(Base("X0"), Base("X1"), UNIT, interp, [])
            assert rep.verdict == "pass", (da, da2)
            assert rep.details["construction_identity"] is True


def test_effect_space_iso_is_invertible():
    interp = causal_interp(2, 2)
    f = eval_term(build_effect_space_iso(Base("X0"), Base("X1"), interp.sig), interp)
    assert linalg.is_invertible(f)


# -- triviality ------------------------------------------------------------------

def test_all_dims_one_model_causal_and_trivial():
    rep = check_trivial_if_causal(causal_interp(1, 1))
    assert rep.verdict == "pass"
    assert rep.details == {"causal": True, "trivial": True}


def test_dim_two_full_model_vacuous_with_witness():
    rep = check_trivial_if_causal(full_interp(2))
    assert rep.verdict == "pass"
    assert rep.details["causal"] is False
    assert rep.witness["effect_1"] != rep.witness["effect_2"]


def test_causal_mode_higher_order_effects_note():
    rep = check_trivial_if_causal(causal_interp(2, 2))
    assert rep.verdict == "pass"
    assert rep.details["causal"] is False
    assert "deterministic" in rep.details["note"]


# -- plumbing ---------------------------------------------------------------------

def test_reports_serialize_to_json():
    reports = []
    suite_reports = run_theorem_suite("causal", (2,), 0)
    assert all(r.details.get("seed") == 0 for r in suite_reports)
    reports.extend(suite_reports)
    reports.append(check_causal(Base("X0"), full_interp(2)))
    reports.append(check_tensor_vs_bipartite(Base("X0"), Base("X1"), causal_interp(2, 2)))
    st = swap_candidate_state(Base("X0"), Base("X1"), causal_interp(2, 2).sig)
    reports.append(check_non_signalling(st, causal_interp(2, 2)))
    for rep in reports:
        json.dumps(rep.to_json_obj(), sort_keys=True)


def test_suite_registry_is_one_to_one_with_operations():
    import hopt.checks as checks_mod
    ops = {spec.operation for spec in THEOREM_SUITES.values()}
    assert len(ops) == len(THEOREM_SUITES)
    for spec in THEOREM_SUITES.values():
        assert callable(getattr(checks_mod, spec.operation))


def test_causal_state_normalization_helper():
    interp = causal_interp(2, 2)
    typing = Tensor(Arrow(Base("X0"), Base("X1")), Base("X0"))
    rng = random.Random(7)
    st = CausalState(random_causal_state(typing, interp.sig, rng), typing)
    assert st.is_normalized(interp)
    # the swap candidate is normalized (inserting states into both slots of the
    # swap and discarding gives 1) yet still signals; scaling breaks normalization
    bad = swap_candidate_state(Base("X0"), Base("X1"), interp.sig)
    assert bad.is_normalized(interp)
    scaled = CausalState(bad.state.scale(2), bad.typing)
    assert not scaled.is_normalized(interp)
