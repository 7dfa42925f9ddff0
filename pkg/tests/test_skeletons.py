import random

import pytest

from hopt.checks import scratch_interpretation
from hopt.objects import Arrow, Base, Tensor
from hopt.semantics import (
    ExactMatrix,
    check_eq,
    eval_term,
    random_stochastic,
    swap_matrix,
)
from hopt.skeletons import (
    AssignmentError,
    Comb,
    CircuitSkeleton,
    SkeletonNode,
    StructuralError,
    Wire,
    chain_comb,
    fill_holes,
    signalling_analysis,
    skeleton_to_term,
    to_dot,
    topo_order,
    validate_comb,
    validate_skeleton,
)
from hopt.terms import Compose, Eps, SeqComp, Swap, curry, typecheck

INTERP = scratch_interpretation((2, 2, 3), "causal")
SIG = INTERP.sig
A, B, C = Base("X0"), Base("X1"), Base("X2")


def test_single_hole_is_insertion():
    comb = chain_comb([A, B])
    t = skeleton_to_term(comb.skeleton, SIG)
    assert eval_term(t, INTERP) == eval_term(Eps(A, B), INTERP)


def test_two_hole_comb_fill_matches_direct_composition():
    comb = chain_comb([A, B, C])
    rng = random.Random(0)
    f = random_stochastic(2, 2, rng)
    g = random_stochastic(3, 2, rng)
    assert fill_holes(comb.skeleton, {"h0": f, "h1": g}, INTERP) == g.mul(f)


def test_two_hole_comb_curries_to_sequential_composition():
    comb = chain_comb([A, B, C])
    t = skeleton_to_term(comb.skeleton, SIG)
    cur = curry(t, SIG)
    rhs = Compose(SeqComp(A, B, C), Swap(Arrow(A, B), Arrow(B, C)))
    assert check_eq(cur, typecheck(rhs, SIG), INTERP)


def test_identity_fills_give_identity():
    comb = chain_comb([A, A, A])
    eye = ExactMatrix.identity(2)
    assert fill_holes(comb.skeleton, {"h0": eye, "h1": eye}, INTERP) == eye


def test_three_hole_grouping_associativity():
    comb3 = chain_comb([A, B, C, A])
    rng = random.Random(1)
    f = random_stochastic(2, 2, rng)
    g = random_stochastic(3, 2, rng)
    h = random_stochastic(2, 3, rng)
    full = fill_holes(comb3.skeleton, {"h0": f, "h1": g, "h2": h}, INTERP)
    left = fill_holes(chain_comb([A, C, A]).skeleton, {"h0": g.mul(f), "h1": h}, INTERP)
    right = fill_holes(chain_comb([A, B, A]).skeleton, {"h0": f, "h1": h.mul(g)}, INTERP)
    assert full == left == right == h.mul(g).mul(f)


def test_stochastic_fills_yield_stochastic_channels():
    rng = random.Random(2)
    comb = chain_comb([A, B, C, B])
    for _ in range(10):
        fills = {
            "h0": random_stochastic(2, 2, rng),
            "h1": random_stochastic(3, 2, rng),
            "h2": random_stochastic(2, 3, rng),
        }
        assert fill_holes(comb.skeleton, fills, INTERP).is_stochastic()


def test_causal_mode_rejects_non_stochastic_fill():
    comb = chain_comb([A, B])
    with pytest.raises(AssignmentError):
        fill_holes(comb.skeleton, {"h0": ExactMatrix.from_rows([[2, 0], [0, 1]])}, INTERP)


def test_missing_and_mismatched_fills():
    comb = chain_comb([A, B])
    with pytest.raises(AssignmentError):
        fill_holes(comb.skeleton, {}, INTERP)
    with pytest.raises(AssignmentError):
        fill_holes(comb.skeleton, {"h0": ExactMatrix.identity(3)}, INTERP)


def test_type_mismatched_wire_names_wire():
    sk = CircuitSkeleton(
        nodes=(SkeletonNode("n", Arrow(A, B)),),
        inputs=(("p", C),),
        outputs=(("q", B),),
        wires=(
            Wire(("input", "p"), ("node", "n"), C),
            Wire(("node", "n"), ("output", "q"), B),
        ),
    )
    with pytest.raises(StructuralError) as exc:
        validate_skeleton(sk, SIG)
    assert "wire" in str(exc.value)


def test_cycle_names_node():
    sk = CircuitSkeleton(
        nodes=(SkeletonNode("a", Arrow(A, A)), SkeletonNode("b", Arrow(A, A))),
        inputs=(),
        outputs=(),
        wires=(
            Wire(("node", "a"), ("node", "b"), A),
            Wire(("node", "b"), ("node", "a"), A),
        ),
    )
    with pytest.raises(StructuralError) as exc:
        skeleton_to_term(sk, SIG)
    assert "cycle" in str(exc.value)


def test_parallel_skeleton_with_crossed_outputs():
    sk = CircuitSkeleton(
        nodes=(SkeletonNode("n1", Arrow(A, B)), SkeletonNode("n2", Arrow(B, A))),
        inputs=(("p", A), ("q", B)),
        outputs=(("r", A), ("s", B)),
        wires=(
            Wire(("input", "p"), ("node", "n1"), A),
            Wire(("input", "q"), ("node", "n2"), B),
            Wire(("node", "n2"), ("output", "r"), A),
            Wire(("node", "n1"), ("output", "s"), B),
        ),
    )
    rng = random.Random(3)
    f = random_stochastic(2, 2, rng)
    g = random_stochastic(2, 2, rng)
    got = fill_holes(sk, {"n1": f, "n2": g}, INTERP)
    assert got == swap_matrix(2, 2).mul(f.kron(g))


def test_compiled_terms_are_byte_stable():
    comb = chain_comb([A, B, C])
    t1 = skeleton_to_term(comb.skeleton, SIG)
    t2 = skeleton_to_term(comb.skeleton, SIG)
    assert t1.term == t2.term
    from hopt.terms import term_to_str
    assert term_to_str(t1.term) == term_to_str(t2.term)


def test_topological_ties_break_on_node_id():
    sk = CircuitSkeleton(
        nodes=(SkeletonNode("z", Arrow(A, A)), SkeletonNode("a", Arrow(B, B))),
        inputs=(("p", A), ("q", B)),
        outputs=(("r", A), ("s", B)),
        wires=(
            Wire(("input", "p"), ("node", "z"), A),
            Wire(("input", "q"), ("node", "a"), B),
            Wire(("node", "z"), ("output", "r"), A),
            Wire(("node", "a"), ("output", "s"), B),
        ),
    )
    assert topo_order(sk) == ["a", "z"]


def test_hole_count_equals_insertion_count():
    comb = chain_comb([A, B, C, A, B])
    t = skeleton_to_term(comb.skeleton, SIG)

    def count_eps(term):
        from hopt.terms import Compose as Co, Eps as Ep, TensorM as Te
        if isinstance(term, Ep):
            return 1
        if isinstance(term, Co):
            return count_eps(term.after) + count_eps(term.before)
        if isinstance(term, Te):
            return count_eps(term.left) + count_eps(term.right)
        return 0

    assert count_eps(t.term) == 4


def test_comb_validation():
    comb = chain_comb([A, B, C])
    validate_comb(comb, SIG)
    assert comb.arity == 2
    bad = Comb(skeleton=comb.skeleton, hole_ids=("h1", "h0"))
    with pytest.raises(StructuralError):
        validate_comb(bad, SIG)


def test_signalling_analysis_product_channel():
    rng = random.Random(4)
    f = random_stochastic(2, 2, rng)
    g = random_stochastic(3, 3, rng)
    m = signalling_analysis(f.kron(g), [A, C], [A, C], SIG)
    assert m[0][1] is False and m[1][0] is False


def test_signalling_analysis_swap_off_diagonal():
    m = signalling_analysis(swap_matrix(2, 3), [A, C], [C, A], SIG)
    assert m == [[False, True], [True, False]]


def test_signalling_analysis_induced_process_blocks_first_input():
    from hopt.checks import bend_to_process
    from hopt.spaces import random_causal_state
    rng = random.Random(5)
    typing = Tensor(Arrow(A, B), C)
    state = random_causal_state(typing, SIG, rng)
    proc = bend_to_process(state, 2, 2, 3)  # A -> A' * X
    m = signalling_analysis(proc, [A], [B, C], SIG)
    assert m[0][1] is False  # no signalling from A to X


def test_signalling_analysis_shape_check():
    with pytest.raises(StructuralError):
        signalling_analysis(swap_matrix(2, 2), [A, C], [C, A], SIG)


def test_pass_through_wire_reorders_to_output_order():
    sk = CircuitSkeleton(
        nodes=(SkeletonNode("n", Arrow(A, B)),),
        inputs=(("x", A), ("thru", C)),
        outputs=(("thru_out", C), ("y", B)),
        wires=(
            Wire(("input", "x"), ("node", "n"), A),
            Wire(("input", "thru"), ("output", "thru_out"), C),
            Wire(("node", "n"), ("output", "y"), B),
        ),
    )
    rng = random.Random(6)
    f = random_stochastic(2, 2, rng)
    got = fill_holes(sk, {"n": f}, INTERP)
    # oracle: inputs (x, thru) -> outputs (thru, f(x))
    expected = swap_matrix(2, 3).mul(f.kron(ExactMatrix.identity(3)))
    assert got == expected


def test_empty_skeleton_is_unit_identity():
    sk = CircuitSkeleton(nodes=(), inputs=(), outputs=(), wires=())
    t = skeleton_to_term(sk, SIG)
    assert eval_term(t, INTERP) == ExactMatrix.identity(1)
    assert fill_holes(sk, {}, INTERP) == ExactMatrix.identity(1)


def test_term_valued_fills():
    from hopt.terms import Id
    comb = chain_comb([A, A])
    assert fill_holes(comb.skeleton, {"h0": Id(A)}, INTERP) == ExactMatrix.identity(2)
    with pytest.raises(AssignmentError):
        fill_holes(comb.skeleton, {"h0": Id(B)}, INTERP)


def test_mixed_arrangement_against_contraction_oracle():
    # two chained holes plus a parallel pass-through, outputs crossed
    sk = CircuitSkeleton(
        nodes=(SkeletonNode("u", Arrow(A, B)), SkeletonNode("v", Arrow(B, C))),
        inputs=(("x", A), ("w", B)),
        outputs=(("o1", B), ("o2", C)),
        wires=(
            Wire(("input", "x"), ("node", "u"), A),
            Wire(("node", "u"), ("node", "v"), B),
            Wire(("node", "v"), ("output", "o2"), C),
            Wire(("input", "w"), ("output", "o1"), B),
        ),
    )
    rng = random.Random(8)
    f = random_stochastic(2, 2, rng)   # u : A -> B
    g = random_stochastic(3, 2, rng)   # v : B -> C
    got = fill_holes(sk, {"u": f, "v": g}, INTERP)
    # oracle by direct index contraction: out (o1, o2) from in (x, w)
    expected = ExactMatrix.zeros(2 * 3, 2 * 2)
    comp = g.mul(f)
    for x in range(2):
        for w in range(2):
            for o1 in range(2):
                for o2 in range(3):
                    val = comp[o2, x] if o1 == w else 0
                    expected.data[(o1 * 3 + o2) * 4 + (x * 2 + w)] = val
    from fractions import Fraction
    expected = ExactMatrix(6, 4, [Fraction(v) for v in expected.data])
    assert got == expected


def test_dot_export_mentions_every_node_and_wire():
    comb = chain_comb([A, B, C])
    dot = to_dot(comb.skeleton)
    assert dot.startswith("digraph skeleton {")
    assert '"h0"' in dot and '"h1"' in dot
    assert 'label="h0 : X0 => X1"' in dot
    assert '"in:in0" -> "h0"' in dot
