"""Tests for rank and rank-one preserver decisions and their certificates."""

import random

import pytest

from smalg.errors import (
    GIsTrivial,
    NotEquivalent,
    NotUnital,
    PreconditionViolated,
    SupportViolation,
    VanishingUnitImage,
)
from smalg.exactnum import DenseMatrix, ONE, rank
from smalg.jordan import LinearMapOnSMA, apply, identity_map, synthesize_jordan, transpose_map
from smalg.quasiorder import NotClassUnion, approx_classes, from_edges, rectangles
from smalg.rankpres import (
    bounded_rank_preserver_check,
    certify_rank_one_preserver,
    chain_of_alternating_pairs,
    classify_rank_preserver,
    format_verdict,
    induced_linear_map,
    is_rank_one_preserver_sampled,
    nontrivial_g_rank_witness,
    rank_identity_check,
    sample_rank_one_in_sma,
)
from smalg.transmap import (
    apply_induced,
    random_transitive_map,
    rectangle_minor_condition,
    triviality_witness,
    validate,
)

from fixtures import (
    bordered_map_images,
    bowtie,
    bowtie_weights,
    chain10,
    chain10_matrix,
    chain10_weights,
    corner,
    corner_map_images,
    delta,
    double_chain,
    full,
    linear_map,
    random_class_union,
    random_invertible_in_sma,
    random_quasiorder,
    random_supported_matrix,
    separator_map,
    upper_chain,
)


def bowtie_g():
    return validate(bowtie(), bowtie_weights())


def chain10_g():
    return validate(chain10(), chain10_weights())


# ---------------------------------------------------------------------------
# rank-one sampling


def test_sampler_delta_only_diagonal_units():
    for s in sample_rank_one_in_sma(delta(4), 100, seed=2):
        support = sorted(s.support())
        assert len(support) == 1
        i, j = support[0]
        assert i == j


def test_sampler_bowtie_hits_full_rectangle():
    want = {(1, 3), (1, 4), (2, 3), (2, 4)}
    samples = sample_rank_one_in_sma(bowtie(), 400, seed=1)
    assert any(set(s.support()) == want for s in samples)


def test_sampler_t2_row_pattern():
    target = DenseMatrix.unit(2, 1, 1) + DenseMatrix.unit(2, 1, 2)
    samples = sample_rank_one_in_sma(upper_chain(2), 400, seed=1)
    assert any(s == target for s in samples)


def test_sampler_rank_and_support_property():
    rng = random.Random(41)
    for _ in range(10):
        rho = random_quasiorder(rng, 2, 6)
        for s in sample_rank_one_in_sma(rho, 30, seed=rng.randrange(10**6)):
            assert rank(s) == 1
            for pair in s.support():
                assert pair in rho


def test_sampled_preserver_identity():
    rho = full(3)
    samples = sample_rank_one_in_sma(rho, 100, seed=4)
    ok, witness = is_rank_one_preserver_sampled(identity_map(rho), samples)
    assert ok and witness is None


def test_sampled_preserver_bowtie_counterexample():
    g = bowtie_g()
    phi = induced_linear_map(g)
    samples = sample_rank_one_in_sma(g.rho, 300, seed=5)
    ok, witness = is_rank_one_preserver_sampled(phi, samples)
    assert not ok
    # [DERIVED] the scaled image of any witness stays in a 2x4 strip
    assert rank(apply(phi, witness)) == 2


def test_sampled_preserver_corner_map():
    # The corner map is not unital, yet it does preserve rank one.
    rho = corner()
    phi = linear_map(rho, corner_map_images())
    samples = sample_rank_one_in_sma(rho, 200, seed=3)
    ok, _ = is_rank_one_preserver_sampled(phi, samples)
    assert ok


# ---------------------------------------------------------------------------
# certified rank-one decision


def test_certify_identity_rank_one():
    rho = full(3)
    v = certify_rank_one_preserver(identity_map(rho))
    assert v.kind == "RankOnePreserver"
    assert v.form.s == DenseMatrix.identity(3)
    assert v.form.reconstruct() == identity_map(rho)


def test_certify_transpose_rank_one():
    v = certify_rank_one_preserver(transpose_map(bowtie()))
    assert v.kind == "RankOnePreserver"
    assert v.form.u == frozenset()


def test_certify_bowtie_neither():
    v = certify_rank_one_preserver(induced_linear_map(bowtie_g()))
    assert v.kind == "Neither"
    # [DERIVED] the violating rectangle indicator is the 2x2 all-ones block
    assert set(v.counterexample.support()) == {(1, 3), (1, 4), (2, 3), (2, 4)}
    assert v.ranks == (1, 2)


def test_certify_chain10_rank_one_but_not_rank():
    """A relation with no rectangles admits no rank-one obstruction, yet
    the same weight map still fails full rank preservation."""
    assert list(rectangles(chain10())) == []
    phi = induced_linear_map(chain10_g())
    assert certify_rank_one_preserver(phi).kind == "RankOnePreserver"
    assert classify_rank_preserver(phi).kind == "Neither"


def test_certify_not_unital():
    phi = linear_map(corner(), corner_map_images())
    with pytest.raises(NotUnital):
        certify_rank_one_preserver(phi)


def unital_non_jordan_on_full2():
    """Unital, nonvanishing images, but collapses both off-diagonal units
    onto E_12; fails the Jordan identity at ((1,2),(2,1))."""
    return LinearMapOnSMA(
        full(2),
        {
            (1, 1): DenseMatrix.unit(2, 1, 1),
            (2, 2): DenseMatrix.unit(2, 2, 2),
            (1, 2): DenseMatrix.unit(2, 1, 2),
            (2, 1): DenseMatrix.unit(2, 1, 2),
        },
    )


def test_certify_unital_non_jordan_sampled():
    v = certify_rank_one_preserver(unital_non_jordan_on_full2())
    assert v.kind == "Neither"
    assert rank(v.counterexample) == 1
    assert v.ranks[1] != 1


def test_certify_vanishing_unit_image_propagates():
    rho = upper_chain(2)
    phi = LinearMapOnSMA(
        rho,
        {
            (1, 1): DenseMatrix.unit(2, 1, 1),
            (2, 2): DenseMatrix.unit(2, 2, 2),
            (1, 2): DenseMatrix.zeros(2, 2),
        },
    )
    with pytest.raises(VanishingUnitImage):
        certify_rank_one_preserver(phi)


# ---------------------------------------------------------------------------
# alternating chains


def test_chain_direct_edge():
    assert chain_of_alternating_pairs(upper_chain(2), 1, 2) == (1, (1, 2))


def test_chain_long_even():
    rho10 = chain10()
    sub = from_edges(
        9,
        [(i, j) for (i, j) in rho10.strict_pairs() if i <= 9 and j <= 9],
        close=False,
    )
    case, seq = chain_of_alternating_pairs(sub, 1, 9)
    assert case == 2
    assert seq == (1, 2, 3, 4, 5, 6, 7, 8, 9)


def test_chain_shared_sink():
    rho = from_edges(3, [(2, 1), (3, 1)])
    assert chain_of_alternating_pairs(rho, 2, 3) == (2, (2, 1, 3))


def test_chain_backward_even():
    rho = from_edges(3, [(2, 1), (2, 3)])
    assert chain_of_alternating_pairs(rho, 1, 3) == (3, (1, 2, 3))


def test_chain_backward_direct():
    rho = from_edges(3, [(2, 1), (2, 3)])
    assert chain_of_alternating_pairs(rho, 1, 2) == (4, (1, 2))


def test_chain_bowtie_backward():
    assert chain_of_alternating_pairs(bowtie(), 3, 4) == (3, (3, 1, 4))


def test_chain_membership_pattern():
    """The returned tag fixes the direction of every consecutive pair."""
    rng = random.Random(17)
    for _ in range(20):
        rho = random_quasiorder(rng, 3, 6, density=0.4)
        blocks = approx_classes(rho).blocks
        for block in blocks:
            pts = sorted(block)
            if len(pts) < 2:
                continue
            a, b = pts[0], pts[-1]
            case, seq = chain_of_alternating_pairs(rho, a, b)
            forward = case in (1, 2)
            for j in range(1, len(seq)):
                if (j % 2 == 1) == forward:
                    assert (seq[j - 1], seq[j]) in rho
                else:
                    assert (seq[j], seq[j - 1]) in rho


def test_chain_not_equivalent():
    with pytest.raises(NotEquivalent):
        chain_of_alternating_pairs(double_chain(), 1, 3)


def test_chain_same_vertex():
    with pytest.raises(PreconditionViolated):
        chain_of_alternating_pairs(bowtie(), 2, 2)


# ---------------------------------------------------------------------------
# rank witness construction


def test_witness_chain10_exact():
    a = nontrivial_g_rank_witness(chain10_g())
    assert a == chain10_matrix()
    assert rank(a) == 4
    assert rank(apply_induced(chain10_g(), a)) == 5


def test_witness_bowtie():
    g = bowtie_g()
    a = nontrivial_g_rank_witness(g)
    assert set(a.support()) == {(1, 3), (1, 4), (2, 3), (2, 4)}
    assert rank(a) == 1
    assert rank(apply_induced(g, a)) == 2


def test_witness_total_order_trivial():
    rho = upper_chain(5)
    g = random_transitive_map(rho, seed=9)
    with pytest.raises(GIsTrivial):
        nontrivial_g_rank_witness(g)


def test_witness_nested_recursion():
    """Nontrivial weights buried below two removable vertices still
    produce a verified witness after padding back up."""
    rho = from_edges(6, [(1, 3), (2, 3), (1, 4), (2, 4), (5, 6)])
    weights = {p: 1 for p in rho.strict_pairs()}
    weights[(2, 4)] = 3
    g = validate(rho, weights)
    a = nontrivial_g_rank_witness(g)
    assert set(a.support()) == {(1, 3), (1, 4), (2, 3), (2, 4)}
    assert rank(apply_induced(g, a)) == 2


def test_witness_out_neighbor_route():
    """When the last vertex only has out-neighbors, the witness comes from
    the reversed relation and is transposed back."""
    rho = from_edges(4, [(3, 1), (3, 2), (4, 1), (4, 2)])
    weights = {p: 1 for p in rho.strict_pairs()}
    weights[(4, 2)] = 2
    g = validate(rho, weights)
    a = nontrivial_g_rank_witness(g)
    assert set(a.support()) == {(3, 1), (3, 2), (4, 1), (4, 2)}
    assert rank(a) == 1
    assert rank(apply_induced(g, a)) == 2


def test_witness_random_property():
    """Random relations seeded with an alternating four-cycle so that
    nontrivial weight maps actually occur."""
    rng = random.Random(23)
    seen_nontrivial = 0
    for _ in range(40):
        n = rng.randint(4, 7)
        a, b, c, d = rng.sample(range(1, n + 1), 4)
        extra = [
            (i, j)
            for i in range(1, n + 1)
            for j in range(1, n + 1)
            if i != j and rng.random() < 0.08
        ]
        rho = from_edges(n, [(a, c), (a, d), (b, c), (b, d)] + extra)
        g = random_transitive_map(rho, seed=rng.randrange(10**6))
        if triviality_witness(g).is_trivial:
            with pytest.raises(GIsTrivial):
                nontrivial_g_rank_witness(g)
            continue
        seen_nontrivial += 1
        w = nontrivial_g_rank_witness(g)
        for pair in w.support():
            assert pair in rho
        assert rank(apply_induced(g, w)) != rank(w)
    assert seen_nontrivial >= 10


# ---------------------------------------------------------------------------
# full rank-preserver classification


def test_classify_identity():
    v = classify_rank_preserver(identity_map(full(3)))
    assert v.kind == "RankPreserver"
    assert v.form.s == DenseMatrix.identity(3)
    assert v.form.central_idempotent() == DenseMatrix.identity(3)


def test_classify_transpose():
    v = classify_rank_preserver(transpose_map(full(3)))
    assert v.kind == "RankPreserver"
    assert v.form.s == DenseMatrix.identity(3)
    assert v.form.central_idempotent() == DenseMatrix.zeros(3, 3)


def test_classify_bowtie_neither():
    phi = induced_linear_map(bowtie_g())
    v = classify_rank_preserver(phi)
    assert v.kind == "Neither"
    assert v.ranks == (1, 2)
    assert rank(apply(phi, v.counterexample)) == 2


def test_classify_chain10_neither():
    phi = induced_linear_map(chain10_g())
    v = classify_rank_preserver(phi)
    assert v.kind == "Neither"
    assert v.counterexample == chain10_matrix()
    assert v.ranks == (4, 5)


def test_classify_corner_fails_unitality():
    phi = linear_map(corner(), corner_map_images())
    v = classify_rank_preserver(phi)
    assert v.kind == "Neither"
    assert v.counterexample == DenseMatrix.identity(3)
    assert v.ranks == (3, 2)
    assert "unitality" in v.note


def test_classify_unital_non_jordan():
    v = classify_rank_preserver(unital_non_jordan_on_full2())
    assert v.kind == "Neither"
    assert "not Jordan" in v.note
    assert rank(v.counterexample) == 1
    assert v.ranks[1] != 1


def test_classify_vanishing_unit():
    rho = upper_chain(2)
    phi = LinearMapOnSMA(
        rho,
        {
            (1, 1): DenseMatrix.unit(2, 1, 1),
            (2, 2): DenseMatrix.unit(2, 2, 2),
            (1, 2): DenseMatrix.zeros(2, 2),
        },
    )
    v = classify_rank_preserver(phi)
    assert v.kind == "Neither"
    assert v.ranks == (1, 0)


def test_classify_synthesized_trivial_maps():
    """Maps built as T(PX + (I-P)X^t)T^-1 with a separator weight always
    classify as rank preservers, and the certificate reconstructs the map
    with constant weight one."""
    rng = random.Random(31)
    for _ in range(15):
        rho = random_quasiorder(rng, 2, 5, density=0.4)
        t = random_invertible_in_sma(rho, rng)
        u = random_class_union(rho, rng)
        s_vals = {i: rng.choice([1, 2, 3, "1/2"]) for i in range(1, rho.n + 1)}
        g = separator_map(rho, s_vals)
        phi = synthesize_jordan(rho, t, u, g)
        v = classify_rank_preserver(phi)
        assert v.kind == "RankPreserver"
        assert all(w == ONE for _, w in v.form.g.items())
        assert v.form.reconstruct() == phi
        ok, _ = bounded_rank_preserver_check(phi, rho.n, count=6, seed=rng.randrange(10**6))
        assert ok


def test_trivial_iff_rank_preserver():
    """Triviality of the weight map decides rank preservation of the
    induced scaling, in both directions."""
    rng = random.Random(37)
    seen = {"RankPreserver": 0, "Neither": 0}
    for _ in range(40):
        n = rng.randint(4, 7)
        a, b, c, d = rng.sample(range(1, n + 1), 4)
        extra = [
            (i, j)
            for i in range(1, n + 1)
            for j in range(1, n + 1)
            if i != j and rng.random() < 0.08
        ]
        rho = from_edges(n, [(a, c), (a, d), (b, c), (b, d)] + extra)
        g = random_transitive_map(rho, seed=rng.randrange(10**6))
        phi = induced_linear_map(g)
        verdict = classify_rank_preserver(phi)
        seen[verdict.kind] += 1
        if triviality_witness(g).is_trivial:
            assert verdict.kind == "RankPreserver"
        else:
            assert verdict.kind == "Neither"
            r_before, r_after = verdict.ranks
            assert r_before != r_after
            assert rank(verdict.counterexample) == r_before
            assert rank(apply(phi, verdict.counterexample)) == r_after
    assert seen["RankPreserver"] >= 5 and seen["Neither"] >= 5


def test_synthesized_jordan_rank_one_matches_minors():
    """For Jordan maps the certified rank-one verdict coincides with the
    rectangle minor criterion on the recovered weights."""
    rng = random.Random(43)
    trials = []
    for _ in range(12):
        rho = random_quasiorder(rng, 3, 6, density=0.5)
        t = random_invertible_in_sma(rho, rng)
        u = random_class_union(rho, rng)
        g = random_transitive_map(rho, seed=rng.randrange(10**6))
        trials.append(synthesize_jordan(rho, t, u, g))
    trials.append(induced_linear_map(bowtie_g()))
    for phi in trials:
        v = certify_rank_one_preserver(phi)
        if v.kind == "RankOnePreserver":
            assert rectangle_minor_condition(v.form.g).ok
        else:
            assert v.ranks[0] == 1
            assert rank(apply(phi, v.counterexample)) == v.ranks[1] != 1


def test_small_blocks_never_obstruct():
    """Connectivity blocks of size at most three force both trivial
    weights and vanishing rectangle minors."""
    from smalg.transmap import all_transitive_trivial

    rng = random.Random(47)
    checked = 0
    for _ in range(40):
        rho = random_quasiorder(rng, 2, 6, density=0.25)
        if max(len(b) for b in approx_classes(rho).blocks) > 3:
            continue
        checked += 1
        assert all_transitive_trivial(rho)
        g = random_transitive_map(rho, seed=rng.randrange(10**6))
        assert rectangle_minor_condition(g).ok
    assert checked >= 10
    assert not rectangle_minor_condition(bowtie_g()).ok


# ---------------------------------------------------------------------------
# rank identity


def test_rank_identity_u_all():
    rng = random.Random(53)
    rho = bowtie()
    x = random_supported_matrix(rho, rng)
    assert rank_identity_check(rho, frozenset(range(1, 5)), x)


def test_rank_identity_u_empty():
    rng = random.Random(59)
    rho = bowtie()
    x = random_supported_matrix(rho, rng)
    assert rank_identity_check(rho, frozenset(), x)


def test_rank_identity_disjoint_rows():
    rho = from_edges(5, [(1, 2), (4, 5)])
    x = DenseMatrix.unit(5, 1, 2) + DenseMatrix.unit(5, 4, 5)
    assert rank_identity_check(rho, frozenset({1, 2}), x)


def test_rank_identity_not_class_union():
    rho = from_edges(5, [(1, 2), (4, 5)])
    with pytest.raises(NotClassUnion):
        rank_identity_check(rho, frozenset({1}), DenseMatrix.zeros(5, 5))


def test_rank_identity_support_violation():
    rho = upper_chain(3)
    with pytest.raises(SupportViolation) as err:
        rank_identity_check(rho, frozenset(), DenseMatrix.unit(3, 2, 1))
    assert err.value.pair == (2, 1)


def test_rank_identity_random_property():
    rng = random.Random(61)
    for _ in range(200):
        rho = random_quasiorder(rng, 2, 6, density=0.4)
        u = random_class_union(rho, rng)
        x = random_supported_matrix(rho, rng)
        assert rank_identity_check(rho, u, x)


# ---------------------------------------------------------------------------
# bounded rank preservation


def test_bounded_identity():
    ok, witness = bounded_rank_preserver_check(identity_map(full(4)), 4)
    assert ok and witness is None


def test_bounded_chain10_catches_at_four():
    """The half-dimension bound suffices: the scaled chain map fails at
    rank four without any rank-five test."""
    phi = induced_linear_map(chain10_g())
    ok, witness = bounded_rank_preserver_check(phi, 4)
    assert not ok
    assert witness == chain10_matrix()
    assert rank(witness) == 4


def test_bounded_chain10_passes_below_witness_rank():
    phi = induced_linear_map(chain10_g())
    ok, _ = bounded_rank_preserver_check(phi, 3, count=30, seed=11)
    assert ok


def test_bounded_bowtie_rank_one():
    ok, witness = bounded_rank_preserver_check(induced_linear_map(bowtie_g()), 1)
    assert not ok
    assert rank(witness) == 1


def test_bounded_bordered_map():
    """The bordered construction preserves every singular rank while its
    image of the identity is singular; only unitality convicts it."""
    rho = delta(5)
    phi = linear_map(rho, bordered_map_images(5))
    ok, _ = bounded_rank_preserver_check(phi, 4, count=30, seed=13)
    assert ok
    v = classify_rank_preserver(phi)
    assert v.kind == "Neither"
    assert v.ranks == (5, 4)
    assert "unitality" in v.note


# ---------------------------------------------------------------------------
# verdict reports


def test_format_verdict_form_blocks():
    report = format_verdict(classify_rank_preserver(identity_map(upper_chain(2))))
    lines = report.splitlines()
    assert lines[0] == "VERDICT RankPreserver"
    assert "FORM" in lines
    assert "S" in lines and "P" in lines and "g" in lines


def test_format_verdict_witness_blocks():
    v = certify_rank_one_preserver(induced_linear_map(bowtie_g()))
    report = format_verdict(v)
    lines = report.splitlines()
    assert lines[0] == "VERDICT Neither"
    assert "WITNESS" in lines
    assert any(line.startswith("RANKS 1 2") for line in lines)


def test_format_verdict_deterministic():
    phi = induced_linear_map(chain10_g())
    assert format_verdict(classify_rank_preserver(phi)) == format_verdict(
        classify_rank_preserver(phi)
    )
