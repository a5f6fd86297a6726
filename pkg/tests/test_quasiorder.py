"""Quasi-order combinatorics, cross-checked against the raw-set oracles."""

import random

import pytest

from smalg.errors import DimensionMismatch, FormatError, NotClassUnion, NotClosed
from smalg.exactnum import DenseMatrix, multiply, relabel_matrix
from smalg.quasiorder import (
    approx_classes,
    automorphisms_fix_two_sided_classes,
    block_triangular_form,
    central_idempotents,
    format_relation,
    from_edges,
    increasing_permutations,
    parse_relation,
    quasi_order_automorphisms,
    rectangles,
    reverse,
    rho_U,
    strict_part,
    two_sided_classes,
)

import fixtures as fx
from oracles import (
    oracle_closure,
    oracle_connected_classes,
    oracle_increasing_perms,
    oracle_mutual_classes,
    oracle_rho_u,
)


def random_edges(rng, n, density=0.3):
    return [
        (i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j and rng.random() < density
    ]


def random_quasi_order(rng, n, density=0.3):
    return from_edges(n, random_edges(rng, n, density))


class TestClosure:
    def test_example_count(self):
        q = from_edges(3, [(1, 2), (1, 3), (2, 3), (3, 2)])
        assert q.card() == 7

    def test_against_oracle(self):
        rng = random.Random(101)
        for _ in range(200):
            n = rng.randrange(1, 7)
            edges = random_edges(rng, n, rng.random())
            q = from_edges(n, edges)
            assert set(q.pairs()) == oracle_closure(n, edges)

    def test_closure_idempotent(self):
        rng = random.Random(5)
        for _ in range(50):
            q = random_quasi_order(rng, rng.randrange(1, 7))
            again = from_edges(q.n, q.pairs(), close=True)
            assert again == q
            validated = from_edges(q.n, q.pairs(), close=False)
            assert validated == q

    def test_validation_witness(self):
        with pytest.raises(NotClosed) as exc:
            from_edges(3, [(1, 2), (2, 3)], close=False)
        assert exc.value.witness == ((1, 2), (2, 3))

    def test_bounds(self):
        with pytest.raises(DimensionMismatch):
            from_edges(2, [(1, 3)])
        with pytest.raises(DimensionMismatch):
            from_edges(0, [])


class TestBasicOps:
    def test_reverse(self):
        rng = random.Random(17)
        for _ in range(50):
            q = random_quasi_order(rng, rng.randrange(1, 7))
            r = reverse(q)
            assert set(r.pairs()) == {(j, i) for (i, j) in q.pairs()}
            assert reverse(r) == q

    def test_strict_part(self):
        q = fx.cycle_over_point()
        assert strict_part(q) == {(1, 2), (1, 3), (2, 3), (3, 2)}
        assert all(i != j for (i, j) in strict_part(q))


class TestClasses:
    def test_cycle_over_point(self):
        q = fx.cycle_over_point()
        assert [set(b) for b in two_sided_classes(q).blocks] == [{1}, {2, 3}]
        assert [set(b) for b in approx_classes(q).blocks] == [{1, 2, 3}]

    def test_bowtie_connected(self):
        assert [set(b) for b in approx_classes(fx.bowtie()).blocks] == [{1, 2, 3, 4}]

    def test_against_oracles(self):
        rng = random.Random(23)
        for _ in range(100):
            q = random_quasi_order(rng, rng.randrange(1, 7))
            pairs = set(q.pairs())
            assert set(two_sided_classes(q).blocks) == set(
                oracle_mutual_classes(q.n, pairs)
            )
            assert set(approx_classes(q).blocks) == set(
                oracle_connected_classes(q.n, q.strict_pairs())
            )

    def test_mutual_refines_connected(self):
        rng = random.Random(29)
        for _ in range(100):
            q = random_quasi_order(rng, rng.randrange(1, 7))
            conn = approx_classes(q)
            for blk in two_sided_classes(q).blocks:
                target = conn.block_of(min(blk))
                assert blk <= target


class TestCentralIdempotents:
    def test_example(self):
        q = from_edges(5, [(1, 2), (4, 5)], close=False)
        ps = central_idempotents(q)
        e = DenseMatrix.unit
        assert ps == [
            e(5, 1, 1) + e(5, 2, 2),
            e(5, 3, 3),
            e(5, 4, 4) + e(5, 5, 5),
        ]

    def test_invariants(self):
        rng = random.Random(31)
        for _ in range(50):
            q = random_quasi_order(rng, rng.randrange(1, 7))
            ps = central_idempotents(q)
            assert len(ps) == len(approx_classes(q).blocks)
            total = DenseMatrix.zeros(q.n, q.n)
            for a in range(len(ps)):
                assert multiply(ps[a], ps[a]) == ps[a]
                for b in range(a + 1, len(ps)):
                    assert multiply(ps[a], ps[b]).is_zero()
                total = total + ps[a]
            assert total == DenseMatrix.identity(q.n)


class TestBlockTriangularForm:
    def test_wedge_order(self):
        q = fx.wedge3()
        btf = block_triangular_form(q)
        assert btf.sizes == (1, 1, 1)
        assert btf.pi == (3, 1, 2)  # vertex 1 goes last

    def test_cycle_over_point(self):
        btf = block_triangular_form(fx.cycle_over_point())
        assert btf.sizes == (1, 2)
        assert btf.pi == (1, 2, 3)
        assert btf.presence[0][1] is True

    def test_sandwich_property(self):
        rng = random.Random(37)
        for _ in range(100):
            q = random_quasi_order(rng, rng.randrange(1, 7))
            btf = block_triangular_form(q)
            relabeled = {(btf.pi[i - 1], btf.pi[j - 1]) for (i, j) in q.pairs()}
            offsets = []
            t = 1
            for s in btf.sizes:
                offsets.append(range(t, t + s))
                t += s
            # full diagonal blocks present
            for blk in offsets:
                for i in blk:
                    for j in blk:
                        assert (i, j) in relabeled
            # everything inside the block upper pattern, presence exact
            for a, ra in enumerate(offsets):
                for b, rb in enumerate(offsets):
                    cells = {(i, j) for i in ra for j in rb}
                    got = cells & relabeled
                    if a == b:
                        assert got == cells
                    elif btf.presence[a][b]:
                        assert got == cells and a < b
                    else:
                        assert not got

    def test_relabel_consistency(self):
        # relabeled units live where the block form says they do
        q = fx.cycle_over_point()
        btf = block_triangular_form(q)
        for (i, j) in q.pairs():
            m = relabel_matrix(DenseMatrix.unit(q.n, i, j), btf.pi)
            assert m.support() == {(btf.pi[i - 1], btf.pi[j - 1])}


class TestRectangles:
    def test_chain_pattern(self):
        assert rectangles(fx.upper_chain(3)) == [((1, 2), (2, 3))]

    def test_bowtie(self):
        assert rectangles(fx.bowtie()) == [((1, 2), (3, 4))]

    def test_chain10_has_none(self):
        assert rectangles(fx.chain10()) == []

    def test_full_count(self):
        n = 4
        assert len(rectangles(fx.full(n))) == (n * (n - 1) // 2) ** 2

    def test_membership(self):
        rng = random.Random(41)
        for _ in range(50):
            q = random_quasi_order(rng, rng.randrange(1, 7))
            for ((i, k), (j, l)) in rectangles(q):
                assert i < k and j < l
                assert (i, j) in q and (i, l) in q and (k, j) in q and (k, l) in q


class TestIncreasingPermutations:
    def test_examples(self):
        assert increasing_permutations(fx.delta(3), fx.upper_chain(3), limit=1) == [
            (1, 2, 3)
        ]
        assert increasing_permutations(fx.vee3(), fx.wedge3(), limit=None) == []

    def test_against_oracle(self):
        rng = random.Random(43)
        for _ in range(40):
            n = rng.randrange(1, 5)
            a = random_quasi_order(rng, n, 0.4)
            b = random_quasi_order(rng, n, 0.5)
            mine = increasing_permutations(a, b, limit=None)
            theirs = oracle_increasing_perms(n, set(a.pairs()), set(b.pairs()))
            assert sorted(mine) == sorted(theirs)

    def test_limit(self):
        all_of_them = increasing_permutations(fx.delta(3), fx.delta(3), limit=None)
        assert len(all_of_them) == 6
        assert len(increasing_permutations(fx.delta(3), fx.delta(3), limit=2)) == 2

    def test_automorphisms(self):
        assert quasi_order_automorphisms(fx.upper_chain(4)) == [(1, 2, 3, 4)]
        assert len(quasi_order_automorphisms(fx.delta(4))) == 24
        assert quasi_order_automorphisms(fx.cycle_over_point()) == [
            (1, 2, 3),
            (1, 3, 2),
        ]

    def test_fix_classes_predicate(self):
        assert automorphisms_fix_two_sided_classes(fx.upper_chain(3))
        assert not automorphisms_fix_two_sided_classes(fx.delta(2))
        assert automorphisms_fix_two_sided_classes(fx.cycle_over_point())


class TestRhoU:
    def test_example(self):
        q = from_edges(5, [(1, 2), (4, 5)], close=False)
        out = rho_U(q, {1, 2})
        assert set(out.strict_pairs()) == {(1, 2), (5, 4)}

    def test_oracle_and_involution(self):
        rng = random.Random(47)
        for _ in range(60):
            q = random_quasi_order(rng, rng.randrange(1, 6))
            blocks = approx_classes(q).blocks
            picked = [b for b in blocks if rng.random() < 0.5]
            u = set().union(*picked) if picked else set()
            out = rho_U(q, u)
            assert set(out.pairs()) == oracle_rho_u(q.n, set(q.pairs()), u) | {
                (i, i) for i in range(1, q.n + 1)
            }
            assert rho_U(out, u) == q

    def test_not_class_union(self):
        q = from_edges(3, [(1, 2)], close=False)
        with pytest.raises(NotClassUnion):
            rho_U(q, {1})

    def test_extremes(self):
        q = fx.cycle_over_point()
        assert rho_U(q, set(range(1, q.n + 1))) == q
        assert rho_U(q, set()) == reverse(q)


class TestRelationFormat:
    def test_round_trip(self):
        rng = random.Random(53)
        for _ in range(30):
            q = random_quasi_order(rng, rng.randrange(1, 7))
            n, edges = parse_relation(format_relation(q))
            assert from_edges(n, edges, close=False) == q

    def test_comments(self):
        n, edges = parse_relation("# header\n3\n1 2 # note\n\n2 3\n")
        assert n == 3 and edges == [(1, 2), (2, 3)]

    def test_errors(self):
        with pytest.raises(FormatError):
            parse_relation("")
        with pytest.raises(FormatError) as exc:
            parse_relation("3\n1\n")
        assert exc.value.line == 2
        with pytest.raises(FormatError):
            parse_relation("2\n1 3\n")
        with pytest.raises(FormatError):
            parse_relation("x\n")
