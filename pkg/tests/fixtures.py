"""Shared fixtures, named by their structure.

Lazy imports keep this module usable while the package grows; expected values
frozen here were computed with tests/oracles.py.
"""

from __future__ import annotations

from fractions import Fraction

from smalg.exactnum import DenseMatrix, GaussianRational
from smalg.quasiorder import QuasiOrder, from_edges


def delta(n: int) -> QuasiOrder:
    """The diagonal relation (diagonal matrix algebra)."""
    return from_edges(n, [])


def full(n: int) -> QuasiOrder:
    return from_edges(n, [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)])


def upper_chain(n: int) -> QuasiOrder:
    """i related to j iff i <= j (upper triangular pattern)."""
    return from_edges(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)], close=False)


def vee() -> QuasiOrder:
    """One bottom vertex under two incomparable tops, plus a spare point."""
    return from_edges(4, [(1, 2), (1, 3)], close=False)


def wedge() -> QuasiOrder:
    """Mirror image of vee()."""
    return from_edges(4, [(2, 1), (3, 1)], close=False)


def vee3() -> QuasiOrder:
    return from_edges(3, [(1, 2), (1, 3)], close=False)


def wedge3() -> QuasiOrder:
    return from_edges(3, [(2, 1), (3, 1)], close=False)


def cycle_over_point() -> QuasiOrder:
    """A two-sided pair {2,3} sitting above vertex 1."""
    return from_edges(3, [(1, 2), (1, 3), (2, 3), (3, 2)], close=False)


def bowtie() -> QuasiOrder:
    """Two sources {1,2} each related to two sinks {3,4}; the smallest
    pattern with a rectangle but no composable strict pairs."""
    return from_edges(4, [(1, 3), (1, 4), (2, 3), (2, 4)], close=False)


def bowtie_weights():
    """Weight map on bowtie() whose single rectangle has minor -1."""
    one = GaussianRational(1)
    return {(1, 3): one, (1, 4): GaussianRational(2), (2, 3): one, (2, 4): one}


def chain10() -> QuasiOrder:
    """Odd rows 1,3,5,7,9 pointing at even columns, closed into a loop
    through column 10; alternating-pair chain of length 8 from 1 to 9."""
    edges = [(1, 2), (1, 10), (3, 2), (3, 4), (5, 4), (5, 6),
             (7, 6), (7, 8), (9, 8), (9, 10)]
    return from_edges(10, edges, close=False)


def chain10_matrix() -> DenseMatrix:
    """Rank-4 matrix supported on chain10() whose last column ties the two
    ends of the chain together."""
    entries = {
        (1, 2): 1, (1, 10): 1, (3, 2): 1, (3, 4): -1, (5, 4): -1,
        (5, 6): 1, (7, 6): 1, (7, 8): -1, (9, 8): -1, (9, 10): -1,
    }
    grid = [[entries.get((i, j), 0) for j in range(1, 11)] for i in range(1, 11)]
    return DenseMatrix.from_rows(grid)


def chain10_weights():
    """Weights on chain10(): 2 on (9,10), 1 elsewhere. No composable strict
    pairs exist, so any assignment is transitive; this one is nontrivial."""
    w = {p: GaussianRational(1) for p in chain10().strict_pairs()}
    w[(9, 10)] = GaussianRational(2)
    return w


def corner() -> QuasiOrder:
    """Two incomparable vertices under a common top."""
    return from_edges(3, [(1, 3), (2, 3)], close=False)


def corner_map_images():
    """A non-multiplicative rank-one preserving map on corner(): the (1,1)
    slot is rerouted into (3,3). Its unit image of the identity is singular."""
    e = DenseMatrix.unit
    return {
        (1, 1): e(3, 3, 3),
        (2, 2): e(3, 2, 2),
        (3, 3): e(3, 3, 3),
        (1, 3): e(3, 1, 3),
        (2, 3): e(3, 2, 3),
    }


def bordered_map_images(n: int):
    """On the diagonal algebra of size n: the last diagonal slot is spread
    over the whole leading (n-1) block. Preserves every singular rank but
    sends the identity to a singular matrix."""
    images = {}
    for i in range(1, n):
        images[(i, i)] = DenseMatrix.unit(n, i, i)
    ones = DenseMatrix.zeros(n, n)
    for i in range(1, n):
        for j in range(1, n):
            ones = ones + DenseMatrix.unit(n, i, j)
    images[(n, n)] = ones
    return images


def census12():
    """Twelve quasi-orders on 4 vertices spanning the shapes the embedding
    search has to cope with."""
    return [
        ("diagonal", delta(4)),
        ("full", full(4)),
        ("chain", upper_chain(4)),
        ("reverse-chain", from_edges(4, [(j, i) for i in range(1, 5) for j in range(i + 1, 5)], close=False)),
        ("vee", vee()),
        ("wedge", wedge()),
        ("cycle-over-point", from_edges(4, [(1, 2), (1, 3), (2, 3), (3, 2)], close=False)),
        ("bowtie", bowtie()),
        ("two-chains", from_edges(4, [(1, 2), (3, 4)], close=False)),
        ("diamond", from_edges(4, [(1, 2), (1, 3), (1, 4), (2, 4), (3, 4)], close=False)),
        ("two-sided-pair", from_edges(4, [(1, 2), (2, 1)], close=False)),
        ("fan", from_edges(4, [(1, 3), (2, 3), (2, 4)], close=False)),
    ]


def random_quasiorder(rng, n_min=2, n_max=6, density=0.3) -> QuasiOrder:
    """Reflexive-transitive closure of randomly sprinkled edges."""
    n = rng.randint(n_min, n_max)
    edges = [
        (i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j and rng.random() < density
    ]
    return from_edges(n, edges)


def random_invertible_in_sma(rho, rng, steps=6) -> DenseMatrix:
    """Invertible matrix supported in the relation: a random diagonal of
    units times a product of random elementary matrices on strict pairs."""
    n = rho.n
    m = DenseMatrix.diag([rng.choice([1, 1, 1, -1, 2, "1/2"]) for _ in range(n)])
    strict = rho.strict_pairs()
    if not strict:
        return m
    ident = DenseMatrix.identity(n)
    for _ in range(steps):
        i, j = strict[rng.randrange(len(strict))]
        c = rng.choice(["1", "-1", "2", "1i"])
        m = m * (ident + DenseMatrix.unit(n, i, j).scale(c))
    return m


def separator_map(rho, s):
    """The trivial map g(i, j) = s(i)/s(j) built from a vertex scaling."""
    from smalg.exactnum import scalar
    from smalg.transmap import validate

    sv = {i: scalar(v) for i, v in s.items()}
    return validate(rho, {(i, j): sv[i] / sv[j] for (i, j) in rho.strict_pairs()})


def transitive_map(rho, weights):
    from smalg.transmap import validate

    return validate(rho, weights)


def linear_map(rho, images):
    from smalg.jordan import LinearMapOnSMA

    return LinearMapOnSMA(rho, images)


def half() -> Fraction:
    return Fraction(1, 2)


def double_chain() -> QuasiOrder:
    """Two disjoint covered pairs; two connectivity classes of size two."""
    return from_edges(4, [(1, 2), (3, 4)], close=False)


def random_supported_matrix(rho, rng, lo=-3, hi=3) -> DenseMatrix:
    """Random integer matrix with entries only on related pairs."""
    n = rho.n
    m = DenseMatrix.zeros(n, n)
    for (i, j) in rho.pairs():
        c = rng.randint(lo, hi)
        if c:
            m = m + DenseMatrix.unit(n, i, j).scale(c)
    return m


def random_class_union(rho, rng):
    """Random union of connectivity classes."""
    from smalg.quasiorder import approx_classes

    picked = [b for b in approx_classes(rho).blocks if rng.random() < 0.5]
    return frozenset().union(*picked) if picked else frozenset()


def random_jordan_map(rho, rng):
    """Random synthesized Jordan homomorphism with its parameters."""
    from smalg.jordan import synthesize_jordan
    from smalg.transmap import random_transitive_map

    s = random_invertible_in_sma(rho, rng)
    u = random_class_union(rho, rng)
    g = random_transitive_map(rho, seed=rng.randrange(10**9))
    return synthesize_jordan(rho, s, u, g), s, u, g
