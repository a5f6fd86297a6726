"""Jordan homomorphisms of structural matrix algebras.

A linear map out of the algebra is stored by its images on the matrix-unit
basis. Recognition checks the Jordan identity on unit pairs; classification
factors a nonvanishing Jordan homomorphism into conjugation, a central
idempotent splitting multiplicative from antimultiplicative behavior, and a
transitive weight map; synthesis goes the other way. Embedding questions
between two algebras reduce to a finite search over class unions and
increasing permutations.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .diag import simultaneous_diagonalize_in_sma
from .errors import (
    DimensionMismatch,
    FormatError,
    InternalInconsistency,
    NotJordan,
    NotTransitive,
    SupportViolation,
    VanishingUnitImage,
)
from .exactnum import (
    DenseMatrix,
    GaussianRational,
    ONE,
    inverse,
    invert_permutation,
    jordan_product,
    relabel_matrix,
)
from .quasiorder import (
    QuasiOrder,
    approx_classes,
    first_unsupported,
    from_edges,
    increasing_permutations,
    rho_U,
)
from .transmap import TransitiveMap, all_transitive_trivial, validate
from .quasiorder import automorphisms_fix_two_sided_classes


class LinearMapOnSMA:
    """Linear map out of A_rho, stored by its matrix-unit images."""

    __slots__ = ("rho", "images")

    def __init__(self, rho: QuasiOrder, images):
        self.rho = rho
        imgs = dict(images)
        expected = set(rho.pairs())
        given = set(imgs)
        missing = sorted(expected - given)
        if missing:
            raise SupportViolation(
                f"no image given for unit {missing[0]}", pair=missing[0]
            )
        extra = sorted(given - expected)
        if extra:
            raise SupportViolation(
                f"image given for {extra[0]} outside the relation", pair=extra[0]
            )
        n = rho.n
        for pair, m in imgs.items():
            if not isinstance(m, DenseMatrix) or m.shape != (n, n):
                raise DimensionMismatch(
                    f"image of {pair} must be a {n}x{n} matrix"
                )
        self.images = imgs

    def image(self, i: int, j: int) -> DenseMatrix:
        try:
            return self.images[(i, j)]
        except KeyError:
            raise SupportViolation(f"({i},{j}) is not in the relation", pair=(i, j))

    def __eq__(self, other):
        if not isinstance(other, LinearMapOnSMA):
            return NotImplemented
        return self.rho == other.rho and self.images == other.images

    def __repr__(self):
        return f"LinearMapOnSMA(n={self.rho.n}, units={len(self.images)})"


def identity_map(rho: QuasiOrder) -> LinearMapOnSMA:
    n = rho.n
    return LinearMapOnSMA(
        rho, {(i, j): DenseMatrix.unit(n, i, j) for (i, j) in rho.pairs()}
    )


def transpose_map(rho: QuasiOrder) -> LinearMapOnSMA:
    n = rho.n
    return LinearMapOnSMA(
        rho, {(i, j): DenseMatrix.unit(n, j, i) for (i, j) in rho.pairs()}
    )


def conjugation_map(rho: QuasiOrder, t: DenseMatrix) -> LinearMapOnSMA:
    """X maps to T X T^-1; lands outside A_rho in general."""
    n = rho.n
    tinv = inverse(t)
    return LinearMapOnSMA(
        rho,
        {(i, j): t * DenseMatrix.unit(n, i, j) * tinv for (i, j) in rho.pairs()},
    )


def apply(phi: LinearMapOnSMA, x: DenseMatrix) -> DenseMatrix:
    """Linear extension of the unit images to a supported matrix."""
    n = phi.rho.n
    if x.shape != (n, n):
        raise DimensionMismatch(f"argument shape {x.shape}, expected {n}x{n}")
    bad = first_unsupported(x.support(), phi.rho)
    if bad is not None:
        raise SupportViolation(
            f"argument has entry at {bad} outside the relation", pair=bad
        )
    out = DenseMatrix.zeros(n, n)
    for (i, j), m in phi.images.items():
        c = x.at(i, j)
        if c:
            out = out + m.scale(c)
    return out


def is_jordan_homomorphism(phi: LinearMapOnSMA):
    """Check the Jordan identity on all unit pairs.

    Returns (True, None) or (False, ((i,j),(k,l))) with the first violating
    pair in lexicographic order. Bilinearity makes the unit check
    sufficient.
    """
    rho = phi.rho
    pairs = rho.pairs()
    for (a, b) in pairs:
        for (c, d) in pairs:
            left = DenseMatrix.zeros(rho.n, rho.n)
            if b == c:
                left = left + phi.images[(a, d)]
            if d == a:
                left = left + phi.images[(c, b)]
            right = jordan_product(phi.images[(a, b)], phi.images[(c, d)])
            if left != right:
                return False, ((a, b), (c, d))
    return True, None


@dataclass(frozen=True)
class CanonicalJordanForm:
    """Factorization of a Jordan homomorphism.

    ``s`` conjugates, ``u`` is the class union carrying the multiplicative
    part (the central idempotent has 1 exactly on u), ``g`` scales, and
    ``pi`` (when present) relabels into a codomain algebra before
    conjugation.
    """

    s: DenseMatrix
    u: frozenset
    g: TransitiveMap
    pi: Optional[tuple] = None

    @property
    def rho(self) -> QuasiOrder:
        return self.g.rho

    def central_idempotent(self) -> DenseMatrix:
        n = self.rho.n
        return DenseMatrix.diag([1 if i in self.u else 0 for i in range(1, n + 1)])

    def unit_image(self, i: int, j: int) -> DenseMatrix:
        n = self.rho.n
        if (i, j) not in self.rho:
            raise SupportViolation(f"({i},{j}) is not in the relation", pair=(i, j))
        if i == j or i in self.u:
            core = DenseMatrix.unit(n, i, j)
        else:
            core = DenseMatrix.unit(n, j, i)
        core = core.scale(self.g.value(i, j))
        if self.pi is not None:
            core = relabel_matrix(core, self.pi)
        return self.s * core * inverse(self.s)

    def reconstruct(self) -> LinearMapOnSMA:
        n = self.rho.n
        sinv = inverse(self.s)
        images = {}
        for (i, j) in self.rho.pairs():
            if i == j or i in self.u:
                core = DenseMatrix.unit(n, i, j)
            else:
                core = DenseMatrix.unit(n, j, i)
            core = core.scale(self.g.value(i, j))
            if self.pi is not None:
                core = relabel_matrix(core, self.pi)
            images[(i, j)] = self.s * core * sinv
        return LinearMapOnSMA(self.rho, images)


def classify_jordan(phi: LinearMapOnSMA) -> CanonicalJordanForm:
    """Factor a nonvanishing Jordan homomorphism into canonical parameters.

    The verification ladder doubles as a decision procedure: every check
    that fails names a Jordan violation, and an input passing all of them,
    including the final exact reconstruction, provably was of the canonical
    form, hence a Jordan homomorphism.
    """
    rho = phi.rho
    n = rho.n
    for pair in rho.pairs():
        if phi.images[pair].is_zero():
            raise VanishingUnitImage(f"unit {pair} maps to zero", pair=pair)
    diag_imgs = [phi.images[(i, i)] for i in range(1, n + 1)]
    for i, q in enumerate(diag_imgs, start=1):
        if q * q != q:
            raise NotJordan(
                f"image of E_{i}{i} is not idempotent", pair=((i, i), (i, i))
            )
    for i, j in combinations(range(1, n + 1), 2):
        qi, qj = diag_imgs[i - 1], diag_imgs[j - 1]
        if not (qi * qj + qj * qi).is_zero():
            raise NotJordan(
                f"images of E_{i}{i} and E_{j}{j} are not orthogonal",
                pair=((i, i), (j, j)),
            )
    # n orthogonal nonzero idempotents in n-space are rank one and sum to
    # the identity, so one range vector per image assembles an invertible S0
    cols = []
    for q in diag_imgs:
        col = None
        for j in range(1, n + 1):
            candidate = q.col_list(j)
            lead = next((v for v in candidate if v), None)
            if lead is not None:
                col = [v / lead for v in candidate]
                break
        cols.append(col)
    s0 = DenseMatrix(n, n, [cols[j][i] for i in range(n) for j in range(n)])
    s0inv = inverse(s0)
    mult = {}
    anti = {}
    for (i, j) in rho.strict_pairs():
        b = s0inv * phi.images[(i, j)] * s0
        alpha = b.at(i, j)
        beta = b.at(j, i)
        expected = DenseMatrix.unit(n, i, j).scale(alpha) + DenseMatrix.unit(
            n, j, i
        ).scale(beta)
        if b != expected:
            raise NotJordan(
                f"conjugated image of E_{i}{j} leaves span(E_{i}{j}, E_{j}{i})",
                pair=((i, i), (i, j)),
            )
        if alpha and beta:
            raise NotJordan(
                f"image of E_{i}{j} mixes multiplicative and antimultiplicative "
                "parts",
                pair=((i, j), (i, j)),
            )
        if alpha:
            mult[(i, j)] = alpha
        else:
            anti[(i, j)] = beta
    classes = approx_classes(rho).blocks
    u = set()
    for blk in classes:
        m_pairs = sorted(p for p in mult if p[0] in blk)
        a_pairs = sorted(p for p in anti if p[0] in blk)
        if m_pairs and a_pairs:
            raise NotJordan(
                "multiplicative and antimultiplicative pairs share a class",
                pair=(m_pairs[0], a_pairs[0]),
            )
        if m_pairs:
            u |= blk
    try:
        g = validate(rho, {**mult, **anti})
    except NotTransitive as exc:
        raise NotJordan(
            f"unit weights are not multiplicatively transitive: {exc}",
            pair=exc.witness,
        ) from exc
    form = CanonicalJordanForm(s=s0, u=frozenset(u), g=g)
    for (i, j) in rho.pairs():
        if form.unit_image(i, j) != phi.images[(i, j)]:
            raise InternalInconsistency(
                f"reconstruction differs at unit ({i},{j}); the input was not "
                "a Jordan homomorphism"
            )
    return form


def synthesize_jordan(rho: QuasiOrder, s: DenseMatrix, u, g) -> LinearMapOnSMA:
    """Build the Jordan homomorphism with the given parameters.

    ``u`` must be a union of connectivity classes; ``g`` either a validated
    TransitiveMap on rho or a weight dict to validate.
    """
    from .errors import NotClassUnion

    if not isinstance(g, TransitiveMap):
        g = validate(rho, g)
    elif g.rho != rho:
        raise DimensionMismatch("weight map lives on a different relation")
    useg = frozenset(u)
    if not approx_classes(rho).is_union_of_blocks(useg):
        raise NotClassUnion(f"{sorted(useg)} is not a union of classes")
    if s.shape != (rho.n, rho.n):
        raise DimensionMismatch("similarity has the wrong size")
    inverse(s)  # Singular propagates
    return CanonicalJordanForm(s=s, u=useg, g=g).reconstruct()


def multiplicativity_dichotomy(rho: QuasiOrder) -> bool:
    """True iff at most one connectivity class has two or more vertices."""
    big = [b for b in approx_classes(rho).blocks if len(b) >= 2]
    return len(big) <= 1


def jordan_embeds_into(rho: QuasiOrder, rho2: QuasiOrder):
    """Class union and permutation witnessing a Jordan embedding, or None.

    Unions are tried largest first, so a plain algebra embedding (all
    classes direct) is found before any partially transposed one.
    """
    if rho.n != rho2.n:
        raise DimensionMismatch("relations live on different vertex counts")
    blocks = sorted(approx_classes(rho).blocks, key=min)
    unions = []
    for mask in range(1 << len(blocks)):
        u = frozenset().union(*(blocks[b] for b in range(len(blocks)) if mask >> b & 1)) if mask else frozenset()
        unions.append(u)
    unions.sort(key=lambda s: (-len(s), tuple(sorted(s))))
    for u in unions:
        hits = increasing_permutations(rho_U(rho, u), rho2, limit=1)
        if hits:
            pi = hits[0]
            for (i, j) in rho.pairs():
                a, b = (i, j) if (i == j or i in u) else (j, i)
                if (pi[a - 1], pi[b - 1]) not in rho2:
                    raise InternalInconsistency("embedding witness fails support")
            return u, pi
    return None


def algebra_embeds_into(rho: QuasiOrder, rho2: QuasiOrder):
    """Increasing permutation embedding the algebra directly, or None."""
    if rho.n != rho2.n:
        raise DimensionMismatch("relations live on different vertex counts")
    hits = increasing_permutations(rho, rho2, limit=1)
    return hits[0] if hits else None


def classify_into_codomain(
    phi: LinearMapOnSMA, rho2: QuasiOrder
) -> CanonicalJordanForm:
    """Classification refined against a codomain algebra.

    The conjugating matrix is refactored as S' R_pi with S' invertible
    inside the codomain algebra and pi read off the intrinsic
    diagonalization of the image of diag(1..n).
    """
    rho = phi.rho
    n = rho.n
    if rho2.n != n:
        raise DimensionMismatch("codomain lives on a different vertex count")
    for pair in sorted(phi.images):
        bad = first_unsupported(phi.images[pair].support(), rho2)
        if bad is not None:
            raise SupportViolation(
                f"image of {pair} has entry at {bad} outside the codomain",
                pair=bad,
            )
    base = classify_jordan(phi)
    lam_image = DenseMatrix.zeros(n, n)
    for i in range(1, n + 1):
        lam_image = lam_image + phi.images[(i, i)].scale(i)
    s1 = simultaneous_diagonalize_in_sma(rho2, [lam_image])
    d = inverse(s1) * lam_image * s1
    positions = {}
    for j in range(1, n + 1):
        val = d.at(j, j)
        if val.im or val.re.denominator != 1:
            raise InternalInconsistency("diagonalized eigenvalue not an index")
        positions[int(val.re)] = j
    if sorted(positions) != list(range(1, n + 1)):
        raise InternalInconsistency("image of diag(1..n) lost an eigenvalue")
    pi = tuple(positions[i] for i in range(1, n + 1))
    r_pi = relabel_matrix(DenseMatrix.identity(n), pi)
    from .exactnum import permutation_matrix

    d0 = inverse(permutation_matrix(pi)) * inverse(s1) * base.s
    if not d0.is_diagonal():
        raise InternalInconsistency("residual similarity is not diagonal")
    scale = {}
    for i in range(1, n + 1):
        di = d0.at(i, i)
        if not di:
            raise InternalInconsistency("residual similarity is singular")
        scale[i] = di if i in base.u else di.reciprocal()
    weights = {
        (i, j): base.g.value(i, j) * scale[i] / scale[j]
        for (i, j) in rho.strict_pairs()
    }
    g2 = validate(rho, weights)
    mixed = rho_U(rho, base.u)
    for (i, j) in mixed.pairs():
        if (pi[i - 1], pi[j - 1]) not in rho2:
            raise InternalInconsistency("permutation is not increasing into codomain")
    form = CanonicalJordanForm(s=s1, u=base.u, g=g2, pi=pi)
    for (i, j) in rho.pairs():
        if form.unit_image(i, j) != phi.images[(i, j)]:
            raise InternalInconsistency("codomain reconstruction differs")
    return form


def extends_to_full_jordan_automorphism(rho: QuasiOrder) -> bool:
    """True iff every Jordan automorphism of the algebra is the restriction
    of a Jordan automorphism of the full matrix algebra."""
    return all_transitive_trivial(rho) and multiplicativity_dichotomy(rho)


def all_algebra_automorphisms_inner(rho: QuasiOrder) -> bool:
    """True iff every algebra automorphism is conjugation by a unit of the
    algebra."""
    return all_transitive_trivial(rho) and automorphisms_fix_two_sided_classes(rho)


# --- linear map text format -------------------------------------------------
#
# Line 1: n. Then, per related pair, a line "unit i j" followed by the n*n
# entries of its image, whitespace separated across any number of lines.


def parse_linear_map(text: str) -> LinearMapOnSMA:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line))
    if not lines:
        raise FormatError("empty linear map input")
    lineno, header = lines[0]
    try:
        n = int(header)
    except ValueError as exc:
        raise FormatError("first line must be the size n", line=lineno) from exc
    if n < 1:
        raise FormatError("size must be positive", line=lineno)
    images = {}
    pos = 1
    while pos < len(lines):
        lineno, line = lines[pos]
        parts = line.split()
        if parts[0] != "unit" or len(parts) != 3:
            raise FormatError("expected 'unit i j'", line=lineno)
        try:
            i, j = int(parts[1]), int(parts[2])
        except ValueError as exc:
            raise FormatError("unit indices must be integers", line=lineno) from exc
        if not (1 <= i <= n and 1 <= j <= n):
            raise FormatError(f"unit ({i},{j}) outside 1..{n}", line=lineno)
        if (i, j) in images:
            raise FormatError(f"duplicate unit ({i},{j})", line=lineno)
        pos += 1
        tokens = []
        while pos < len(lines) and len(tokens) < n * n:
            tl, tline = lines[pos]
            parts = tline.split()
            if parts[0] == "unit":
                break
            for tok in parts:
                try:
                    tokens.append(GaussianRational.from_literal(tok))
                except FormatError as exc:
                    raise FormatError(str(exc), line=tl) from exc
            pos += 1
        if len(tokens) != n * n:
            raise FormatError(
                f"unit ({i},{j}) needs {n * n} entries, got {len(tokens)}",
                line=lineno,
            )
        images[(i, j)] = DenseMatrix(n, n, tokens)
    strict = [p for p in images if p[0] != p[1]]
    rho = from_edges(n, strict, close=False)
    missing = sorted(set(rho.pairs()) - set(images))
    if missing:
        raise FormatError(f"missing unit block for {missing[0]}")
    return LinearMapOnSMA(rho, images)


def format_linear_map(phi: LinearMapOnSMA) -> str:
    n = phi.rho.n
    out = [str(n)]
    for (i, j) in phi.rho.pairs():
        out.append(f"unit {i} {j}")
        m = phi.images[(i, j)]
        for r in range(1, n + 1):
            out.append(" ".join(v.literal() for v in m.row_list(r)))
    return "\n".join(out) + "\n"
