"""Command-line front end: every decision procedure as a batch tool.

Exit codes follow one convention across subcommands: 0 for success or a
positive verdict, 1 for a negative verdict accompanied by a certificate,
2 for input that could not be parsed or validated. Reports go to standard
output; `--format json-lines` swaps the text layout for one JSON object
per line with the same content.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from dataclasses import dataclass

from .diag import simultaneous_diagonalize_in_sma
from .errors import (
    DimensionMismatch,
    FormatError,
    GIsTrivial,
    IrrationalSpectrum,
    NotClassUnion,
    NotClosed,
    NotDiagonalizable,
    NotJordan,
    NotTransitive,
    NotUnital,
    PreconditionViolated,
    Singular,
    SupportViolation,
    VanishingUnitImage,
    ZeroWeight,
)
from .exactnum import (
    DenseMatrix,
    ONE,
    format_matrix,
    inverse,
    parse_matrix,
    rank,
)
from .jordan import (
    CanonicalJordanForm,
    LinearMapOnSMA,
    apply,
    algebra_embeds_into,
    classify_into_codomain,
    classify_jordan,
    extends_to_full_jordan_automorphism,
    all_algebra_automorphisms_inner,
    is_jordan_homomorphism,
    jordan_embeds_into,
    multiplicativity_dichotomy,
    parse_linear_map,
    format_linear_map,
    synthesize_jordan,
)
from .quasiorder import (
    approx_classes,
    block_triangular_form,
    central_idempotents,
    first_unsupported,
    format_relation,
    from_edges,
    parse_relation,
    rectangles,
    two_sided_classes,
)
from .rankpres import (
    bounded_rank_preserver_check,
    certify_rank_one_preserver,
    classify_rank_preserver,
    format_verdict,
    induced_linear_map,
    nontrivial_g_rank_witness,
    rank_identity_check,
)
from .transmap import (
    all_transitive_trivial,
    apply_induced,
    format_weights,
    parse_weights,
    random_transitive_map,
    triviality_witness,
    validate,
    walk_product,
)


@dataclass(frozen=True)
class CommandOutcome:
    exit_code: int
    report: str


class _InputError(Exception):
    """Raised internally for anything that must exit with code 2."""

    def __init__(self, message: str):
        super().__init__(message)
        self.message = message


class Report:
    """Parallel text and JSON-lines accumulators."""

    def __init__(self) -> None:
        self.lines = []
        self.records = []

    def add(self, text, **fields):
        if text is not None:
            self.lines.append(text)
        if fields:
            self.records.append(fields)

    def render(self, fmt: str) -> str:
        if fmt == "json-lines":
            body = "\n".join(json.dumps(r, sort_keys=True) for r in self.records)
        else:
            body = "\n".join(self.lines)
        return body + "\n" if body else ""


# ---------------------------------------------------------------------------
# input loading


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise _InputError(f"error: {path}: {exc.strerror or exc}")


def _diagnostic(path: str, exc) -> str:
    line = getattr(exc, "line", None)
    if line is not None:
        return f"error: {path}: line {line}: {exc}"
    return f"error: {path}: {exc}"


def _load_qo(path: str, close: bool = False):
    try:
        n, edges = parse_relation(_read(path))
        return from_edges(n, edges, close=close)
    except (FormatError, NotClosed) as exc:
        raise _InputError(_diagnostic(path, exc))


def _load_gm(path: str) -> DenseMatrix:
    try:
        return parse_matrix(_read(path))
    except FormatError as exc:
        raise _InputError(_diagnostic(path, exc))


def _load_gw(path: str, rho):
    try:
        return parse_weights(_read(path), rho)
    except (FormatError, SupportViolation, NotTransitive, ZeroWeight) as exc:
        raise _InputError(_diagnostic(path, exc))


def _load_lm(path: str, rho) -> LinearMapOnSMA:
    try:
        phi = parse_linear_map(_read(path))
    except (FormatError, SupportViolation, DimensionMismatch) as exc:
        raise _InputError(_diagnostic(path, exc))
    if phi.rho != rho:
        raise _InputError(
            f"error: {path}: the map's unit list does not match the relation"
        )
    return phi


def _parse_class_list(text: str) -> frozenset:
    if text in ("-", ""):
        return frozenset()
    try:
        return frozenset(int(tok) for tok in text.split(","))
    except ValueError:
        raise _InputError(f"error: --classes: {text!r} is not a comma list")


# ---------------------------------------------------------------------------
# shared rendering


def _fmt_blocks(blocks) -> str:
    ordered = sorted(blocks, key=min)
    return " ".join("{" + ",".join(str(v) for v in sorted(b)) + "}" for b in ordered)


def _json_blocks(blocks):
    return [sorted(b) for b in sorted(blocks, key=min)]


def _fmt_classes(u) -> str:
    return ",".join(str(v) for v in sorted(u)) if u else "-"


def _bool(flag: bool) -> str:
    return "true" if flag else "false"


def _block(rep: Report, label: str, text: str, key: str):
    rep.add(label)
    rep.add(text.rstrip("\n"), **{key: text})


def _ones_map(rho):
    return validate(rho, {p: ONE for p in rho.strict_pairs()})


def _add_form(rep: Report, form: CanonicalJordanForm):
    record = {
        "s": format_matrix(form.s),
        "classes": sorted(form.u),
        "g": format_weights(form.g),
    }
    rep.add("FORM")
    rep.add("S")
    rep.add(format_matrix(form.s).rstrip("\n"))
    rep.add(f"classes {_fmt_classes(form.u)}")
    rep.add("g")
    rep.add(format_weights(form.g).rstrip("\n"))
    if form.pi is not None:
        record["pi"] = list(form.pi)
        rep.add("pi " + " ".join(str(k) for k in form.pi))
    rep.add(None, **record)


def _add_verdict(rep: Report, v):
    text = format_verdict(v).rstrip("\n")
    rep.add(text, verdict=v.kind)
    if v.form is not None:
        rep.add(None, s=format_matrix(v.form.s), classes=sorted(v.form.u),
                g=format_weights(v.form.g))
    if v.counterexample is not None:
        rep.add(None, witness=format_matrix(v.counterexample),
                ranks=list(v.ranks))
    if v.note:
        rep.add(None, note=v.note)


def _fmt_pair(pair) -> str:
    return f"({pair[0]},{pair[1]})"


# ---------------------------------------------------------------------------
# subcommands


def _cmd_close(args) -> tuple:
    q = _load_qo(args.relation, close=True)
    rep = Report()
    text = format_relation(q)
    rep.add(text.rstrip("\n"), relation=text)
    return 0, rep


def _cmd_info(args) -> tuple:
    q = _load_qo(args.relation)
    rep = Report()
    rep.add(f"n {q.n}", n=q.n)
    classes = approx_classes(q).blocks
    rep.add("classes " + _fmt_blocks(classes), classes=_json_blocks(classes))
    mutual = two_sided_classes(q).blocks
    rep.add(
        "mutual-classes " + _fmt_blocks(mutual),
        mutual_classes=_json_blocks(mutual),
    )
    center = len(central_idempotents(q))
    rep.add(f"center-dimension {center}", center_dimension=center)
    rect = len(list(rectangles(q)))
    rep.add(f"rectangles {rect}", rectangles=rect)
    for name, value in (
        ("dichotomy", multiplicativity_dichotomy(q)),
        ("inner", all_algebra_automorphisms_inner(q)),
        ("extends", extends_to_full_jordan_automorphism(q)),
    ):
        rep.add(f"{name} {_bool(value)}", **{name: value})
    return 0, rep


def _cmd_blocks(args) -> tuple:
    q = _load_qo(args.relation)
    b = block_triangular_form(q)
    rep = Report()
    rep.add("pi " + " ".join(str(k) for k in b.pi), pi=list(b.pi))
    rep.add("sizes " + " ".join(str(s) for s in b.sizes), sizes=list(b.sizes))
    rows = [
        "".join("1" if cell else "0" for cell in row) for row in b.presence
    ]
    rep.add("presence " + " ".join(rows), presence=rows)
    rep.add(
        "class-order " + _fmt_blocks(b.class_order),
        class_order=[sorted(c) for c in b.class_order],
    )
    return 0, rep


def _verify_jordan_embedding(rho, rho2, u, pi):
    form = CanonicalJordanForm(
        s=DenseMatrix.identity(rho.n), u=u, g=_ones_map(rho), pi=pi
    )
    phi = form.reconstruct()
    ok, _ = is_jordan_homomorphism(phi)
    if not ok:
        return False
    for m in phi.images.values():
        if first_unsupported(m.support(), rho2) is not None:
            return False
    return True


def _cmd_embed(args) -> tuple:
    rho = _load_qo(args.relation)
    rho2 = _load_qo(args.codomain_relation)
    rep = Report()
    try:
        if args.jordan:
            found = jordan_embeds_into(rho, rho2)
        else:
            found = algebra_embeds_into(rho, rho2)
    except DimensionMismatch as exc:
        raise _InputError(f"error: {exc}")
    if found is None:
        rep.add("NO-EMBEDDING", embedding=None)
        return 1, rep
    if args.jordan:
        u, pi = found
        if not _verify_jordan_embedding(rho, rho2, u, pi):
            raise _InputError("error: embedding certificate failed re-verification")
        rep.add("EMBEDDING", embedding="jordan")
        rep.add(f"classes {_fmt_classes(u)}", classes=sorted(u))
    else:
        pi = found
        for (i, j) in rho.pairs():
            if (pi[i - 1], pi[j - 1]) not in rho2:
                raise _InputError(
                    "error: embedding certificate failed re-verification"
                )
        rep.add("EMBEDDING", embedding="algebra")
    rep.add("pi " + " ".join(str(k) for k in pi), pi=list(pi))
    return 0, rep


def _cmd_trivial(args) -> tuple:
    rho = _load_qo(args.relation)
    g = _load_gw(args.weights, rho)
    cert = triviality_witness(g)
    rep = Report()
    if cert.is_trivial:
        s = cert.separator
        for (i, j) in rho.strict_pairs():
            if g.value(i, j) != s[i] / s[j]:
                raise _InputError("error: separator failed re-verification")
        values = [s[i].literal() for i in range(1, rho.n + 1)]
        rep.add("TRIVIAL", trivial=True)
        rep.add("separator " + " ".join(values), separator=values)
        return 0, rep
    if walk_product(g, cert.walk) != cert.product or cert.product == ONE:
        raise _InputError("error: walk certificate failed re-verification")
    steps = " ".join(
        f"({i},{j}){'+' if d > 0 else '-'}" for ((i, j), d) in cert.walk
    )
    rep.add("NONTRIVIAL", trivial=False)
    rep.add("walk " + steps, walk=[[i, j, d] for ((i, j), d) in cert.walk])
    rep.add("product " + cert.product.literal(), product=cert.product.literal())
    return 1, rep


def _cmd_all_trivial(args) -> tuple:
    rho = _load_qo(args.relation)
    rep = Report()
    if all_transitive_trivial(rho):
        rep.add("ALL-TRIVIAL", all_trivial=True)
        return 0, rep
    rep.add("NOT-ALL-TRIVIAL", all_trivial=False)
    for seed in range(200):
        g = random_transitive_map(rho, seed=seed)
        if not triviality_witness(g).is_trivial:
            _block(rep, "g", format_weights(g), "g")
            break
    return 1, rep


def _cmd_diagonalize(args) -> tuple:
    rho = _load_qo(args.relation)
    family = [_load_gm(p) for p in args.matrices]
    for path, m in zip(args.matrices, family):
        if m.shape != (rho.n, rho.n):
            raise _InputError(f"error: {path}: matrix is not {rho.n}x{rho.n}")
        bad = first_unsupported(m.support(), rho)
        if bad is not None:
            raise _InputError(f"error: {path}: entry at {bad} outside the relation")
    rep = Report()
    try:
        s = simultaneous_diagonalize_in_sma(rho, family)
    except (NotDiagonalizable, IrrationalSpectrum) as exc:
        rep.add(f"NOT-DIAGONALIZABLE {exc}", diagonalizable=False, reason=str(exc))
        return 1, rep
    except PreconditionViolated as exc:
        raise _InputError(f"error: {exc}")
    s_inv = inverse(s)
    if first_unsupported(s.support(), rho) is not None:
        raise _InputError("error: similarity failed re-verification")
    _block(rep, "S", format_matrix(s), "s")
    for m in family:
        d = s_inv * m * s
        if not d.is_diagonal():
            raise _InputError("error: similarity failed re-verification")
        entries = [d.at(i, i).literal() for i in range(1, rho.n + 1)]
        rep.add("diag " + " ".join(entries), diag=entries)
    return 0, rep


def _cmd_classify(args) -> tuple:
    rho = _load_qo(args.relation)
    phi = _load_lm(args.map, rho)
    rep = Report()
    try:
        if args.codomain:
            rho2 = _load_qo(args.codomain)
            form = classify_into_codomain(phi, rho2)
        else:
            form = classify_jordan(phi)
    except NotJordan as exc:
        rep.add("NOT-JORDAN", verdict="not-jordan")
        rep.add(
            f"pair {_fmt_pair(exc.pair[0])} {_fmt_pair(exc.pair[1])}",
            pair=[list(p) for p in exc.pair],
        )
        return 1, rep
    except VanishingUnitImage as exc:
        rep.add("VANISHING-UNIT", verdict="vanishing-unit")
        rep.add(f"pair {_fmt_pair(exc.pair)}", pair=list(exc.pair))
        return 1, rep
    except SupportViolation as exc:
        rep.add("UNSUPPORTED", verdict="unsupported")
        rep.add(f"pair {_fmt_pair(exc.pair)}", pair=list(exc.pair))
        return 1, rep
    if form.reconstruct() != phi:
        raise _InputError("error: canonical form failed re-verification")
    _add_form(rep, form)
    return 0, rep


def _cmd_synthesize(args) -> tuple:
    rho = _load_qo(args.relation)
    s = _load_gm(args.s)
    u = _parse_class_list(args.classes)
    g = _load_gw(args.g, rho)
    try:
        phi = synthesize_jordan(rho, s, u, g)
    except (NotClassUnion, Singular, DimensionMismatch, ZeroWeight) as exc:
        raise _InputError(f"error: {exc}")
    ok, _ = is_jordan_homomorphism(phi)
    if not ok:
        raise _InputError("error: synthesized map failed re-verification")
    rep = Report()
    text = format_linear_map(phi)
    rep.add(text.rstrip("\n"), map=text)
    return 0, rep


def _cmd_check_rank(args) -> tuple:
    rho = _load_qo(args.relation)
    phi = _load_lm(args.map, rho)
    rep = Report()
    if args.max_rank is not None:
        ok, witness = bounded_rank_preserver_check(
            phi, args.max_rank, seed=args.seed
        )
        if ok:
            rep.add("BOUNDED-OK", bounded_ok=True)
            rep.add(f"max-rank {args.max_rank}", max_rank=args.max_rank)
            return 0, rep
        before, after = rank(witness), rank(apply(phi, witness))
        rep.add("WITNESS", bounded_ok=False)
        rep.add(format_matrix(witness).rstrip("\n"), witness=format_matrix(witness))
        rep.add(f"RANKS {before} {after}", ranks=[before, after])
        return 1, rep
    verdict = classify_rank_preserver(phi)
    _add_verdict(rep, verdict)
    return (0 if verdict.kind == "RankPreserver" else 1), rep


def _cmd_check_rank_one(args) -> tuple:
    rho = _load_qo(args.relation)
    phi = _load_lm(args.map, rho)
    rep = Report()
    try:
        verdict = certify_rank_one_preserver(phi)
    except (NotUnital, VanishingUnitImage) as exc:
        raise _InputError(f"error: {exc}")
    _add_verdict(rep, verdict)
    return (0 if verdict.kind == "RankOnePreserver" else 1), rep


def _cmd_witness(args) -> tuple:
    rho = _load_qo(args.relation)
    g = _load_gw(args.weights, rho)
    rep = Report()
    try:
        witness = nontrivial_g_rank_witness(g)
    except GIsTrivial:
        cert = triviality_witness(g)
        values = [cert.separator[i].literal() for i in range(1, rho.n + 1)]
        rep.add("TRIVIAL", trivial=True)
        rep.add("separator " + " ".join(values), separator=values)
        return 0, rep
    before, after = rank(witness), rank(apply_induced(g, witness))
    rep.add("WITNESS", trivial=False)
    rep.add(format_matrix(witness).rstrip("\n"), witness=format_matrix(witness))
    rep.add(f"RANKS {before} {after}", ranks=[before, after])
    return 1, rep


# ---------------------------------------------------------------------------
# selftest helpers (standalone so the installed package needs no test files)


def _random_quasiorder(rng, n_max):
    n = rng.randint(2, n_max)
    edges = [
        (i, j)
        for i in range(1, n + 1)
        for j in range(1, n + 1)
        if i != j and rng.random() < 0.3
    ]
    return from_edges(n, edges)


def _random_invertible(rho, rng):
    n = rho.n
    m = DenseMatrix.diag([rng.choice([1, -1, 2]) for _ in range(n)])
    strict = rho.strict_pairs()
    ident = DenseMatrix.identity(n)
    for _ in range(5):
        if not strict:
            break
        i, j = strict[rng.randrange(len(strict))]
        m = m * (ident + DenseMatrix.unit(n, i, j).scale(rng.choice([1, -1, 2])))
    return m


def _random_union(rho, rng):
    picked = [b for b in approx_classes(rho).blocks if rng.random() < 0.5]
    return frozenset().union(*picked) if picked else frozenset()


def _random_supported(rho, rng):
    m = DenseMatrix.zeros(rho.n, rho.n)
    for (i, j) in rho.pairs():
        c = rng.randint(-2, 2)
        if c:
            m = m + DenseMatrix.unit(rho.n, i, j).scale(c)
    return m


def _selftest_rank_identity(rng, n_max):
    for _ in range(60):
        rho = _random_quasiorder(rng, n_max)
        if not rank_identity_check(rho, _random_union(rho, rng), _random_supported(rho, rng)):
            return "rank identity violated"
    return None


def _selftest_round_trip(rng, n_max):
    for _ in range(15):
        rho = _random_quasiorder(rng, n_max)
        s = _random_invertible(rho, rng)
        u = _random_union(rho, rng)
        g = random_transitive_map(rho, seed=rng.randrange(10**6))
        phi = synthesize_jordan(rho, s, u, g)
        if classify_jordan(phi).reconstruct() != phi:
            return "classification round trip failed"
    return None


def _selftest_triviality_rank(rng, n_max):
    if n_max < 4:
        return None
    for _ in range(10):
        n = rng.randint(4, n_max)
        a, b, c, d = rng.sample(range(1, n + 1), 4)
        rho = from_edges(n, [(a, c), (a, d), (b, c), (b, d)])
        g = random_transitive_map(rho, seed=rng.randrange(10**6))
        verdict = classify_rank_preserver(induced_linear_map(g))
        trivial = triviality_witness(g).is_trivial
        if trivial != (verdict.kind == "RankPreserver"):
            return "triviality and rank preservation disagree"
    return None


def _selftest_diagonalize(rng, n_max):
    for _ in range(10):
        rho = _random_quasiorder(rng, n_max)
        s = _random_invertible(rho, rng)
        s_inv = inverse(s)
        family = [
            s * DenseMatrix.diag([rng.randint(0, 2) for _ in range(rho.n)]) * s_inv
            for _ in range(2)
        ]
        t = simultaneous_diagonalize_in_sma(rho, family)
        t_inv = inverse(t)
        for m in family:
            if not (t_inv * m * t).is_diagonal():
                return "conjugate is not diagonal"
    return None


def _cmd_selftest(args) -> tuple:
    rng = random.Random(args.seed)
    n_max = max(2, args.n)
    suites = (
        ("rank-identity", _selftest_rank_identity),
        ("round-trip", _selftest_round_trip),
        ("triviality-rank", _selftest_triviality_rank),
        ("diagonalize", _selftest_diagonalize),
    )
    rep = Report()
    failed = False
    for name, fn in suites:
        problem = fn(rng, n_max)
        if problem is None:
            rep.add(f"ok {name}", suite=name, ok=True)
        else:
            failed = True
            rep.add(f"FAIL {name}: {problem}", suite=name, ok=False, detail=problem)
    return (1 if failed else 0), rep


# ---------------------------------------------------------------------------
# dispatch


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="smalg",
        description="decision procedures for structural matrix algebras",
    )
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument(
        "--format", choices=("text", "json-lines"), default="text"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("close", help="reflexive-transitive closure of a relation")
    p.add_argument("relation")
    p.set_defaults(handler=_cmd_close)

    p = sub.add_parser("info", help="class structure and predicate summary")
    p.add_argument("relation")
    p.set_defaults(handler=_cmd_info)

    p = sub.add_parser("blocks", help="block triangular renumbering")
    p.add_argument("relation")
    p.set_defaults(handler=_cmd_blocks)

    p = sub.add_parser("embed", help="decide embeddability between two relations")
    p.add_argument("--jordan", action="store_true")
    p.add_argument("relation")
    p.add_argument("codomain_relation")
    p.set_defaults(handler=_cmd_embed)

    p = sub.add_parser("trivial", help="decide triviality of a weight map")
    p.add_argument("relation")
    p.add_argument("weights")
    p.set_defaults(handler=_cmd_trivial)

    p = sub.add_parser("all-trivial", help="decide whether every weight map is trivial")
    p.add_argument("relation")
    p.set_defaults(handler=_cmd_all_trivial)

    p = sub.add_parser("diagonalize", help="simultaneously diagonalize inside the algebra")
    p.add_argument("relation")
    p.add_argument("matrices", nargs="+")
    p.set_defaults(handler=_cmd_diagonalize)

    p = sub.add_parser("classify", help="canonical form of a Jordan embedding")
    p.add_argument("--codomain")
    p.add_argument("relation")
    p.add_argument("map")
    p.set_defaults(handler=_cmd_classify)

    p = sub.add_parser("synthesize", help="build the map for given (S, classes, g)")
    p.add_argument("relation")
    p.add_argument("--s", required=True)
    p.add_argument("--classes", required=True)
    p.add_argument("--g", required=True)
    p.set_defaults(handler=_cmd_synthesize)

    p = sub.add_parser("check-rank", help="rank preserver classification")
    p.add_argument("--max-rank", type=int)
    p.add_argument("relation")
    p.add_argument("map")
    p.set_defaults(handler=_cmd_check_rank)

    p = sub.add_parser("check-rank-one", help="certified rank-one preserver check")
    p.add_argument("relation")
    p.add_argument("map")
    p.set_defaults(handler=_cmd_check_rank_one)

    p = sub.add_parser("witness", help="rank witness for a nontrivial weight map")
    p.add_argument("relation")
    p.add_argument("weights")
    p.set_defaults(handler=_cmd_witness)

    p = sub.add_parser("selftest", help="run the randomized invariant suites")
    p.add_argument("--n", type=int, default=6)
    p.set_defaults(handler=_cmd_selftest)

    return parser


def run(argv) -> CommandOutcome:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return CommandOutcome(exc.code if exc.code else 0, "")
    try:
        code, rep = args.handler(args)
    except _InputError as exc:
        if args.format == "json-lines":
            return CommandOutcome(2, json.dumps({"error": exc.message}) + "\n")
        return CommandOutcome(2, exc.message + "\n")
    return CommandOutcome(code, rep.render(args.format))


def main() -> None:
    outcome = run(sys.argv[1:])
    if outcome.report:
        sys.stdout.write(outcome.report)
    sys.exit(outcome.exit_code)


if __name__ == "__main__":
    main()
