"""The acceptance battery.  Each criterion returns an :class:`Outcome`; ``run_suite`` times them.

Tolerances live in :data:`DEFAULTS` and may be overridden (``--set`` on the
command line), which is how the negative control is exercised.
"""
from __future__ import annotations

import itertools
import logging
import random
import time
from dataclasses import dataclass
from fractions import Fraction

from .algebra import (
    WITT,
    WITT_POSITIVE,
    VIRASORO,
    CommMonomial,
    CommPoly,
    NCElement,
    NCWord,
    RawNC,
    parse_any,
    virasoro_quotient,
)
from .brackets import bracket_structure, d_a, del_a, gr, nc_multiply, normalize_pbw, phi
from .growth import (
    DimensionSeries,
    QuotientGrowth,
    count_spanning,
    filtration_check,
    free_series,
    gk_slope,
    sk_criticality_probe,
)
from .orders import OrderKind, order_key
from .reduction import POISSON, TWO_SIDED, IdealSpec, Reducer, is_normal_word, verify_certificate
from .verma import InducedSpec, annihilator_falsify, growth_of_module, verma_graded_dim

log = logging.getLogger(__name__)

DEFAULTS = {
    "seed": 0,
    "c1.max_index": 12,
    "c2.words": 500,
    "c2.triples": 200,
    "c3.pairs": 200,
    "c4.max_degree": 30,
    "c5.inputs": 100,
    "c5.max_degree": 20,
    "c6.max_degree": 25,
    "c6.slope_bound": 4.3,
    "c6.free_slope_floor": 4.0,
    "c7.samples": 100,
    "c7.max_abs": 20,
    "c8.max_grade": 20,
    "c8.max_growth": 40,
    "c8.poly_degree": 6,
    "c9.samples": 50,
    "c9.depth": 10,
    "c10.pairs": 200,
    "c11.max_degree": 25,
    "c11.slope_bound": 1.3,
}

C4_IDEALS = ("x[1]x[1]", "x[1]x[2]", "x[2]x[2] + x[1]x[3]")


@dataclass
class Outcome:
    passed: bool
    observed: object
    bound: object
    detail: str = ""


# --------------------------------------------------------------------------
# random inputs


def random_raw_word(rng: random.Random, max_len: int, max_abs: int, lo: int | None = None) -> tuple:
    lo = -max_abs if lo is None else lo
    return tuple(rng.randint(lo, max_abs) for _ in range(rng.randint(0, max_len)))


def random_nc(rng, kind, max_len=3, max_abs=5, max_terms=3, lo=None, nonzero=True) -> NCElement:
    while True:
        raw = {}
        for _ in range(rng.randint(1, max_terms)):
            raw[(random_raw_word(rng, max_len, max_abs, lo), 0)] = Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        el = normalize_pbw(RawNC(raw, kind))
        if el or not nonzero:
            return el


def random_standard(rng, kind, max_len=3, max_abs=5, max_terms=3) -> NCElement:
    """Random nonzero combination of standard words; every letter satisfies ``|i| <= max_abs``."""
    lo = kind.min_index if kind.min_index is not None else -max_abs
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            w = NCWord(tuple(sorted(random_raw_word(rng, max_len, max_abs, lo))))
            terms[w] = terms.get(w, 0) + Fraction(rng.randint(-5, 5), rng.randint(1, 3))
        el = NCElement(terms, kind)
        if el:
            return el


def random_comm(rng, kind, max_degree, max_terms=3) -> CommPoly:
    """Random nonzero polynomial in ``x_1, x_2, ...`` with every term of degree ``<= max_degree``."""
    while True:
        terms = {}
        for _ in range(rng.randint(1, max_terms)):
            budget = rng.randint(1, max_degree)
            idx = []
            while budget > 0:
                i = rng.randint(1, budget)
                idx.append(i)
                budget -= i
            terms[CommMonomial.from_indices(idx)] = Fraction(rng.randint(1, 9) * rng.choice((-1, 1)))
        p = CommPoly(terms, kind)
        if p:
            return p


# --------------------------------------------------------------------------
# criteria


def _lie_bracket_vec(u: dict, v: dict, kind) -> dict:
    """Bracket of Lie-algebra elements written as ``{index or 'c': coeff}``."""
    out: dict = {}
    for i, a in u.items():
        if i == "c":
            continue
        for j, b in v.items():
            if j == "c":
                continue
            coef, s, central = bracket_structure(i, j, kind)
            if coef:
                out[s] = out.get(s, 0) + a * b * coef
            if central:
                out["c"] = out.get("c", 0) + a * b * central
    return {k: x for k, x in out.items() if x}


def _add_vec(*vs) -> dict:
    out: dict = {}
    for v in vs:
        for k, x in v.items():
            out[k] = out.get(k, 0) + x
    return {k: x for k, x in out.items() if x}


def c1_lie_axioms(cfg) -> Outcome:
    kind = VIRASORO
    r = cfg["c1.max_index"]
    idx = range(-r, r + 1)
    bad = 0
    for i, j in itertools.product(idx, idx):
        if _add_vec(_lie_bracket_vec({i: 1}, {j: 1}, kind), _lie_bracket_vec({j: 1}, {i: 1}, kind)):
            bad += 1
    for i, j, k in itertools.product(idx, idx, idx):
        ei, ej, ek = {i: 1}, {j: 1}, {k: 1}
        jac = _add_vec(
            _lie_bracket_vec(_lie_bracket_vec(ei, ej, kind), ek, kind),
            _lie_bracket_vec(_lie_bracket_vec(ej, ek, kind), ei, kind),
            _lie_bracket_vec(_lie_bracket_vec(ek, ei, kind), ej, kind),
        )
        if jac:
            bad += 1
    return Outcome(bad == 0, bad, 0, f"failures over |i|,|j|,|k| <= {r}")


def c2_pbw_confluence(cfg) -> Outcome:
    rng = random.Random(cfg["seed"])
    kind = VIRASORO
    bad = 0
    for _ in range(cfg["c2.words"]):
        raw = RawNC({(random_raw_word(rng, 6, 8), 0): Fraction(1)}, kind)
        forms = {schedule: normalize_pbw(raw, schedule) for schedule in ("leftmost", "rightmost", "insert")}
        if not (forms["leftmost"] == forms["rightmost"] == forms["insert"]):
            bad += 1
    for _ in range(cfg["c2.triples"]):
        u, v, w = (random_nc(rng, kind, 3, 8, 2) for _ in range(3))
        if nc_multiply(nc_multiply(u, v), w) != nc_multiply(u, nc_multiply(v, w)):
            bad += 1
    return Outcome(bad == 0, bad, 0, "schedule disagreements plus associativity failures")


def c3_gr_compat(cfg) -> Outcome:
    rng = random.Random(cfg["seed"])
    kind = WITT
    bad = checked = 0
    for _ in range(cfg["c3.pairs"]):
        u = random_nc(rng, kind, 4, 6, 3)
        a = rng.randint(1, 6)
        rhs = d_a(gr(u), a)
        if not rhs:
            continue
        checked += 1
        if gr(del_a(u, a)) != rhs:
            bad += 1
    return Outcome(bad == 0, bad, 0, f"{checked} pairs with d_a(gr u) != 0")


def c4_reduction_formula(cfg) -> Outcome:
    from .partitions import iter_partitions

    bad = checked = 0
    for text in C4_IDEALS:
        spec = IdealSpec(parse_any(text, WITT_POSITIVE), POISSON)
        reducer = Reducer(spec)
        k, n = reducer.params.k, reducer.params.n
        for N in range(k * n, cfg["c4.max_degree"] + 1):
            for parts in iter_partitions(N, parts=k):
                if parts[0] < n:
                    continue
                m = CommMonomial.from_indices(parts)
                checked += 1
                h, c = reducer.derivation_chain(m)
                ok = c.denominator == 1 and c >= 1 and h.coeff(m) == c
                key = order_key(m, OrderKind.INC_LEX)
                ok = ok and all(w.degree == N for w in h.terms)
                ok = ok and all(order_key(w, OrderKind.INC_LEX) < key for w in h.terms if w != m)
                if not ok:
                    bad += 1
    return Outcome(bad == 0, bad, 0, f"{checked} target monomials")


def c5_normal_forms(cfg) -> Outcome:
    rng = random.Random(cfg["seed"])
    bad = 0
    notes = []
    for text in C4_IDEALS:
        spec = IdealSpec(parse_any(text, WITT_POSITIVE), POISSON)
        reducer = Reducer(spec)
        for _ in range(cfg["c5.inputs"]):
            p = random_comm(rng, WITT_POSITIVE, cfg["c5.max_degree"])
            nf = reducer.normal_form(p)
            if not verify_certificate(p, nf, spec):
                bad += 1
            elif not all(is_normal_word(w, reducer.params, spec.kind) for w in nf.combination.terms):
                bad += 1
        q = QuotientGrowth(spec)
        spans_bad = [N for N in range(1, cfg["c5.max_degree"] + 1) if not q.spans(N)]
        bad += len(spans_bad)
        if spans_bad:
            notes.append(f"{text}: spanning fails at {spans_bad}")
    return Outcome(bad == 0, bad, 0, "; ".join(notes) or "certificates, normality and spanning")


def c6_growth_bound(cfg) -> Outcome:
    N_max = cfg["c6.max_degree"]
    spec = IdealSpec(parse_any("x[1]x[1]", WITT_POSITIVE), POISSON)
    q = QuotientGrowth(spec)
    series = q.series(N_max, 0)
    cum = series.cumulative()
    over = [N for N, total in zip(series.grades, cum) if total > count_spanning(q.params, WITT_POSITIVE, N)]
    window = (15, N_max)
    slope = gk_slope(series, window)
    free_slope = gk_slope(free_series(N_max), window)
    ok = not over and slope <= cfg["c6.slope_bound"] and free_slope > cfg["c6.free_slope_floor"]
    return Outcome(ok, {"slope": round(slope, 4), "free_slope": round(free_slope, 4), "bound_violations": over},
                   {"slope": cfg["c6.slope_bound"], "free_slope_floor": cfg["c6.free_slope_floor"]})


def c7_filtration(cfg) -> Outcome:
    spec = IdealSpec(parse_any("e[1]e[1]", WITT), TWO_SIDED)
    report = filtration_check(spec, cfg["c7.samples"], cfg["seed"], cfg["c7.max_abs"])
    worst = max(s.max_output - (s.bound - report.C) for s in report.samples)
    return Outcome(report.all_pass and report.C == 16, len(report.failures), 0,
                   f"C = {report.C}; largest excess over delta_0(m1)+delta_0(m2) is {worst}")


def _partition_oracle(n: int) -> int:
    """Coin-change count, independent of the pentagonal recurrence."""
    ways = [1] + [0] * n
    for part in range(1, n + 1):
        for total in range(part, n + 1):
            ways[total] += ways[total - part]
    return ways[n]


def c8_verma(cfg) -> Outcome:
    mismatches = [n for n in range(cfg["c8.max_grade"] + 1) if verma_graded_dim(n) != _partition_oracle(n)]
    N = cfg["c8.max_growth"]
    spec = InducedSpec.verma(1, Fraction(1, 2))
    series = DimensionSeries([(n, verma_graded_dim(n)) for n in range(N + 1)])
    if growth_of_module(spec, N) != series.cumulative()[-1]:
        mismatches.append("cumulative")
    d = cfg["c8.poly_degree"]
    third = N // 4
    windows = [(N - 3 * third, N - 2 * third), (N - 2 * third, N - third), (N - third, N)]
    slopes = [gk_slope(series, w) for w in windows]
    rising = all(a < b for a, b in zip(slopes, slopes[1:]))
    ok = not mismatches and slopes[-1] > d and rising
    return Outcome(ok, {"dim_mismatches": mismatches, "tail_slopes": [round(s, 3) for s in slopes]},
                   {"tail_slope_above": d}, f"windows {windows}")


def c9_annihilator(cfg) -> Outcome:
    rng = random.Random(cfg["seed"])
    misses = []
    for t in range(cfg["c9.samples"]):
        kappa = Fraction(rng.randint(-20, 20), rng.randint(1, 6))
        lam = Fraction(rng.randint(-20, 20), rng.randint(1, 6))
        kind = virasoro_quotient(kappa)
        u = random_standard(rng, kind, 3, 5, 3)
        res = annihilator_falsify(u, InducedSpec.verma(kappa, lam), cfg["c9.depth"])
        if not res.found:
            misses.append({"sample": t, "u": str(u), "kappa": str(kappa), "lambda": str(lam)})
    return Outcome(not misses, len(misses), 0, "; ".join(f"#{m['sample']} u={m['u']}" for m in misses))


def c10_phi(cfg) -> Outcome:
    rng = random.Random(cfg["seed"])
    kind = WITT
    bad = 0
    for _ in range(cfg["c10.pairs"]):
        u = random_nc(rng, kind, 4, 6, 3)
        v = random_nc(rng, kind, 4, 6, 3)
        if phi(phi(u)) != u:
            bad += 1
        if phi(nc_multiply(u, v)) != nc_multiply(phi(u), phi(v)):
            bad += 1
    return Outcome(bad == 0, bad, 0, "involution and multiplicativity failures")


def c11_sk_probe(cfg) -> Outcome:
    N = cfg["c11.max_degree"]
    series = sk_criticality_probe(2, parse_any("x[1]x[3]", WITT_POSITIVE), N)
    slope = gk_slope(series, (15, N))
    return Outcome(slope <= cfg["c11.slope_bound"], round(slope, 4), cfg["c11.slope_bound"],
                   f"max graded dim {max(series.dims)}")


CRITERIA = [
    ("c1-lie-axioms", c1_lie_axioms),
    ("c2-pbw-confluence", c2_pbw_confluence),
    ("c3-gr-compat", c3_gr_compat),
    ("c4-reduction-formula", c4_reduction_formula),
    ("c5-normal-forms", c5_normal_forms),
    ("c6-growth-bound", c6_growth_bound),
    ("c7-filtration", c7_filtration),
    ("c8-verma", c8_verma),
    ("c9-annihilator", c9_annihilator),
    ("c10-phi", c10_phi),
    ("c11-sk-probe", c11_sk_probe),
]


def criterion_ids() -> list:
    return [cid for cid, _ in CRITERIA]


def resolve_config(overrides: dict | None = None) -> dict:
    cfg = dict(DEFAULTS)
    for key, value in (overrides or {}).items():
        if key not in cfg:
            raise KeyError(f"unknown suite setting {key!r}")
        cfg[key] = type(cfg[key])(value)
    return cfg


def run_criterion(cid: str, cfg: dict) -> dict:
    fn = dict(CRITERIA)[cid]
    t0 = time.perf_counter()
    try:
        out = fn(cfg)
    except Exception as exc:  # a crash is a failure of that criterion, not of the suite
        log.exception("criterion %s raised", cid)
        out = Outcome(False, f"{type(exc).__name__}: {exc}", None)
    return {
        "criterion_id": cid,
        "status": "pass" if out.passed else "fail",
        "observed": out.observed,
        "bound": out.bound,
        "detail": out.detail,
        "seconds": round(time.perf_counter() - t0, 3),
    }


def run_suite(overrides: dict | None = None, only=None) -> list:
    cfg = resolve_config(overrides)
    ids = criterion_ids() if not only else list(only)
    return [run_criterion(cid, cfg) for cid in ids]
