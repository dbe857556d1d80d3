"""Graded dimensions of quotients, spanning-set counts, slopes and filtration checks."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .algebra import AlgebraKind, CommMonomial, CommPoly, NCElement, NCWord, Variant
from .brackets import d_a, del_a, nc_multiply
from .errors import InsufficientData, KindMismatch, NotHomogeneous, ResourceLimit
from .linalg import RowEchelon
from .orders import abs_degree
from .partitions import iter_partitions, partition_count
from .reduction import IdealSpec, ReductionParams, Reducer, compute_params, is_normal_word

DEFAULT_BUDGET = 10**7


@dataclass
class DimensionSeries:
    values: list  # (grade, dim)
    grading: str = "degree"
    context: str = ""

    @property
    def grades(self) -> list:
        return [n for n, _ in self.values]

    @property
    def dims(self) -> list:
        return [d for _, d in self.values]

    def cumulative(self) -> list:
        out, total = [], 0
        for _, d in self.values:
            total += d
            out.append(total)
        return out


# --------------------------------------------------------------------------
# spanning-set enumeration


def iter_normal_words(params: ReductionParams, kind: AlgebraKind, N: int, metric: str = "degree",
                      budget: int = DEFAULT_BUDGET):
    """Normal words (as sorted letter tuples) whose metric value is at most ``N``.

    ``metric="degree"`` needs a kind with positive letters.  ``metric="abs"``
    bounds the absolute degree and, because ``e_0`` has absolute value 0,
    also the length by ``N``.
    """
    if metric == "degree":
        if kind.variant is not Variant.WITT_POSITIVE:
            raise KindMismatch("degree metric needs witt-positive (finite degree grading)")
        letters = list(range(1, N + 1))
        max_len = N
    elif metric == "abs":
        lo = kind.min_index if kind.min_index is not None else -N
        letters = list(range(lo, N + 1))
        max_len = N
    else:
        raise ValueError(f"unknown metric {metric!r}")
    k, n = params.k, params.n
    full = kind.full_line
    nodes = 0

    def rec(pos, cost_left, len_left, high, low, prefix):
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise ResourceLimit(f"enumeration exceeded {budget} nodes")
        yield tuple(prefix)
        if len_left == 0:
            return
        for t in range(pos, len(letters)):
            i = letters[t]
            c = abs(i)
            if c > cost_left:
                if i > 0:
                    break
                continue
            h = high + (i >= n)
            lw = low + (full and i <= -n)
            if h >= k or lw >= k:
                continue
            prefix.append(i)
            yield from rec(t, cost_left - c, len_left - 1, h, lw, prefix)
            prefix.pop()

    yield from rec(0, N, max_len, 0, 0, [])


def count_spanning(params: ReductionParams, kind: AlgebraKind, N: int, metric: str = "degree",
                   budget: int = DEFAULT_BUDGET) -> int:
    if N < 0:
        return 0
    return sum(1 for _ in iter_normal_words(params, kind, N, metric, budget))


def qr_bound(params: ReductionParams, N: int) -> int:
    """``q(N) * r(N)`` for W+: words in small letters times words with fewer than k big letters.

    Every normal word of degree ``<= N`` splits uniquely into such a pair,
    so this bounds :func:`count_spanning` from above.
    """
    k, n = params.k, params.n
    # q[d]: monomials in x_1 .. x_{n-1} of degree exactly d
    q = [1] + [0] * N
    for part in range(1, min(n - 1, N) + 1):
        for d in range(part, N + 1):
            q[d] += q[d - part]
    r = 0
    for length in range(k):
        for m in range(N + 1):
            r += sum(1 for p in iter_partitions(m, parts=length) if not p or p[0] >= n)
    return sum(q) * r


def normal_words_of_degree(params, kind, N):
    return [p for p in iter_partitions(N) if is_normal_word(NCWord(p), params, kind)]


# --------------------------------------------------------------------------
# ideal graded pieces over W+


def _homogeneous_degree(g) -> int:
    degrees = {m.degree for m in g.terms}
    if len(degrees) != 1 or any(m.cpow for m in g.terms):
        raise NotHomogeneous(f"generator is not degree-homogeneous (degrees {sorted(degrees)})")
    return degrees.pop()


class AdjointModule:
    """Degree pieces of the W+-submodule generated by ``g`` under ``d_a`` or ``[-, e_a]``."""

    def __init__(self, g):
        if g.kind.variant is not Variant.WITT_POSITIVE:
            raise KindMismatch("adjoint-module growth is computed over witt-positive")
        self.g = g
        self.op = d_a if isinstance(g, CommPoly) else del_a
        self.base = _homogeneous_degree(g)
        self.pieces: dict[int, list] = {self.base: [g]}
        self.top = self.base

    def piece(self, d: int) -> list:
        """A basis of the degree-``d`` component."""
        while self.top < d:
            self._extend(self.top + 1)
        return self.pieces.get(d, [])

    def _extend(self, d):
        ech = RowEchelon()
        basis = []
        for a in range(1, d - self.base + 1):
            for b in self.pieces.get(d - a, []):
                img = self.op(b, a)
                if img and ech.add(img.terms):
                    basis.append(img)
        self.pieces[d] = basis
        self.top = d


def _length_bucket(el):
    lengths = {m.length for m in el.terms}
    return lengths.pop() if len(lengths) == 1 else None


def _degree_words(N: int, symmetric: bool):
    for p in iter_partitions(N):
        yield CommMonomial.from_indices(p) if symmetric else NCWord(p)


def ideal_piece(spec: IdealSpec, N: int, module: AdjointModule | None = None) -> list:
    """Spanning elements of the degree-``N`` part of the ideal, as ``u * b`` with ``b`` in the adjoint module."""
    module = module or AdjointModule(spec.generator)
    kind = spec.kind
    symmetric = spec.symmetric
    rows = []
    for d in range(module.base, N + 1):
        basis = module.piece(d)
        if not basis:
            continue
        for u in _degree_words(N - d, symmetric):
            ue = (CommPoly if symmetric else NCElement)({u: Fraction(1)}, kind, _trusted=True)
            for b in basis:
                rows.append(ue * b if symmetric else nc_multiply(ue, b))
    return rows


def _bucketed_rank(rows, restrict=None) -> int:
    """Rank of ``rows``; length-homogeneous rows are split into independent blocks."""
    buckets: dict = {}
    mixed = any(_length_bucket(r) is None for r in rows)
    for r in rows:
        key = None if mixed else _length_bucket(r)
        terms = r.terms if restrict is None else {m: c for m, c in r.terms.items() if restrict(m)}
        if terms:
            buckets.setdefault(key, RowEchelon()).add(terms)
    return sum(e.rank for e in buckets.values())


class QuotientGrowth:
    """Graded dimensions of ``S(W+)/{(g)}`` or ``U(W+)/(g)``."""

    def __init__(self, spec: IdealSpec):
        if spec.kind.variant is not Variant.WITT_POSITIVE:
            raise KindMismatch("graded dimensions need witt-positive")
        self.spec = spec
        self.module = AdjointModule(spec.generator)
        self.params = compute_params(spec)

    def dim(self, N: int) -> int:
        if N < 0:
            return 0
        rows = ideal_piece(self.spec, N, self.module)
        return partition_count(N) - _bucketed_rank(rows)

    def spans(self, N: int) -> bool:
        """Normal words of degree N together with the ideal span the whole degree-N space."""
        rows = ideal_piece(self.spec, N, self.module)
        kind = self.spec.kind
        non_normal = [m for m in _degree_words(N, self.spec.symmetric) if not is_normal_word(m, self.params, kind)]
        bad = set(non_normal)
        return _bucketed_rank(rows, restrict=bad.__contains__) == len(non_normal)

    def series(self, N_max: int, N_min: int = 0) -> DimensionSeries:
        values = [(N, self.dim(N)) for N in range(N_min, N_max + 1)]
        return DimensionSeries(values, "degree", f"{self.spec.side} quotient by {self.spec.generator}")


def graded_dim_quotient(spec: IdealSpec | None, N: int, kind: AlgebraKind | None = None,
                        symmetric: bool = True) -> int:
    """Dimension of the degree-``N`` component; ``spec=None`` means no ideal."""
    if spec is None:
        if kind is not None and kind.variant is not Variant.WITT_POSITIVE:
            raise KindMismatch("graded dimensions need witt-positive")
        return partition_count(N)
    return QuotientGrowth(spec).dim(N)


def free_series(N_max: int) -> DimensionSeries:
    return DimensionSeries([(N, partition_count(N)) for N in range(N_max + 1)], "degree", "free S(W+)")


def gk_slope(series: DimensionSeries, window=None) -> float:
    """Least-squares slope of log(cumulative dimension) against log N."""
    cum = series.cumulative()
    lo, hi = window if window is not None else (min(series.grades), max(series.grades))
    xs, ys = [], []
    for (N, _), total in zip(series.values, cum):
        if lo <= N <= hi and N > 0:
            if total <= 0:
                raise InsufficientData(f"cumulative dimension at N={N} is not positive")
            xs.append(math.log(N))
            ys.append(math.log(total))
    if len(xs) < 3:
        raise InsufficientData("need at least three grades in the window")
    slope, _ = np.polyfit(xs, ys, 1)
    return float(slope)


# --------------------------------------------------------------------------
# filtration constant over U(W) and central quotients


@dataclass
class FiltrationSample:
    m1: tuple
    m2: tuple
    max_output: int
    bound: int
    passed: bool
    terms: int = 0


@dataclass
class FiltrationReport:
    C: int
    samples: list = field(default_factory=list)

    @property
    def all_pass(self) -> bool:
        return all(s.passed for s in self.samples)

    @property
    def failures(self) -> list:
        return [s for s in self.samples if not s.passed]


def filtration_constant(g) -> int:
    k = g.max_length
    ell = max((abs(i) for i in g.letter_indices()), default=0)
    return 4 * k * k * ell


def random_normal_word(rng: random.Random, params: ReductionParams, max_abs: int, max_len: int = 20) -> tuple:
    """A random word of NS(k, n) with absolute degree at most ``max_abs``."""
    k, n = params.k, params.n
    budget = rng.randint(0, max_abs)
    letters = []
    for sign in (-1, 1):
        for _ in range(rng.randint(0, k - 1)):
            if budget < n:
                break
            v = rng.randint(n, budget)
            letters.append(sign * v)
            budget -= v
    while len(letters) < max_len and rng.random() < 0.8:
        choices = [i for i in range(1 - n, n) if abs(i) <= budget]
        i = rng.choice(choices)
        letters.append(i)
        budget -= abs(i)
    return tuple(sorted(letters))


def filtration_check(spec: IdealSpec, sample_count: int = 100, seed: int = 0, max_abs: int = 20,
                     pairs=None) -> FiltrationReport:
    """Check ``delta_0(w) <= delta_0(m1) + delta_0(m2) + C`` on normal forms of products of normal words."""
    if spec.symmetric or not spec.kind.full_line:
        raise KindMismatch("the filtration check runs on two-sided ideals of U(W) or U(V)/(c - kappa)")
    reducer = Reducer(spec)
    C = filtration_constant(spec.generator)
    report = FiltrationReport(C)
    kind = spec.kind
    if pairs is None:
        rng = random.Random(seed)
        pairs = [(random_normal_word(rng, reducer.params, max_abs), random_normal_word(rng, reducer.params, max_abs))
                 for _ in range(sample_count)]
    for m1, m2 in pairs:
        prod = nc_multiply(NCElement({NCWord(m1): 1}, kind), NCElement({NCWord(m2): 1}, kind))
        nf = reducer.normal_form(prod)
        worst = max((abs_degree(w) for w in nf.combination.terms), default=0)
        bound = abs_degree(NCWord(m1)) + abs_degree(NCWord(m2)) + C
        report.samples.append(FiltrationSample(m1, m2, worst, bound, worst <= bound, len(nf.combination)))
    return report


# --------------------------------------------------------------------------
# S^k criticality


def sk_criticality_probe(k: int, g: CommPoly, N_max: int, N_min: int = 1) -> DimensionSeries:
    """Graded dimensions of S^k(W+) modulo the W+-submodule generated by ``g``."""
    if not isinstance(g, CommPoly) or g.kind.variant is not Variant.WITT_POSITIVE:
        raise KindMismatch("sk-probe needs a symmetric-algebra element over witt-positive")
    if g.is_zero() or any(m.length != k for m in g.terms):
        raise NotHomogeneous(f"generator must be a nonzero element of S^{k}")
    module = AdjointModule(g)
    values = []
    for N in range(N_min, N_max + 1):
        full = sum(1 for _ in iter_partitions(N, parts=k))
        ech = RowEchelon()
        for b in module.piece(N):
            ech.add(b.terms)
        values.append((N, full - ech.rank))
    return DimensionSeries(values, "degree", f"S^{k}(W+) / <{g}>")
