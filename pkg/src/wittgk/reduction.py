"""Reduction formulas, normal words and certified normal forms.

A two-sided (or Poisson) ideal is given by one generator ``g``.  For a block
``m`` of ``k = |g|`` big letters, an adjoint chain ``D`` is chosen so that
``D(g)`` contains ``m`` with a nonzero integer coefficient and every other
term is smaller; subtracting the right multiple of ``u D(g) v`` removes
``m`` from the word ``u m v``.  Each subtraction is logged as a
:class:`CertificateStep` so the final congruence can be re-expanded and
checked independently of the rewriting code.
"""
from __future__ import annotations

import heapq
import logging
from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import (
    AlgebraKind,
    CommMonomial,
    CommPoly,
    NCElement,
    NCWord,
    RawNC,
    Variant,
    element_from_json,
    element_to_json,
)
from .brackets import apply_chain, normalize_pbw
from .errors import (
    InvariantViolation,
    IterationBudgetExceeded,
    KindMismatch,
    NotHomogeneous,
    NotReducible,
    PreconditionViolated,
    ZeroGenerator,
)
from .orders import OrderKind, order_key

log = logging.getLogger(__name__)

POISSON = "poisson"
TWO_SIDED = "two-sided"
DEFAULT_MAX_STEPS = 10**6


@dataclass(frozen=True)
class IdealSpec:
    generator: CommPoly | NCElement
    side: str = TWO_SIDED

    def __post_init__(self):
        g = self.generator
        if isinstance(g, RawNC):
            object.__setattr__(self, "generator", g := normalize_pbw(g))
        if self.side not in (POISSON, TWO_SIDED):
            raise ValueError(f"side must be {POISSON!r} or {TWO_SIDED!r}")
        want = CommPoly if self.side == POISSON else NCElement
        if not isinstance(g, want):
            raise KindMismatch(f"{self.side} ideals need a {want.__name__} generator")
        if g.is_zero():
            raise ZeroGenerator("ideal generator is zero")
        if g.kind.variant is Variant.VIRASORO:
            raise KindMismatch("reduction works modulo c - kappa; use the virasoro-quotient kind")
        if g.kind.variant is Variant.WITT_POSITIVE:
            degrees = {m.degree for m in g.terms}
            if len(degrees) > 1:
                raise NotHomogeneous(f"generator has degrees {sorted(degrees)}")

    @property
    def kind(self) -> AlgebraKind:
        return self.generator.kind

    @property
    def symmetric(self) -> bool:
        return self.side == POISSON


@dataclass(frozen=True)
class ReductionParams:
    k: int
    n: int
    ell_low: int
    ell_high: int


def _letters(m) -> tuple:
    return m.letters if isinstance(m, NCWord) else m.indices()


def compute_params(spec: IdealSpec) -> ReductionParams:
    g = spec.generator
    k = g.max_length
    if k == 0:
        raise PreconditionViolated("generator has no letters; the ideal is trivial")
    letters = g.letter_indices()
    if spec.kind.variant is Variant.WITT_POSITIVE:
        lead = max(g.terms, key=lambda m: order_key(m, OrderKind.DEC_LEX))
        n = 2 * max(_letters(lead)) + 1
    else:
        n = 2 * max(abs(i) for i in letters) + 1
    return ReductionParams(k=k, n=n, ell_low=min(letters), ell_high=max(letters))


def is_normal_word(m, params: ReductionParams, kind: AlgebraKind) -> bool:
    letters = _letters(m)
    high = sum(1 for i in letters if i >= params.n)
    if high >= params.k:
        return False
    if kind.full_line:
        low = sum(1 for i in letters if i <= -params.n)
        return low < params.k
    return True


@dataclass(frozen=True)
class CertificateStep:
    """``coeff * left * block * right`` was replaced using ``left * D(g) * right``.

    ``scalar`` is the coefficient of ``block`` in ``D(g)``; the element
    subtracted from the running form is ``coeff / scalar * left * D(g) * right``.
    """

    monomial: tuple
    chain: tuple
    scalar: Fraction
    coeff: Fraction
    left: tuple = ()
    right: tuple = ()

    @property
    def multiplier(self) -> Fraction:
        return self.coeff / self.scalar


@dataclass
class NormalForm:
    combination: CommPoly | NCElement
    certificate: list = field(default_factory=list)


def _word(letters, symmetric: bool):
    return CommMonomial.from_indices(letters) if symmetric else NCWord(tuple(letters))


def _element(letters, kind, symmetric, coeff=1):
    cls = CommPoly if symmetric else NCElement
    return cls({_word(letters, symmetric): Fraction(coeff)}, kind, _trusted=True)


def expand_step(g, step: CertificateStep, symmetric: bool, d_of_g=None):
    """``left * D(g) * right`` for one step, computed from the bracket primitives."""
    dg = apply_chain(g, step.chain) if d_of_g is None else d_of_g
    kind = g.kind
    out = dg
    if step.left:
        out = _element(step.left, kind, symmetric) * out
    if step.right:
        out = out * _element(step.right, kind, symmetric)
    return out


class Reducer:
    """A reduction session for one ideal; caches ``D(g)`` per chain."""

    def __init__(self, spec: IdealSpec, params: ReductionParams | None = None, max_steps: int | None = None):
        self.spec = spec
        self.g = spec.generator
        self.kind = spec.kind
        self.symmetric = spec.symmetric
        self.params = params or compute_params(spec)
        self.max_steps = DEFAULT_MAX_STEPS if max_steps is None else max_steps
        k = self.params.k
        top = [m for m in self.g.terms if m.length == k]
        lead = max(top, key=lambda m: order_key(m, OrderKind.DEC_LEX))
        self.lead_letters = tuple(sorted(_letters(lead)))
        self.lead_coeff = self.g.terms[lead]
        # The low side mirrors the high side through e_i -> -e_{-i}; only the
        # top-length terms matter for picking the chain.
        mirrored = [(CommMonomial.from_indices([-i for i in _letters(m)]), m) for m in top]
        mlead, orig = max(mirrored, key=lambda t: order_key(t[0], OrderKind.DEC_LEX))
        self.mirror_letters = mlead.indices()
        self.mirror_coeff = self.g.terms[orig] * (-1) ** k
        self._dg_cache: dict = {}

    # -- chains ---------------------------------------------------------------

    def high_chain(self, block) -> tuple:
        lead = self.lead_letters
        k = len(lead)
        return tuple(block[t] - lead[k - 1 - t] for t in range(k))

    def low_chain(self, block) -> tuple:
        mirrored = sorted(-j for j in block)
        lead = self.mirror_letters
        k = len(lead)
        return tuple(-(mirrored[t] - lead[k - 1 - t]) for t in range(k))

    def d_of_g(self, chain: tuple):
        dg = self._dg_cache.get(chain)
        if dg is None:
            dg = apply_chain(self.g, chain)
            self._dg_cache[chain] = dg
        return dg

    def _check_block(self, m, low: bool) -> tuple:
        letters = tuple(sorted(_letters(m)))
        if getattr(m, "cpow", 0):
            raise PreconditionViolated("target monomial must not involve c")
        p = self.params
        if len(letters) != p.k:
            raise PreconditionViolated(f"target has length {len(letters)}, need exactly k={p.k}")
        if low:
            if not self.kind.full_line:
                raise PreconditionViolated(f"{self.kind} has no low side")
            if any(i > -p.n for i in letters):
                raise PreconditionViolated(f"every letter must be <= {-p.n}")
        elif any(i < p.n for i in letters):
            raise PreconditionViolated(f"every letter must be >= {p.n}")
        for i in letters:
            self.kind.check(i)
        return letters

    def chain_for(self, block: tuple, low: bool):
        """Chain, D(g), and the raw coefficient of ``block`` in D(g)."""
        chain = self.low_chain(block) if low else self.high_chain(block)
        dg = self.d_of_g(chain)
        scalar = dg.coeff(_word(block, self.symmetric))
        normalized = scalar / (self.mirror_coeff if low else self.lead_coeff)
        if normalized <= 0 or normalized.denominator != 1:
            raise InvariantViolation(
                f"chain {chain} gives coefficient {scalar} on {block}; expected a positive integer multiple"
            )
        return chain, dg, scalar, normalized

    def derivation_chain(self, m, low: bool = False):
        block = self._check_block(m, low)
        chain, dg, scalar, normalized = self.chain_for(block, low)
        return dg.scale(normalized / scalar), normalized

    # -- rewriting -------------------------------------------------------------

    def find_block(self, letters: tuple):
        """(low?, left, block, right) for the block to reduce, or None if normal."""
        p = self.params
        k = p.k
        letters = tuple(sorted(letters))
        if len(letters) >= k and letters[-k] >= p.n:
            return False, letters[:-k], letters[-k:], ()
        if self.kind.full_line and len(letters) >= k and letters[k - 1] <= -p.n:
            return True, (), letters[:k], letters[k:]
        return None

    def is_normal(self, m) -> bool:
        return is_normal_word(m, self.params, self.kind)

    def reduce_word(self, m, coeff=Fraction(1)):
        """Rewrite ``coeff * m`` once; returns (element congruent to it, step)."""
        found = self.find_block(_letters(m))
        if found is None:
            raise NotReducible(f"{_letters(m)} has no block of {self.params.k} big letters")
        low, left, block, right = found
        chain, dg, scalar, _ = self.chain_for(block, low)
        step = CertificateStep(block, chain, scalar, Fraction(coeff), left, right)
        sub = expand_step(self.g, step, self.symmetric, dg).scale(step.multiplier)
        if sub.coeff(m) != coeff:
            raise InvariantViolation(f"step on {m} does not cancel the word")
        here = (CommPoly if self.symmetric else NCElement)({m: Fraction(coeff)}, self.kind, _trusted=True)
        return here - sub, step

    def normal_form(self, element) -> NormalForm:
        if isinstance(element, RawNC):
            element = normalize_pbw(element)
        want = CommPoly if self.symmetric else NCElement
        if not isinstance(element, want) or element.kind != self.kind:
            raise KindMismatch(f"element must be a {want.__name__} over {self.kind}")
        current = dict(element.terms)
        heap: list = []
        queued: set = set()

        def push(m):
            if m not in queued and not self.is_normal(m):
                queued.add(m)
                heapq.heappush(heap, _MaxItem(order_key(m), m))

        for m in current:
            push(m)
        steps: list = []
        while heap:
            m = heapq.heappop(heap).item
            queued.discard(m)
            lam = current.get(m)
            if not lam:
                continue
            if len(steps) >= self.max_steps:
                raise IterationBudgetExceeded(f"normal form needs more than {self.max_steps} steps")
            found = self.find_block(_letters(m))
            low, left, block, right = found
            chain, dg, scalar, _ = self.chain_for(block, low)
            step = CertificateStep(block, chain, scalar, lam, left, right)
            sub = expand_step(self.g, step, self.symmetric, dg)
            mult = step.multiplier
            for w, c in sub.terms.items():
                v = current.get(w, 0) - mult * c
                if v:
                    current[w] = v
                    push(w)
                else:
                    current.pop(w, None)
            if m in current:
                raise InvariantViolation(f"step on {m} does not cancel the word")
            steps.append(step)
        combo = want(current, self.kind, _trusted=True)
        return NormalForm(combo, steps)


class _MaxItem:
    __slots__ = ("key", "item")

    def __init__(self, key, item):
        self.key = key
        self.item = item

    def __lt__(self, other):
        return self.key > other.key


# --------------------------------------------------------------------------
# functional API


def derivation_chain_high(m, spec: IdealSpec, params: ReductionParams | None = None):
    """``(h, c)``: ``h`` lies in the ideal and contains ``m`` with positive integer coefficient ``c``."""
    return Reducer(spec, params).derivation_chain(m, low=False)


def derivation_chain_low(m, spec: IdealSpec, params: ReductionParams | None = None):
    return Reducer(spec, params).derivation_chain(m, low=True)


def reduce_once(m, spec: IdealSpec, params: ReductionParams | None = None):
    return Reducer(spec, params).reduce_word(m)


def normal_form(element, spec: IdealSpec, max_steps: int | None = None) -> NormalForm:
    return Reducer(spec, max_steps=max_steps).normal_form(element)


def verify_certificate(element, nf: NormalForm, spec: IdealSpec) -> bool:
    """Re-expand every step and check ``element - combination`` equals their sum."""
    try:
        if isinstance(element, RawNC):
            element = normalize_pbw(element)
        residue = dict((element - nf.combination).terms)
        cache: dict = {}
        for step in nf.certificate:
            chain = tuple(step.chain)
            if chain not in cache:
                cache[chain] = apply_chain(spec.generator, chain)
            mult = step.multiplier
            for w, c in expand_step(spec.generator, step, spec.symmetric, cache[chain]).terms.items():
                v = residue.get(w, 0) - mult * c
                if v:
                    residue[w] = v
                else:
                    residue.pop(w, None)
        return not residue
    except (ArithmeticError, ValueError, TypeError, KindMismatch) as exc:
        log.debug("certificate rejected: %s", exc)
        return False


# --------------------------------------------------------------------------
# JSON


def _q(x) -> dict:
    x = Fraction(x)
    return {"num": str(x.numerator), "den": str(x.denominator)}


def _unq(d) -> Fraction:
    return Fraction(int(d["num"]), int(d["den"]))


def step_to_json(step: CertificateStep) -> dict:
    return {
        "monomial": list(step.monomial),
        "chain": list(step.chain),
        "scalar": _q(step.scalar),
        "coeff": _q(step.coeff),
        "left": list(step.left),
        "right": list(step.right),
    }


def step_from_json(d: dict) -> CertificateStep:
    return CertificateStep(
        tuple(d["monomial"]), tuple(d["chain"]), _unq(d["scalar"]), _unq(d["coeff"]),
        tuple(d.get("left", ())), tuple(d.get("right", ())),
    )


def normal_form_to_json(nf: NormalForm) -> dict:
    return {
        "combination": element_to_json(nf.combination),
        "certificate": [step_to_json(s) for s in nf.certificate],
    }


def normal_form_from_json(d: dict) -> NormalForm:
    return NormalForm(element_from_json(d["combination"]), [step_from_json(s) for s in d["certificate"]])
