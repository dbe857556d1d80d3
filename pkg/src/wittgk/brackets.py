"""Lie and Poisson brackets, PBW normalization, adjoint operators, gr and Phi."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache

from .algebra import (
    CENTRAL,
    AlgebraKind,
    CommMonomial,
    CommPoly,
    NCElement,
    NCWord,
    RawNC,
    Variant,
    check_index,
)
from .errors import KindMismatch, ZeroElement

PBW_CACHE_SIZE = 1 << 20


def bracket_structure(i: int, j: int, kind: AlgebraKind):
    """``[e_i, e_j] = coef * e_{i+j} + central * c`` as ``(coef, i + j, central)``.

    ``central`` is already multiplied by kappa in the quotient kind and is
    zero for kinds without a central extension.
    """
    coef = j - i
    s = check_index(i + j)
    central = Fraction(0)
    if s == 0 and kind.virasoro_like:
        central = Fraction(i**3 - i, 12)
        if kind.is_quotient:
            central *= kind.kappa
    return coef, s, central


def lie_bracket(i, j, kind: AlgebraKind) -> NCElement:
    kind.check(i)
    kind.check(j)
    if i == CENTRAL or j == CENTRAL:
        return NCElement({}, kind)
    coef, s, central = bracket_structure(i, j, kind)
    terms: dict = {}
    if coef:
        terms[NCWord((s,))] = Fraction(coef)
    if central:
        terms[NCWord((), 0 if kind.is_quotient else 1)] = central
    return NCElement(terms, kind, _trusted=True)


# --------------------------------------------------------------------------
# PBW straightening.  Words are tuples of letters; results are tuples of
# (letters, extra_cpow, coeff) with every letters-tuple standard.


def _add(acc: dict, key, c):
    v = acc.get(key, 0) + c
    if v:
        acc[key] = v
    else:
        acc.pop(key, None)


@lru_cache(maxsize=PBW_CACHE_SIZE)
def _append_letter(w: tuple, j: int, kind: AlgebraKind) -> tuple:
    """Standard word ``w`` times ``e_j`` on the right."""
    if not w or w[-1] <= j:
        return ((w + (j,), 0, 1),)
    i = w[-1]
    head = w[:-1]
    acc: dict = {}
    # w e_j = head e_j e_i + head [e_i, e_j]
    for letters, dc, c in _append_letter(head, j, kind):
        for l2, dc2, c2 in _append_letter(letters, i, kind):
            _add(acc, (l2, dc + dc2), c * c2)
    coef, s, central = bracket_structure(i, j, kind)
    if coef:
        for l2, dc2, c2 in _append_letter(head, s, kind):
            _add(acc, (l2, dc2), coef * c2)
    if central:
        _add(acc, (head, 0 if kind.is_quotient else 1), central)
    return tuple((letters, dc, c) for (letters, dc), c in acc.items())


@lru_cache(maxsize=PBW_CACHE_SIZE)
def _mul_words(a: tuple, b: tuple, kind: AlgebraKind) -> tuple:
    """Product of standard words ``a`` and ``b`` in PBW coordinates."""
    if not b:
        return ((a, 0, 1),)
    if not a or a[-1] <= b[0]:
        return ((a + b, 0, 1),)
    acc: dict = {}
    last = b[-1]
    for letters, dc, c in _mul_words(a, b[:-1], kind):
        for l2, dc2, c2 in _append_letter(letters, last, kind):
            _add(acc, (l2, dc + dc2), c * c2)
    return tuple((letters, dc, c) for (letters, dc), c in acc.items())


def clear_caches():
    _append_letter.cache_clear()
    _mul_words.cache_clear()


def _raw_word_insert(letters: tuple, kind: AlgebraKind) -> dict:
    acc: dict = {((), 0): 1}
    for j in letters:
        nxt: dict = {}
        for (w, dc), c in acc.items():
            for l2, dc2, c2 in _append_letter(w, j, kind):
                _add(nxt, (l2, dc + dc2), c * c2)
        acc = nxt
    return acc


def _raw_word_swaps(letters: tuple, kind: AlgebraKind, leftmost: bool) -> dict:
    """Adjacent-swap rewriting with an explicit descent schedule."""
    done: dict = {}
    todo: dict = {(letters, 0): 1}
    while todo:
        (w, cp), c = todo.popitem()
        rng = range(len(w) - 1) if leftmost else range(len(w) - 2, -1, -1)
        p = next((t for t in rng if w[t] > w[t + 1]), None)
        if p is None:
            _add(done, (w, cp), c)
            continue
        i, j = w[p], w[p + 1]
        _add(todo, (w[:p] + (j, i) + w[p + 2:], cp), c)
        coef, s, central = bracket_structure(i, j, kind)
        if coef:
            _add(todo, (w[:p] + (s,) + w[p + 2:], cp), c * coef)
        if central:
            _add(todo, (w[:p] + w[p + 2:], cp + (0 if kind.is_quotient else 1)), c * central)
    return done


def normalize_pbw(raw: RawNC, schedule: str = "insert") -> NCElement:
    """Rewrite arbitrary words into standard words.

    ``schedule`` is ``"insert"`` (memoized append-and-bubble, the default),
    ``"leftmost"`` or ``"rightmost"`` (plain adjacent swaps at the leftmost or
    rightmost descent).  All schedules give the same element.
    """
    kind = raw.kind
    acc: dict = {}
    for (letters, cpow), c in raw.terms.items():
        for i in letters:
            kind.check(i)
        if schedule == "insert":
            part = _raw_word_insert(letters, kind)
        elif schedule in ("leftmost", "rightmost"):
            part = _raw_word_swaps(letters, kind, schedule == "leftmost")
        else:
            raise ValueError(f"unknown schedule {schedule!r}")
        for (w, dc), c2 in part.items():
            _add(acc, NCWord(w, cpow + dc), c * c2)
    return NCElement({m: Fraction(c) for m, c in acc.items()}, kind, _trusted=True)


def nc_multiply(u: NCElement, v: NCElement) -> NCElement:
    u._check_kind(v)
    kind = u.kind
    acc: dict = {}
    for w1, c1 in u.terms.items():
        for w2, c2 in v.terms.items():
            cp = w1.cpow + w2.cpow
            for letters, dc, c in _mul_words(w1.letters, w2.letters, kind):
                _add(acc, NCWord(letters, cp + dc), c1 * c2 * c)
    return NCElement({m: Fraction(c) for m, c in acc.items()}, kind, _trusted=True)


def multiply_words(a: NCWord, b: NCWord, kind: AlgebraKind) -> NCElement:
    return nc_multiply(NCElement({a: 1}, kind, _trusted=True), NCElement({b: 1}, kind, _trusted=True))


# --------------------------------------------------------------------------
# Poisson side


def _poisson_generators(i: int, j: int, kind: AlgebraKind) -> list:
    """``{x_i, x_j}`` as a list of (CommMonomial, coeff)."""
    coef, s, central = bracket_structure(i, j, kind)
    out = []
    if coef:
        out.append((CommMonomial(((s, 1),)), coef))
    if central:
        out.append((CommMonomial((), 0 if kind.is_quotient else 1), central))
    return out


def _partials(m: CommMonomial):
    """Yield (index, multiplicity, m / x_index)."""
    entries = m.entries
    for t, (i, e) in enumerate(entries):
        if e == 1:
            rest = entries[:t] + entries[t + 1:]
        else:
            rest = entries[:t] + ((i, e - 1),) + entries[t + 1:]
        yield i, e, CommMonomial(rest, m.cpow)


def poisson_bracket(p: CommPoly, q: CommPoly) -> CommPoly:
    p._check_kind(q)
    kind = p.kind
    acc: dict = {}
    for m1, c1 in p.terms.items():
        d1 = list(_partials(m1))
        for m2, c2 in q.terms.items():
            for i, e1, r1 in d1:
                for j, e2, r2 in _partials(m2):
                    base = r1.times(r2)
                    for g, cg in _poisson_generators(i, j, kind):
                        _add(acc, base.times(g), c1 * c2 * e1 * e2 * cg)
    return CommPoly(acc, kind)


@lru_cache(maxsize=PBW_CACHE_SIZE)
def _d_monomial(m: CommMonomial, a: int, kind: AlgebraKind) -> tuple:
    acc: dict = {}
    for i, e, rest in _partials(m):
        for g, cg in _poisson_generators(i, a, kind):
            _add(acc, rest.times(g), e * cg)
    return tuple(acc.items())


def d_a(p: CommPoly, a: int) -> CommPoly:
    """The derivation ``{-, x_a}``."""
    kind = p.kind
    kind.check(a)
    acc: dict = {}
    for m, c in p.terms.items():
        for m2, c2 in _d_monomial(m, a, kind):
            _add(acc, m2, c * c2)
    return CommPoly(acc, kind)


def del_a(u: NCElement, a: int) -> NCElement:
    """The adjoint operator ``[-, e_a]``."""
    kind = u.kind
    kind.check(a)
    acc: dict = {}
    for w, c in u.terms.items():
        for letters, dc, c2 in _append_letter(w.letters, a, kind):
            _add(acc, NCWord(letters, w.cpow + dc), c * c2)
        for letters, dc, c2 in _mul_words((a,), w.letters, kind):
            _add(acc, NCWord(letters, w.cpow + dc), -c * c2)
    return NCElement({m: Fraction(c) for m, c in acc.items()}, kind, _trusted=True)


def apply_chain(g, chain) -> "CommPoly | NCElement":
    """Apply ``D = op_{a_1} ... op_{a_k}`` to ``g``; ``a_k`` acts first."""
    op = d_a if isinstance(g, CommPoly) else del_a
    h = g
    for a in reversed(tuple(chain)):
        h = op(h, a)
    return h


# --------------------------------------------------------------------------
# gr and Phi


def gr(u: NCElement) -> CommPoly:
    if not u.terms:
        raise ZeroElement("gr of zero")
    k = u.max_length
    terms = {CommMonomial.from_indices(w.letters, w.cpow): c for w, c in u.terms.items() if w.length == k}
    return CommPoly(terms, u.kind)


def lift(p: CommPoly) -> NCElement:
    """Symmetric-algebra monomials read as standard words (a linear section of gr)."""
    return NCElement({NCWord(m.indices(), m.cpow): c for m, c in p.terms.items()}, p.kind)


def _check_phi(kind: AlgebraKind):
    if kind.variant in (Variant.WITT, Variant.VIRASORO):
        return
    if kind.is_quotient and kind.kappa == 0:
        return
    raise KindMismatch(f"Phi is not an automorphism of {kind}")


def phi(u):
    """The automorphism ``e_i -> -e_{-i}`` (with ``c -> -c``)."""
    kind = u.kind
    _check_phi(kind)
    if isinstance(u, CommPoly):
        terms = {}
        for m, c in u.terms.items():
            sign = -1 if (m.length + m.cpow) % 2 else 1
            terms[CommMonomial.from_indices([-i for i in m.indices()], m.cpow)] = sign * c
        return CommPoly(terms, kind)
    raw = {}
    for w, c in u.terms.items():
        sign = -1 if (w.length + w.cpow) % 2 else 1
        raw[(tuple(-i for i in w.letters), w.cpow)] = sign * c
    return normalize_pbw(RawNC(raw, kind))
