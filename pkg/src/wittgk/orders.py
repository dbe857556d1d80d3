"""Length, degree, absolute degree and the two monomial orders.

Both orders compare length first, then degree.  Ties are broken

* ``INC_LEX`` (the order ``<``): smallest letters compared first;
* ``DEC_LEX`` (the order ``≺``): biggest letters compared first;

and finally by the power of ``c``, which the reductions never touch.
"""
from __future__ import annotations

import enum

from .algebra import CommMonomial, NCWord
from .errors import ZeroElement


class OrderKind(enum.Enum):
    INC_LEX = "inc"
    DEC_LEX = "dec"


def length(m) -> int:
    return m.length


def degree(m) -> int:
    return m.degree


def abs_degree(m, C: int = 0) -> int:
    letters = m.letters if isinstance(m, NCWord) else m.indices()
    return sum(abs(i) for i in letters) + C


def _lex_key(m, order: OrderKind) -> tuple:
    if isinstance(m, CommMonomial):
        # Compressed form: a larger exponent at the first differing index means
        # the smaller letter repeats, so it sorts lower under INC_LEX.
        if order is OrderKind.INC_LEX:
            return tuple((i, -e) for i, e in m.entries)
        return tuple(reversed(m.entries))
    if order is OrderKind.INC_LEX:
        return m.letters
    return m.letters[::-1]


def order_key(m, order: OrderKind = OrderKind.INC_LEX) -> tuple:
    """Sort key realising ``order`` on monomials of one type."""
    return (m.length, m.degree, _lex_key(m, order), m.cpow)


def compare(m1, m2, order: OrderKind = OrderKind.INC_LEX) -> int:
    """-1, 0 or 1 as ``m1`` is less than, equal to or greater than ``m2``."""
    k1, k2 = order_key(m1, order), order_key(m2, order)
    return (k1 > k2) - (k1 < k2)


def leading_monomial(p, order: OrderKind = OrderKind.INC_LEX):
    if not p.terms:
        raise ZeroElement("zero element has no leading monomial")
    m = max(p.terms, key=lambda t: order_key(t, order))
    return m, p.terms[m]


def top_length_part(p) -> dict:
    k = p.max_length
    return {m: c for m, c in p.terms.items() if m.length == k}
