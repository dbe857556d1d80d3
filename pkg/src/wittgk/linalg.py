"""Exact rank over the rationals by fraction-free sparse elimination."""
from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm


def _integral(row: dict) -> dict:
    """Scale a rational row to a primitive integer row."""
    den = 1
    for v in row.values():
        if isinstance(v, Fraction):
            den = lcm(den, v.denominator)
    out = {c: int(v * den) for c, v in row.items() if v}
    g = 0
    for v in out.values():
        g = gcd(g, v)
        if g == 1:
            break
    if g > 1:
        out = {c: v // g for c, v in out.items()}
    return out


class RowEchelon:
    """Incremental echelon form; each stored row's pivot is its smallest column key."""

    def __init__(self, order=None):
        self.pivots: dict = {}
        self.order = order or {}

    def _key(self, col):
        return self.order.get(col, col) if self.order else col

    def reduce(self, row: dict) -> dict:
        row = _integral(row)
        key = self._key
        while row:
            col = min(row, key=key)
            piv = self.pivots.get(col)
            if piv is None:
                return row
            a, b = piv[col], row[col]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = {c: v * fa for c, v in row.items()}
            for c, v in piv.items():
                w = new.get(c, 0) - fb * v
                if w:
                    new[c] = w
                else:
                    new.pop(c, None)
            row = _integral(new) if new else new
        return row

    def add(self, row: dict) -> bool:
        """Insert ``row``; True when it was independent of the rows so far."""
        r = self.reduce(row)
        if not r:
            return False
        self.pivots[min(r, key=self._key)] = r
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)


def exact_rank(rows, order=None, limit: int | None = None) -> int:
    """Rank of rows given as ``{column: rational}`` dicts; stops early at ``limit``."""
    ech = RowEchelon(order)
    for row in rows:
        ech.add(row)
        if limit is not None and ech.rank >= limit:
            break
    return ech.rank
