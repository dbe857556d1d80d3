"""Algebra kinds, exact element types, and the text/JSON element formats.

Two element families are provided:

* :class:`CommPoly` -- sparse polynomials in ``x_i`` (and ``c``), i.e. elements
  of the symmetric algebra with its Poisson structure.
* :class:`NCElement` -- linear combinations of *standard* words
  ``e_{i1} ... e_{ik}`` with ``i1 <= ... <= ik``, i.e. PBW coordinates of an
  element of the enveloping algebra.

Arbitrary (non-standard) words only exist transiently inside :class:`RawNC`,
which is what the parser produces for enveloping-algebra text; see
:func:`wittgk.brackets.normalize_pbw`.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, NamedTuple

from .errors import IndexOutOfRange, IndexOverflow, KindMismatch, ParseError

INT64_MIN = -(2**63)
INT64_MAX = 2**63 - 1

CENTRAL = "c"


def check_index(i: int) -> int:
    if not INT64_MIN <= i <= INT64_MAX:
        raise IndexOverflow(f"generator index {i} overflows 64 bits")
    return i


class Variant(enum.Enum):
    WITT_POSITIVE = "witt-positive"
    WITT = "witt"
    CARTAN1 = "cartan1"
    VIRASORO = "virasoro"
    VIRASORO_QUOTIENT = "virasoro-quotient"


@dataclass(frozen=True)
class AlgebraKind:
    variant: Variant
    kappa: Fraction | None = None

    def __post_init__(self):
        if self.variant is Variant.VIRASORO_QUOTIENT:
            if self.kappa is None:
                raise ValueError("virasoro-quotient needs kappa")
            object.__setattr__(self, "kappa", Fraction(self.kappa))
        elif self.kappa is not None:
            raise ValueError(f"{self.variant.value} takes no kappa")

    @classmethod
    def parse(cls, name: str, kappa=None) -> "AlgebraKind":
        try:
            variant = Variant(name.strip().lower().replace("_", "-"))
        except ValueError:
            known = ", ".join(v.value for v in Variant)
            raise ValueError(f"unknown algebra {name!r} (known: {known})") from None
        if variant is Variant.VIRASORO_QUOTIENT:
            return cls(variant, Fraction(kappa if kappa is not None else 0))
        return cls(variant)

    @property
    def name(self) -> str:
        return self.variant.value

    @property
    def min_index(self) -> int | None:
        if self.variant is Variant.WITT_POSITIVE:
            return 1
        if self.variant is Variant.CARTAN1:
            return -1
        return None

    @property
    def has_central(self) -> bool:
        """True when ``c`` is carried symbolically."""
        return self.variant is Variant.VIRASORO

    @property
    def is_quotient(self) -> bool:
        return self.variant is Variant.VIRASORO_QUOTIENT

    @property
    def virasoro_like(self) -> bool:
        return self.variant in (Variant.VIRASORO, Variant.VIRASORO_QUOTIENT)

    @property
    def full_line(self) -> bool:
        """Kinds admitting every integer index."""
        return self.min_index is None

    def admits(self, i: int) -> bool:
        lo = self.min_index
        return lo is None or i >= lo

    def check(self, i) -> int:
        if i == CENTRAL:
            if not self.virasoro_like:
                raise IndexOutOfRange(f"central symbol c is not available in {self.name}")
            return i
        if not isinstance(i, int) or isinstance(i, bool):
            raise IndexOutOfRange(f"generator index must be an integer, got {i!r}")
        check_index(i)
        if not self.admits(i):
            raise IndexOutOfRange(f"index {i} is not valid for {self.name} (need i >= {self.min_index})")
        return i

    def __str__(self):
        if self.is_quotient:
            return f"{self.name}(kappa={self.kappa})"
        return self.name


WITT_POSITIVE = AlgebraKind(Variant.WITT_POSITIVE)
WITT = AlgebraKind(Variant.WITT)
CARTAN1 = AlgebraKind(Variant.CARTAN1)
VIRASORO = AlgebraKind(Variant.VIRASORO)


def virasoro_quotient(kappa) -> AlgebraKind:
    return AlgebraKind(Variant.VIRASORO_QUOTIENT, Fraction(kappa))


# --------------------------------------------------------------------------
# monomials


class CommMonomial(NamedTuple):
    """``entries`` holds (index, exponent) pairs with strictly increasing index."""

    entries: tuple = ()
    cpow: int = 0

    @classmethod
    def from_indices(cls, indices: Iterable[int], cpow: int = 0) -> "CommMonomial":
        counts: dict[int, int] = {}
        for i in indices:
            counts[i] = counts.get(i, 0) + 1
        return cls(tuple(sorted(counts.items())), cpow)

    def indices(self) -> tuple:
        return tuple(i for i, e in self.entries for _ in range(e))

    @property
    def length(self) -> int:
        return sum(e for _, e in self.entries)

    @property
    def degree(self) -> int:
        return sum(i * e for i, e in self.entries)

    def times(self, other: "CommMonomial") -> "CommMonomial":
        if not other.entries:
            return CommMonomial(self.entries, self.cpow + other.cpow)
        if not self.entries:
            return CommMonomial(other.entries, self.cpow + other.cpow)
        counts = dict(self.entries)
        for i, e in other.entries:
            counts[i] = counts.get(i, 0) + e
        return CommMonomial(tuple(sorted(counts.items())), self.cpow + other.cpow)


class NCWord(NamedTuple):
    letters: tuple = ()
    cpow: int = 0

    @property
    def length(self) -> int:
        return len(self.letters)

    @property
    def degree(self) -> int:
        return sum(self.letters)

    def is_standard(self) -> bool:
        w = self.letters
        return all(w[t] <= w[t + 1] for t in range(len(w) - 1))


# --------------------------------------------------------------------------
# elements


def _clean(terms: dict) -> dict:
    return {m: Fraction(c) for m, c in terms.items() if c != 0}


class _Combination:
    __slots__ = ("terms", "kind")

    def __init__(self, terms: dict | None = None, kind: AlgebraKind = WITT, *, _trusted=False):
        self.kind = kind
        self.terms = terms if _trusted else _clean(terms or {})

    def _new(self, terms):
        return type(self)(terms, self.kind, _trusted=True)

    def _check_kind(self, other):
        if type(other) is not type(self):
            raise KindMismatch(f"cannot combine {type(self).__name__} with {type(other).__name__}")
        if other.kind != self.kind:
            raise KindMismatch(f"kind mismatch: {self.kind} vs {other.kind}")

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        return self.kind == other.kind and self.terms == other.terms

    def __hash__(self):
        return hash((self.kind, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __iter__(self):
        return iter(self.terms.items())

    def is_zero(self) -> bool:
        return not self.terms

    def coeff(self, m) -> Fraction:
        return self.terms.get(m, Fraction(0))

    def __add__(self, other):
        self._check_kind(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = out.get(m, 0) + c
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        return self._new(out)

    def __neg__(self):
        return self._new({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s) -> "_Combination":
        s = Fraction(s)
        if not s:
            return self._new({})
        return self._new({m: c * s for m, c in self.terms.items()})

    def __rmul__(self, s):
        if isinstance(s, (int, Fraction)):
            return self.scale(s)
        return NotImplemented

    def __repr__(self):
        return f"{type(self).__name__}({print_element(self)!r}, {self.kind})"

    def __str__(self):
        return print_element(self)

    @property
    def max_length(self) -> int:
        return max((m.length for m in self.terms), default=0)

    def letter_indices(self) -> set:
        out = set()
        for m in self.terms:
            out.update(_letters(m))
        return out


def _letters(m) -> tuple:
    return m.letters if isinstance(m, NCWord) else m.indices()


class CommPoly(_Combination):
    """Element of the symmetric algebra S(W) (or S(V), S(V)/(c - kappa))."""

    __slots__ = ()

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check_kind(other)
        out: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = m1.times(m2)
                v = out.get(m, 0) + c1 * c2
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        return self._new(out)

    @classmethod
    def constant(cls, value, kind: AlgebraKind) -> "CommPoly":
        return cls({CommMonomial(): value}, kind)

    @classmethod
    def monomial(cls, m: CommMonomial, kind: AlgebraKind, coeff=1) -> "CommPoly":
        for i in m.indices():
            kind.check(i)
        if m.cpow and not kind.has_central:
            if kind.is_quotient:
                return cls({CommMonomial(m.entries): Fraction(coeff) * kind.kappa**m.cpow}, kind)
            raise IndexOutOfRange(f"central symbol c is not available in {kind.name}")
        return cls({m: coeff}, kind)


class NCElement(_Combination):
    """Element of the enveloping algebra in PBW coordinates (standard words only)."""

    __slots__ = ()

    def __init__(self, terms=None, kind=WITT, *, _trusted=False):
        super().__init__(terms, kind, _trusted=_trusted)
        if not _trusted:
            for w in self.terms:
                if not w.is_standard():
                    raise ValueError(f"word {w.letters} is not standard; use normalize_pbw")

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        from .brackets import nc_multiply

        return nc_multiply(self, other)

    @classmethod
    def constant(cls, value, kind: AlgebraKind) -> "NCElement":
        return cls({NCWord(): value}, kind)

    @classmethod
    def word(cls, letters, kind: AlgebraKind, coeff=1, cpow: int = 0) -> "NCElement":
        """A single word; non-standard input is normalized."""
        letters = tuple(letters)
        for i in letters:
            kind.check(i)
        raw = RawNC({(letters, cpow): coeff}, kind)
        from .brackets import normalize_pbw

        return normalize_pbw(raw)


class RawNC:
    """Combination of arbitrary words, the transient input to PBW normalization."""

    __slots__ = ("terms", "kind")

    def __init__(self, terms: dict, kind: AlgebraKind):
        self.kind = kind
        out: dict = {}
        for (letters, cpow), c in terms.items():
            key = (tuple(letters), cpow)
            out[key] = out.get(key, 0) + Fraction(c)
        self.terms = {k: v for k, v in out.items() if v}

    def __iter__(self):
        return iter(self.terms.items())

    def __repr__(self):
        return f"RawNC({print_element(self)!r}, {self.kind})"


# --------------------------------------------------------------------------
# generators


def make_generator(kind: AlgebraKind, i, symmetric: bool = False):
    """``e_i`` (or ``x_i`` when ``symmetric``), or the central element ``c``."""
    kind.check(i)
    if i == CENTRAL:
        if kind.is_quotient:
            m = CommMonomial() if symmetric else NCWord()
            return (CommPoly if symmetric else NCElement)({m: kind.kappa}, kind)
        if symmetric:
            return CommPoly({CommMonomial((), 1): 1}, kind)
        return NCElement({NCWord((), 1): 1}, kind)
    if symmetric:
        return CommPoly({CommMonomial(((i, 1),)): 1}, kind)
    return NCElement({NCWord((i,)): 1}, kind)


# --------------------------------------------------------------------------
# orders used for display; the mathematical orders live in wittgk.orders


def display_key(m):
    letters = _letters(m)
    return (len(letters), sum(letters), letters, m.cpow)


def sorted_terms(el) -> list:
    """Terms in the canonical descending order used by printing and JSON."""
    if isinstance(el, RawNC):
        items = [(NCWord(letters, cpow), c) for (letters, cpow), c in el.terms.items()]
    else:
        items = list(el.terms.items())
    return sorted(items, key=lambda t: display_key(t[0]), reverse=True)


# --------------------------------------------------------------------------
# printing


def _factor_string(letters, cpow, symbolic_letter) -> str:
    cs = "*".join(["c"] * cpow)
    ls = "".join(f"{symbolic_letter}[{i}]" for i in letters)
    if cs and ls:
        return cs + "*" + ls
    return cs or ls


def _format_term(coeff: Fraction, factors: str) -> str:
    if not factors:
        return str(coeff)
    if coeff == 1:
        return factors
    if coeff == -1:
        return "-" + factors
    return f"{coeff}*{factors}"


def print_element(el) -> str:
    """Deterministic canonical text; ``parse_element`` inverts it."""
    letter = "x" if isinstance(el, CommPoly) else "e"
    parts = []
    for m, c in sorted_terms(el):
        parts.append(_format_term(Fraction(c), _factor_string(_letters(m), m.cpow, letter)))
    if not parts:
        return "0"
    out = parts[0]
    for p in parts[1:]:
        out += " - " + p[1:] if p.startswith("-") else " + " + p
    return out


# --------------------------------------------------------------------------
# parsing


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.letter_kind = None  # 'x' or 'e' once seen

    def error(self, msg, at=None):
        at = self.pos if at is None else at
        raise ParseError(msg, at + 1)

    def skip(self):
        t = self.text
        while self.pos < len(t) and t[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            found = repr(self.text[self.pos]) if self.pos < len(self.text) else "end of input"
            self.error(f"expected {ch!r}, found {found}")
        self.pos += 1

    def digits(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected digits")
        return int(self.text[start:self.pos])

    def integer(self) -> int:
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        elif self.peek() == "+":
            self.pos += 1
        return sign * self.digits()

    def factor(self, letters, cpow):
        ch = self.peek()
        start = self.pos
        if ch == "c":
            self.pos += 1
            return cpow + 1
        if ch in ("e", "x"):
            if self.letter_kind is None:
                self.letter_kind = ch
            elif self.letter_kind != ch:
                self.error("cannot mix e[...] and x[...] letters", start)
            self.pos += 1
            self.expect("[")
            idx_pos = self.pos
            i = self.integer()
            try:
                check_index(i)
            except IndexOverflow as exc:
                raise ParseError(str(exc), idx_pos + 1) from None
            self.expect("]")
            letters.append(i)
            return cpow
        self.error("expected a factor e[i], x[i] or c")

    def term(self):
        coeff = Fraction(1)
        letters: list = []
        cpow = 0
        ch = self.peek()
        if ch.isdigit():
            num = self.digits()
            if self.peek() == "/":
                self.pos += 1
                den_pos = self.pos
                den = self.digits()
                if den == 0:
                    self.error("zero denominator", den_pos)
                coeff = Fraction(num, den)
            else:
                coeff = Fraction(num)
            if self.peek() != "*":
                return coeff, letters, cpow
            self.pos += 1
        cpow = self.factor(letters, cpow)
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                cpow = self.factor(letters, cpow)
            elif ch in ("e", "x", "c"):
                cpow = self.factor(letters, cpow)
            else:
                return coeff, letters, cpow

    def element(self):
        terms = []
        sign = 1
        if self.peek() == "-":
            self.pos += 1
            sign = -1
        if self.peek() == "":
            self.error("empty element")
        while True:
            coeff, letters, cpow = self.term()
            terms.append((sign * coeff, letters, cpow))
            ch = self.peek()
            if ch == "":
                return terms
            if ch not in "+-":
                self.error(f"unexpected character {ch!r}")
            sign = 1 if ch == "+" else -1
            self.pos += 1


def parse_element(text: str, kind: AlgebraKind, ring: str | None = None):
    """Parse element text.

    ``x[...]`` letters give a :class:`CommPoly`; ``e[...]`` letters give a
    :class:`RawNC` that keeps the letter order as written.  ``ring`` may force
    ``"symmetric"`` or ``"enveloping"``; text without letters defaults to
    enveloping.
    """
    p = _Parser(text)
    terms = p.element()
    inferred = {"x": "symmetric", "e": "enveloping"}.get(p.letter_kind)
    if ring is not None and inferred is not None and ring != inferred:
        raise ParseError(f"expected a {ring} element, got {inferred} letters", 1)
    ring = ring or inferred or "enveloping"
    for _, letters, cpow in terms:
        for i in letters:
            kind.check(i)
        if cpow:
            kind.check(CENTRAL)
    if ring == "symmetric":
        out: dict = {}
        for coeff, letters, cpow in terms:
            if kind.is_quotient:
                coeff, cpow = coeff * kind.kappa**cpow, 0
            m = CommMonomial.from_indices(letters, cpow)
            out[m] = out.get(m, 0) + coeff
        return CommPoly(out, kind)
    raw: dict = {}
    for coeff, letters, cpow in terms:
        if kind.is_quotient:
            coeff, cpow = coeff * kind.kappa**cpow, 0
        key = (tuple(letters), cpow)
        raw[key] = raw.get(key, 0) + coeff
    return RawNC(raw, kind)


def parse_nc(text: str, kind: AlgebraKind) -> NCElement:
    """Parse and PBW-normalize enveloping-algebra text."""
    from .brackets import normalize_pbw

    return normalize_pbw(parse_element(text, kind, "enveloping"))


def parse_any(text: str, kind: AlgebraKind, ring: str | None = None):
    el = parse_element(text, kind, ring)
    if isinstance(el, RawNC):
        from .brackets import normalize_pbw

        return normalize_pbw(el)
    return el


# --------------------------------------------------------------------------
# JSON


def _frac_json(q) -> dict:
    q = Fraction(q)
    return {"num": str(q.numerator), "den": str(q.denominator)}


def _frac_from_json(d) -> Fraction:
    den = int(d["den"])
    if den <= 0:
        raise ValueError("denominator must be positive")
    return Fraction(int(d["num"]), den)


def kind_to_json(kind: AlgebraKind) -> dict:
    out = {"kind": kind.name}
    if kind.is_quotient:
        out["kappa"] = _frac_json(kind.kappa)
    return out


def kind_from_json(d: dict) -> AlgebraKind:
    kappa = _frac_from_json(d["kappa"]) if "kappa" in d else None
    return AlgebraKind.parse(d["kind"], kappa)


def element_to_json(el) -> dict:
    out = kind_to_json(el.kind)
    out["ring"] = "symmetric" if isinstance(el, CommPoly) else "enveloping"
    out["terms"] = [
        {"coeff": _frac_json(c), "cpow": m.cpow, "word": list(_letters(m))} for m, c in sorted_terms(el)
    ]
    return out


def element_from_json(d: dict):
    kind = kind_from_json(d)
    ring = d.get("ring", "enveloping")
    if ring == "symmetric":
        terms: dict = {}
        for t in d["terms"]:
            for i in t["word"]:
                kind.check(i)
            coeff, cpow = _frac_from_json(t["coeff"]), int(t.get("cpow", 0))
            if kind.is_quotient:
                coeff, cpow = coeff * kind.kappa**cpow, 0
            m = CommMonomial.from_indices(t["word"], cpow)
            terms[m] = terms.get(m, 0) + coeff
        return CommPoly(terms, kind)
    raw: dict = {}
    for t in d["terms"]:
        for i in t["word"]:
            kind.check(i)
        key = (tuple(t["word"]), int(t.get("cpow", 0)))
        raw[key] = raw.get(key, 0) + _frac_from_json(t["coeff"])
    from .brackets import normalize_pbw

    return normalize_pbw(RawNC(raw, kind))
