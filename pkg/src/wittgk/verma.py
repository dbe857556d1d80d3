"""Verma and finite-dimensional induced modules over the Virasoro algebra.

A basis vector ``e_lam (x) m_b`` is keyed by ``(lam, b)`` where ``lam`` is a
nondecreasing tuple of negative integers and ``b`` indexes a basis of the
inducing space M'.  Positive letters kill M', ``e_0`` acts by the given
matrix and ``c`` by kappa.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import AlgebraKind, NCElement, Variant
from .brackets import _mul_words
from .errors import KindMismatch, PreconditionViolated
from .partitions import negative_partitions, partition_count


def _matrix(rows) -> tuple:
    mat = tuple(tuple(Fraction(x) for x in row) for row in rows)
    d = len(mat)
    if d == 0 or any(len(r) != d for r in mat):
        raise PreconditionViolated("e0 action must be a nonempty square matrix")
    return mat


@dataclass(frozen=True)
class InducedSpec:
    kappa: Fraction
    e0_action: tuple

    def __post_init__(self):
        object.__setattr__(self, "kappa", Fraction(self.kappa))
        object.__setattr__(self, "e0_action", _matrix(self.e0_action))

    @classmethod
    def verma(cls, kappa, lam) -> "InducedSpec":
        return cls(kappa, ((Fraction(lam),),))

    @property
    def dim(self) -> int:
        return len(self.e0_action)

    def e0_power_column(self, p: int, b: int) -> dict:
        """Column ``b`` of ``e0_action ** p`` as a sparse dict."""
        vec = {b: Fraction(1)}
        mat = self.e0_action
        for _ in range(p):
            nxt: dict = {}
            for j, x in vec.items():
                for i in range(len(mat)):
                    if mat[i][j]:
                        nxt[i] = nxt.get(i, 0) + mat[i][j] * x
            vec = {i: x for i, x in nxt.items() if x}
        return vec


class ModuleVector:
    """Finite combination of basis vectors ``(lam, b)``."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        terms = terms or {}
        for lam, _ in terms:
            if any(i >= 0 for i in lam) or list(lam) != sorted(lam):
                raise PreconditionViolated(f"bad partition label {lam}")
        self.terms = {k: Fraction(v) for k, v in terms.items() if v}

    @classmethod
    def basis(cls, lam=(), b: int = 0) -> "ModuleVector":
        return cls({(tuple(lam), b): 1})

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, ModuleVector) and self.terms == other.terms

    def __add__(self, other):
        acc = dict(self.terms)
        for k, v in other.terms.items():
            acc[k] = acc.get(k, 0) + v
        return ModuleVector(acc)

    def scale(self, s):
        return ModuleVector({k: v * s for k, v in self.terms.items()})

    def grades(self) -> set:
        return {sum(lam) for lam, _ in self.terms}

    def __repr__(self):
        return f"ModuleVector({self.terms!r})"

    def __str__(self):
        return format_vector(self)


def format_vector(v: ModuleVector) -> str:
    if not v.terms:
        return "0"
    parts = []
    for (lam, b), c in sorted(v.terms.items(), key=lambda t: (sum(t[0][0]), t[0])):
        word = "".join(f"e[{i}]" for i in lam) or "1"
        parts.append(f"{c}*{word}@{b}")
    return " + ".join(parts).replace("+ -", "- ")


def vector_to_json(v: ModuleVector) -> list:
    return [{"partition": list(lam), "basis": b, "coeff": {"num": str(c.numerator), "den": str(c.denominator)}}
            for (lam, b), c in sorted(v.terms.items())]


def vector_from_json(items) -> ModuleVector:
    return ModuleVector({(tuple(d["partition"]), int(d.get("basis", 0))):
                         Fraction(int(d["coeff"]["num"]), int(d["coeff"].get("den", 1))) for d in items})


def verma_graded_dim(n: int, d: int = 1) -> int:
    """Dimension of the grade ``-n`` piece."""
    if n < 0:
        raise PreconditionViolated("grade index must be nonnegative")
    return d * partition_count(n)


def growth_of_module(spec: InducedSpec | int, N: int) -> int:
    """Cumulative dimension of grades ``0 .. -N``."""
    d = spec if isinstance(spec, int) else spec.dim
    return d * sum(partition_count(n) for n in range(N + 1))


def _check_kind(kind: AlgebraKind, spec: InducedSpec):
    if kind.variant is Variant.VIRASORO:
        return
    if kind.is_quotient:
        if kind.kappa != spec.kappa:
            raise KindMismatch(f"element lives in {kind}, module has kappa = {spec.kappa}")
        return
    raise KindMismatch(f"module action needs a Virasoro kind, got {kind}")


def act(u: NCElement, v: ModuleVector, spec: InducedSpec) -> ModuleVector:
    """``u . v`` by straightening each word of ``u`` against the partition word."""
    kind = u.kind
    _check_kind(kind, spec)
    kappa = spec.kappa
    acc: dict = {}
    for w, cu in u.terms.items():
        for (lam, b), cv in v.terms.items():
            for letters, dc, c in _mul_words(w.letters, lam, kind):
                if letters and letters[-1] > 0:
                    continue
                zeros = letters.count(0)
                neg = letters[: len(letters) - zeros]
                scal = cu * cv * c * kappa ** (w.cpow + dc)
                if not scal:
                    continue
                for b2, x in spec.e0_power_column(zeros, b).items():
                    key = (neg, b2)
                    acc[key] = acc.get(key, 0) + scal * x
    return ModuleVector(acc)


@dataclass
class WitnessResult:
    found: bool
    depth: int
    witness: tuple | None = None  # (partition, basis index)
    image: ModuleVector = field(default_factory=ModuleVector)
    searched: int = 0

    def to_json(self) -> dict:
        out = {"found": self.found, "depth": self.depth, "searched": self.searched}
        if self.found:
            lam, b = self.witness
            out["witness"] = {"partition": list(lam), "basis": b}
            out["image"] = vector_to_json(self.image)
        else:
            out["outcome"] = "NoWitnessUpToDepth"
        return out


def basis_by_grade(n: int, d: int = 1):
    """Basis labels of grade ``-n`` in search order: partitions as sorted tuples, then basis index."""
    for lam in sorted(negative_partitions(n)):
        for b in range(d):
            yield lam, b


def annihilator_falsify(u: NCElement, spec: InducedSpec, depth: int) -> WitnessResult:
    """First basis vector of grade ``>= -depth`` not killed by ``u``."""
    searched = 0
    if u.terms:
        _check_kind(u.kind, spec)
    for n in range(depth + 1):
        for lam, b in basis_by_grade(n, spec.dim):
            searched += 1
            if not u.terms:
                continue
            img = act(u, ModuleVector.basis(lam, b), spec)
            if img:
                return WitnessResult(True, depth, (lam, b), img, searched)
    return WitnessResult(False, depth, searched=searched)
