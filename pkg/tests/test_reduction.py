import json
import random
from dataclasses import replace
from fractions import Fraction

import pytest

from wittgk import (
    VIRASORO,
    WITT,
    WITT_POSITIVE,
    CommMonomial,
    NCWord,
    parse_any,
    virasoro_quotient,
)
from wittgk.errors import (
    IterationBudgetExceeded,
    KindMismatch,
    NotHomogeneous,
    NotReducible,
    PreconditionViolated,
    ZeroGenerator,
)
from wittgk.orders import OrderKind, order_key
from wittgk.reduction import (
    POISSON,
    TWO_SIDED,
    IdealSpec,
    NormalForm,
    Reducer,
    ReductionParams,
    compute_params,
    derivation_chain_high,
    derivation_chain_low,
    is_normal_word,
    normal_form,
    normal_form_from_json,
    normal_form_to_json,
    reduce_once,
    verify_certificate,
)


def poisson(text):
    return IdealSpec(parse_any(text, WITT_POSITIVE), POISSON)


def two_sided(text, kind=WITT):
    return IdealSpec(parse_any(text, kind, "enveloping"), TWO_SIDED)


def x(text):
    return parse_any(text, WITT_POSITIVE)


def mono(*idx):
    return CommMonomial.from_indices(idx)


@pytest.mark.parametrize("spec, expected", [
    (lambda: poisson("x[1]x[1]"), ReductionParams(2, 3, 1, 1)),
    (lambda: poisson("x[2]x[2] + x[1]x[3]"), ReductionParams(2, 7, 1, 3)),
    (lambda: two_sided("e[1]e[2]", WITT_POSITIVE), ReductionParams(2, 5, 1, 2)),
    (lambda: two_sided("e[-2] + e[2]"), ReductionParams(1, 5, -2, 2)),
])
def test_params(spec, expected):
    assert compute_params(spec()) == expected


def test_spec_validation():
    with pytest.raises(ZeroGenerator):
        IdealSpec(x("x[1]") - x("x[1]"), POISSON)
    with pytest.raises(NotHomogeneous):
        poisson("x[1]x[1] + x[1]")
    with pytest.raises(KindMismatch):
        IdealSpec(parse_any("e[1]", VIRASORO), TWO_SIDED)
    with pytest.raises(KindMismatch):
        IdealSpec(x("x[1]"), TWO_SIDED)
    with pytest.raises(PreconditionViolated):
        compute_params(two_sided("3"))
    # inhomogeneous generators are fine on the full line
    assert compute_params(two_sided("e[1]e[1] + e[-1]")).k == 2


def test_chain_for_x1_squared():
    h, c = derivation_chain_high(mono(3, 3), poisson("x[1]x[1]"))
    assert c == 2
    assert h == x("2*x[3]x[3] - 2*x[1]x[5]")


def test_reduce_once():
    out, step = reduce_once(mono(3, 3), poisson("x[1]x[1]"))
    assert out == x("x[1]x[5]")
    assert step.chain == (2, 2) and step.scalar == 2


def test_chain_preconditions():
    spec = poisson("x[1]x[1]")
    with pytest.raises(PreconditionViolated):
        derivation_chain_high(mono(2, 3), spec)
    with pytest.raises(PreconditionViolated):
        derivation_chain_high(mono(3, 3, 3), spec)
    with pytest.raises(PreconditionViolated):
        derivation_chain_low(mono(3, 3), spec)
    with pytest.raises(NotReducible):
        reduce_once(mono(1, 5), spec)


@pytest.mark.parametrize("g", ["x[1]x[1]", "x[1]x[2]", "x[2]x[2] + x[1]x[3]"])
def test_positive_integer_coefficient_and_descent(g):
    from wittgk.partitions import iter_partitions

    spec = poisson(g)
    r = Reducer(spec)
    k, n = r.params.k, r.params.n
    for N in range(k * n, 26):
        for parts in iter_partitions(N, parts=k):
            if parts[0] < n:
                continue
            m = mono(*parts)
            h, c = r.derivation_chain(m)
            assert c.denominator == 1 and c >= 1 and h.coeff(m) == c
            for w in h.terms:
                assert w.degree == N
                assert min(w.indices()) >= r.params.ell_low
                if w != m:
                    assert order_key(w, OrderKind.INC_LEX) < order_key(m, OrderKind.INC_LEX)


def test_low_chain_full_line():
    spec = two_sided("e[-2] + e[2]")
    h, c = derivation_chain_low(NCWord((-5,)), spec)
    assert c == 1
    assert h == parse_any("e[-5] + 5*e[-1]", WITT)


def test_low_side_letter_ceiling():
    spec = two_sided("e[-2]e[-1]")
    r = Reducer(spec)
    h, c = r.derivation_chain(NCWord((-9, -7)), low=True)
    assert c >= 1 and c.denominator == 1
    assert all(max(w.letters) <= r.params.ell_high for w in h.terms if w.letters)


def test_known_normal_form():
    spec = poisson("x[1]x[1]")
    nf = normal_form(x("x[3]x[3]x[3]x[3]"), spec)
    assert nf.combination == x("15*x[1]x[1]x[1]x[9]")
    assert verify_certificate(x("x[3]x[3]x[3]x[3]"), nf, spec)


def test_two_sided_normal_form_verifies():
    spec = two_sided("e[1]e[2]", WITT_POSITIVE)
    u = parse_any("e[5]e[6]", WITT_POSITIVE) * parse_any("e[7]e[8]", WITT_POSITIVE)
    nf = normal_form(u, spec)
    assert verify_certificate(u, nf, spec)
    r = Reducer(spec)
    assert all(r.is_normal(w) for w in nf.combination.terms)
    assert {w.degree for w in nf.combination.terms} <= {26}


def test_quotient_kind_normal_form():
    k = virasoro_quotient(Fraction(1, 2))
    spec = two_sided("e[-1]e[1] + c", k)
    u = parse_any("e[-7]e[-4]e[3]e[6]", k)
    nf = normal_form(u, spec)
    assert verify_certificate(u, nf, spec)
    assert all(is_normal_word(w, compute_params(spec), k) for w in nf.combination.terms)


def test_random_normal_forms_verify():
    rng = random.Random(11)
    for g in ("x[1]x[1]", "x[1]x[2]", "x[2]x[2] + x[1]x[3]"):
        spec = poisson(g)
        for _ in range(15):
            idx = [rng.randint(1, 9) for _ in range(rng.randint(1, 5))]
            p = x("+".join("x[%d]" % i for i in idx)) * x("x[%d]x[%d]" % (rng.randint(3, 9), rng.randint(3, 9)))
            nf = normal_form(p, spec)
            assert verify_certificate(p, nf, spec)
            assert {w.degree for w in nf.combination.terms} <= {w.degree for w in p.terms}


def test_certificate_tampering_detected():
    spec = poisson("x[1]x[1]")
    p = x("x[3]x[3]x[3]x[3]")
    nf = normal_form(p, spec)
    bad = list(nf.certificate)
    bad[0] = replace(bad[0], scalar=bad[0].scalar + 1)
    assert not verify_certificate(p, NormalForm(nf.combination, bad), spec)
    assert not verify_certificate(p, NormalForm(x("x[1]"), []), spec)
    assert verify_certificate(x("x[1]"), NormalForm(x("x[1]"), []), spec)


def test_certificate_json_round_trip():
    spec = two_sided("e[1]e[1]")
    u = parse_any("e[-3]e[4]e[5]", WITT)
    nf = normal_form(u, spec)
    doc = json.loads(json.dumps(normal_form_to_json(nf)))
    back = normal_form_from_json(doc)
    assert back.combination == nf.combination
    assert verify_certificate(u, back, spec)


def test_iteration_budget():
    with pytest.raises(IterationBudgetExceeded):
        normal_form(x("x[3]x[3]x[3]x[3]"), poisson("x[1]x[1]"), max_steps=1)


def test_element_kind_checked():
    with pytest.raises(KindMismatch):
        normal_form(parse_any("e[3]e[3]", WITT_POSITIVE), poisson("x[1]x[1]"))
