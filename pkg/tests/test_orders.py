import pytest
from hypothesis import given
from hypothesis import strategies as st

from wittgk import WITT, WITT_POSITIVE, CommMonomial, NCWord, OrderKind, parse_any
from wittgk.errors import ZeroElement
from wittgk.orders import abs_degree, compare, leading_monomial, order_key, top_length_part

INC, DEC = OrderKind.INC_LEX, OrderKind.DEC_LEX


def mono(*idx):
    return CommMonomial.from_indices(idx)


def test_length_then_degree():
    assert compare(mono(5), mono(1, 1), INC) == -1
    assert compare(mono(1, 4), mono(2, 2), INC) == 1
    assert compare(NCWord((9,)), NCWord((1, 1)), DEC) == -1


def test_tie_breaks_differ_between_orders():
    # same length and degree: x_1 x_4 versus x_2 x_3
    assert compare(mono(1, 4), mono(2, 3), INC) == -1
    assert compare(mono(1, 4), mono(2, 3), DEC) == 1
    assert compare(NCWord((1, 4)), NCWord((2, 3)), INC) == -1
    assert compare(NCWord((1, 4)), NCWord((2, 3)), DEC) == 1


def test_compressed_keys_match_word_keys():
    # repeated small letters: x_1^2 x_4 vs x_1 x_2 x_3
    a, b = (1, 1, 4), (1, 2, 3)
    for order in (INC, DEC):
        assert compare(mono(*a), mono(*b), order) == compare(NCWord(a), NCWord(b), order)


@given(st.lists(st.integers(1, 9), max_size=5), st.lists(st.integers(1, 9), max_size=5))
def test_comm_and_word_orders_agree(a, b):
    a, b = tuple(sorted(a)), tuple(sorted(b))
    for order in (INC, DEC):
        assert compare(mono(*a), mono(*b), order) == compare(NCWord(a), NCWord(b), order)


def test_leading_monomial():
    p = parse_any("x[2]x[2] + x[1]x[3]", WITT_POSITIVE)
    assert leading_monomial(p, DEC)[0] == mono(1, 3)
    assert leading_monomial(p, INC)[0] == mono(2, 2)
    with pytest.raises(ZeroElement):
        leading_monomial(p - p)


def test_abs_degree_and_top_part():
    w = NCWord((-3, 0, 2))
    assert abs_degree(w) == 5 and abs_degree(w, 4) == 9
    u = parse_any("e[1]e[2] + e[5]", WITT)
    assert list(top_length_part(u)) == [NCWord((1, 2))]


@given(st.lists(st.integers(-30, 30).filter(bool), max_size=6))
def test_absolute_degree_dominates_length(letters):
    w = NCWord(tuple(sorted(letters)))
    assert abs_degree(w) >= w.length


def test_cpow_is_last_tiebreak():
    assert order_key(NCWord((1,), 1), INC) > order_key(NCWord((1,), 0), INC)
