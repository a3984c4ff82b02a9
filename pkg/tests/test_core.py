import pytest

from necklace_lab.core import (
    B,
    W,
    BeadColor,
    Necklace,
    canonical_form,
    gap_color,
    insert_at,
    is_valid,
    start_necklace,
    white_count,
    white_gap_count,
)
from necklace_lab.counting import enumerate_valid
from necklace_lab.errors import InputError


def test_start_necklace():
    nk = start_necklace()
    assert nk.beads == (W, B)
    assert nk.size == 2
    assert white_count(nk) == 1


def test_parse_and_str():
    nk = Necklace.parse("wbb")
    assert nk.beads == (W, B, B)
    assert str(nk) == "WBB"
    assert nk.bits() == (1, 0, 0)
    with pytest.raises(InputError):
        Necklace.parse("WXB")


@pytest.mark.parametrize(
    "text, gap, expected",
    [
        ("WB", 0, B),
        ("WB", 1, B),
        ("WBB", 1, W),
        ("WBBB", 1, W),
        ("WBBB", 2, W),
        ("WBBB", 3, B),
    ],
)
def test_gap_color(text, gap, expected):
    assert gap_color(Necklace.parse(text), gap) is expected


@pytest.mark.parametrize("gap", [-1, 2, 5])
def test_gap_out_of_range(gap):
    with pytest.raises(InputError):
        gap_color(start_necklace(), gap)
    with pytest.raises(InputError):
        insert_at(start_necklace(), gap)


def test_insert_at_examples():
    nk = start_necklace()
    grown = insert_at(nk, 0)
    assert str(grown) == "WBB"
    assert nk.beads == (W, B)  # unchanged
    assert str(insert_at(grown, 1)) == "WBWB"


@pytest.mark.parametrize(
    "text, valid",
    [("WB", True), ("WWB", False), ("BBB", False), ("WBWB", True), ("W", False), ("WBBW", False)],
)
def test_is_valid(text, valid):
    assert is_valid(Necklace.parse(text)) is valid


def test_canonical_form_examples():
    assert canonical_form(Necklace((B, W))) == Necklace((B, W))
    assert canonical_form(Necklace((W, B))) == Necklace((B, W))
    assert str(canonical_form(Necklace.parse("WBWBB"))) == "BBWBW"


@pytest.mark.parametrize("n", range(2, 13))
def test_canonical_form_rotation_invariant(n):
    for nk in enumerate_valid(n):
        forms = {canonical_form(Necklace(nk.beads[r:] + nk.beads[:r])) for r in range(n)}
        assert forms == {nk}
        assert canonical_form(nk) == nk


@pytest.mark.parametrize("n", range(2, 11))
def test_insertion_invariants(n):
    """Closure, monotone whites, gap census and the white-count bound."""
    for nk in enumerate_valid(n):
        k = white_count(nk)
        assert k <= n // 2
        assert white_gap_count(nk) == n - 2 * k
        for g in range(n):
            child = insert_at(nk, g)
            assert child.size == n + 1
            assert is_valid(child)
            delta = white_count(child) - k
            assert delta == (1 if gap_color(nk, g) is W else 0)


def test_bead_color_has_two_values():
    assert {c.value for c in BeadColor} == {"W", "B"}
