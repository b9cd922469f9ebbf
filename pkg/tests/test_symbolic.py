import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import constant_rate_spec

from solenoid_dim.errors import BudgetError
from solenoid_dim.model import SolenoidSpec, base_map
from solenoid_dim.symbolic import (
    base_orbit_matches,
    branch_orbit,
    cylinder_point,
    cylinder_set,
    decode_symbol,
    encode_symbol,
    enumerate_words,
    index_word,
    inverse_branch,
    level_points,
    reachable_cells,
    word_count,
    word_index,
)
from solenoid_dim.trig import constant, zero


def two_axis_spec():
    return SolenoidSpec(
        l=2, p=1, d=1, M=(2, 3),
        lambda_field=constant(2, 0.1),
        f=(zero(2),), lambda_tilde=0.01, g=(zero(2),),
        E_radius=0.5, F_radius=0.5,
    )


def test_inverse_branch_halving():
    spec = constant_rate_spec(0.2)
    assert inverse_branch(spec, 0, [0.5]) == pytest.approx([0.25])
    assert inverse_branch(spec, 1, [0.5]) == pytest.approx([0.75])


def test_mixed_radix_symbols():
    spec = two_axis_spec()
    assert decode_symbol(spec, 5) == (1, 2)
    assert encode_symbol(spec, (1, 2)) == 5
    assert [decode_symbol(spec, s) for s in range(6)] == [
        (0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (1, 2),
    ]
    assert inverse_branch(spec, 5, [0.0, 0.0]) == pytest.approx([0.5, 2.0 / 3.0])


def test_cylinder_point_worked_example():
    spec = constant_rate_spec(0.2)
    assert cylinder_point(spec, (0,), [0.0]) == pytest.approx([0.0])
    assert cylinder_point(spec, (1, 0), [0.0]) == pytest.approx([0.25])
    ok, _ = base_orbit_matches(spec, (1, 0), [0.0], [0.25])
    assert ok


def test_branch_orbit_is_a_backward_orbit():
    spec = two_axis_spec()
    word = (3, 1, 4, 0)
    x = np.array([0.21, 0.68])
    orbit = branch_orbit(spec, word, x)
    assert np.allclose(base_map(spec, orbit[0]), x)
    for k in range(1, len(word)):
        assert np.allclose(base_map(spec, orbit[k]), orbit[k - 1], atol=1e-12)


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 5), min_size=1, max_size=8), st.floats(0.0, 1.0, exclude_max=True))
def test_cylinder_point_inverts_the_base_map(symbols, x0):
    spec = two_axis_spec()
    word = tuple(symbols)
    x = np.array([x0, (0.7 * x0 + 0.1) % 1.0])
    point = cylinder_point(spec, word, x)
    ok, _ = base_orbit_matches(spec, word, x, point, tol=1e-12)
    assert ok


def test_distinct_words_land_in_distinct_cells():
    spec = constant_rate_spec(0.2)
    n = 6
    points = {}
    for word in enumerate_words(spec, n):
        cell = tuple(int(c) for c in np.floor(cylinder_point(spec, word, [0.3]) * 2**n))
        assert cell not in points
        points[cell] = word


def test_enumeration_counts_and_order():
    spec = constant_rate_spec(0.2)
    assert len(list(enumerate_words(spec, 1))) == 2
    assert word_count(spec, 10) == 1024
    six = two_axis_spec()
    words = list(enumerate_words(six, 3))
    assert len(words) == 216
    assert words[0] == (0, 0, 0)
    assert words == sorted(words)


def test_word_index_roundtrip():
    spec = two_axis_spec()
    for i in (0, 1, 7, 215):
        assert word_index(spec, index_word(spec, 3, i)) == i


def test_budget_guard():
    spec = constant_rate_spec(0.2)
    with pytest.raises(BudgetError, match="budget"):
        enumerate_words(spec, 30)
    with pytest.raises(BudgetError):
        level_points(spec, 10, np.zeros(1), budget=100)


def test_level_points_match_cylinder_points():
    spec = two_axis_spec()
    anchor = np.array([0.4, 0.9])
    levels = level_points(spec, 3, anchor)
    for i in (0, 5, 100, 215):
        word = index_word(spec, 3, i)
        assert np.allclose(levels[-1][i], cylinder_point(spec, word, anchor), atol=1e-15)
        assert np.allclose(levels[1][i // 6], branch_orbit(spec, word, anchor)[1], atol=1e-15)


def test_cylinder_diameter_binary():
    spec = constant_rate_spec(0.2)
    cyl = cylinder_set(spec, (1, 0, 1), [0.2])
    assert cyl.diameter == pytest.approx(2.0**-3)
    # two-sided bound with gamma = 1/2: beta_low^(1-n) * gamma = 2^-n
    assert 2.0**-3 <= cyl.diameter <= 2.0 ** (1 - 3) * 0.5 + 1e-15


def test_reachable_cells_full_shift():
    spec = two_axis_spec()
    assert reachable_cells(spec, 1) == 6
    assert reachable_cells(spec, 3) == 216
