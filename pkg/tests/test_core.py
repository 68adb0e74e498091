import json

import numpy as np
import pytest
from hypothesis import given, strategies as st

from censna.core import (CensoredSample, EvaluationGrid, StepFunction, make_censored_sample,
                         make_grid, read_sample_csv, read_sample_json, step_eval,
                         write_sample_csv, write_sample_json)


def test_make_censored_sample_basic():
    s = make_censored_sample([2, 5], [3, 4])
    np.testing.assert_array_equal(s.x, [2, 4])
    np.testing.assert_array_equal(s.delta, [1, 0])


def test_tie_between_t_and_y_is_uncensored():
    s = make_censored_sample([1], [1])
    assert s.x.tolist() == [1.0] and s.delta.tolist() == [1]


def test_no_censoring_sorted_view():
    s = make_censored_sample([3, 1, 2], [10, 10, 10])
    assert s.delta.tolist() == [1, 1, 1]
    assert s.x_sorted.tolist() == [1, 2, 3]


@pytest.mark.parametrize("t, y, msg", [
    ([1, 2], [1], "length mismatch"),
    ([], [], "at least one"),
    ([-1.0], [2.0], "nonnegative"),
])
def test_make_censored_sample_rejects(t, y, msg):
    with pytest.raises(ValueError, match=msg):
        make_censored_sample(t, y)


def test_tie_convention_uncensored_first():
    s = CensoredSample([1, 1, 1, 0.5], [0, 1, 0, 0])
    assert s.x_sorted.tolist() == [0.5, 1, 1, 1]
    assert s.delta_sorted.tolist() == [0, 1, 0, 0]


def test_sample_is_immutable():
    s = CensoredSample([1.0, 2.0], [1, 0])
    with pytest.raises(ValueError):
        s.x[0] = 5.0


def test_rejects_bad_status():
    with pytest.raises(ValueError, match="0 or 1"):
        CensoredSample([1.0], [2])


@given(st.lists(st.tuples(st.floats(0, 100), st.floats(0, 100)), min_size=1, max_size=30),
       st.randoms())
def test_permutation_invariance_of_sorted_view(pairs, random):
    t, y = map(list, zip(*pairs))
    perm = list(range(len(t)))
    random.shuffle(perm)
    a = make_censored_sample(t, y)
    b = make_censored_sample([t[i] for i in perm], [y[i] for i in perm])
    np.testing.assert_array_equal(a.x_sorted, b.x_sorted)
    np.testing.assert_array_equal(a.delta_sorted, b.delta_sorted)


def test_step_eval_sides():
    right = StepFunction([1.0], [0.5], base=0.0, side="right")
    left = StepFunction([1.0], [0.5], base=0.0, side="left")
    assert step_eval(right, 1.0) == 0.5
    assert step_eval(left, 1.0) == 0.0
    assert step_eval(right, 0.999) == 0.0
    assert step_eval(left, -5.0) == 0.0
    assert step_eval(StepFunction([1.0], [0.5], base=2.0), 0.5) == 2.0


def test_step_function_merges_duplicate_knots():
    f = StepFunction([2.0, 1.0, 2.0], [0.25, 0.5, 0.25])
    assert f.knots.tolist() == [1.0, 2.0]
    assert f.jumps.tolist() == [0.5, 0.5]
    assert f(2.0) == 1.0


def test_step_function_limits():
    f = StepFunction([1.0, 2.0], [0.5, 0.25])
    assert f.limit(1.0, "left") == 0.0
    assert f.limit(1.0, "right") == 0.5
    np.testing.assert_allclose(f([0.0, 1.5, 3.0]), [0.0, 0.5, 0.75])


@given(st.lists(st.tuples(st.floats(-10, 10), st.floats(0, 1)), min_size=1, max_size=40),
       st.lists(st.floats(-20, 20), min_size=2, max_size=40),
       st.sampled_from(["left", "right"]))
def test_step_eval_monotone_for_nonnegative_jumps(kj, ts, side):
    knots, jumps = zip(*kj)
    f = StepFunction(knots, jumps, side=side)
    ts = np.sort(ts)
    vals = f(ts)
    assert np.all(np.diff(vals) >= -1e-12)


def test_grid_construction():
    g = make_grid(2.0, 4)
    np.testing.assert_allclose(g.points, [0.5, 1.0, 1.5, 2.0])
    s = CensoredSample([0.25, 1.0, 3.0], [1, 0, 1])
    g2 = make_grid(2.0, 4, s)
    np.testing.assert_allclose(g2.points, [0.25, 0.5, 1.0, 1.5, 2.0])
    assert g2.includes_sample_points
    g3 = make_grid(2.0, 4, s, uncensored_only=True)
    np.testing.assert_allclose(g3.points, [0.25, 0.5, 1.0, 1.5, 2.0])
    with pytest.raises(ValueError):
        EvaluationGrid(1.0, [0.5, 1.5])


def test_csv_roundtrip(tmp_path):
    s = CensoredSample([0.1, 2.5, 1.0 / 3.0], [1, 0, 1])
    p = tmp_path / "s.csv"
    write_sample_csv(s, p)
    assert p.read_text().splitlines()[0] == "time,status"
    back = read_sample_csv(p)
    np.testing.assert_array_equal(back.x, s.x)
    np.testing.assert_array_equal(back.delta, s.delta)


def test_json_roundtrip(tmp_path):
    s = CensoredSample([0.1, 2.5], [1, 0])
    p = tmp_path / "s.json"
    write_sample_json(s, p)
    assert set(json.loads(p.read_text())) == {"x", "delta"}
    back = read_sample_json(p)
    np.testing.assert_array_equal(back.x, s.x)


@pytest.mark.parametrize("body, line", [
    ("time,status\n1.0,1\n2.0,2\n", 3),
    ("time,status\n1.0,1\nabc,0\n", 3),
    ("time,status\n-1.0,1\n", 2),
    ("time,status\n1.0\n", 2),
    ("t,s\n1.0,1\n", 1),
])
def test_csv_errors_name_line(tmp_path, body, line):
    p = tmp_path / "bad.csv"
    p.write_text(body)
    with pytest.raises(ValueError, match=f"line {line}"):
        read_sample_csv(p)
