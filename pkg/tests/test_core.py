import logging

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from hide_de.core import (
    Evaluator,
    Individual,
    Population,
    RngStream,
    SearchSpace,
    Termination,
    clamp_to_bounds,
    drive,
    evaluate,
    greedy_mask,
    reflect_into_bounds,
    repair,
    select_greedy,
)
from hide_de.errors import ConfigurationError, ContractError, DimensionError

finite = st.floats(-1e6, 1e6, allow_nan=False)


def test_search_space_validation():
    with pytest.raises(ConfigurationError):
        SearchSpace([0.0, 1.0], [1.0, 1.0])
    with pytest.raises(DimensionError):
        SearchSpace([0.0, 0.0], [1.0])
    with pytest.raises(DimensionError):
        SearchSpace.box(0)


def test_search_space_is_immutable_and_hashable():
    s = SearchSpace.box(3)
    with pytest.raises(ValueError):
        s.lower[0] = 5.0
    assert s == SearchSpace.box(3) and hash(s) == hash(SearchSpace.box(3))
    assert s != SearchSpace.box(3, -1, 1)


def test_uniform_sample_lies_in_box():
    s = SearchSpace([-1.0, 0.0, 10.0], [1.0, 5.0, 11.0])
    X = s.uniform(RngStream(3), 500)
    assert X.shape == (500, 3)
    assert np.all(X >= s.lower) and np.all(X < s.upper)


@settings(max_examples=200, deadline=None)
@given(arrays(float, 4, elements=finite))
def test_clamp_matches_coordinatewise_definition(x):
    s = SearchSpace([-1.0, -2.0, 0.0, 5.0], [1.0, 2.0, 0.5, 6.0])
    y = clamp_to_bounds(x, s)
    for j in range(4):
        expected = min(max(x[j], s.lower[j]), s.upper[j])
        assert y[j] == expected
    assert np.array_equal(clamp_to_bounds(y, s), y)


@settings(max_examples=200, deadline=None)
@given(arrays(float, 3, elements=finite))
def test_reflect_lands_in_box_and_fixes_interior(x):
    s = SearchSpace([-1.0, 0.0, 2.0], [1.0, 3.0, 2.5])
    y = reflect_into_bounds(x, s)
    assert s.contains(y)
    inside = (x >= s.lower) & (x <= s.upper)
    assert np.array_equal(y[inside], x[inside])


def test_reflect_single_overshoot_mirrors():
    s = SearchSpace.box(2, 0.0, 10.0)
    assert np.allclose(reflect_into_bounds([12.0, -3.0], s), [8.0, 3.0])


def test_repair_rejects_unknown_mode_and_bad_shape():
    s = SearchSpace.box(2)
    with pytest.raises(ConfigurationError):
        repair([0.0, 0.0], s, "wrap")
    with pytest.raises(DimensionError):
        clamp_to_bounds([0.0, 0.0, 0.0], s)


def test_rng_is_reproducible_and_records_tape():
    a, b = RngStream(11, record=True), RngStream(11)
    va = [a.random(3), a.integers(0, 5, 4), a.normal(2), a.cauchy()]
    vb = [b.random(3), b.integers(0, 5, 4), b.normal(2), b.cauchy()]
    for x, y in zip(va, vb):
        assert np.array_equal(x, y)
    assert [k for k, _ in a.tape] == ["random", "integers", "normal", "cauchy"]
    assert b.tape is None
    with pytest.raises(ConfigurationError):
        RngStream(-1)


def test_evaluator_counts_and_batches(sphere2):
    ev = Evaluator(sphere2)
    vals = ev(np.array([[1.0, 2.0], [0.0, 0.0], [3.0, 0.0]]))
    assert np.array_equal(vals, [5.0, 0.0, 9.0])
    assert ev(np.array([1.0, 1.0])) == 2.0
    assert ev.evaluations == 4 == sphere2.calls
    with pytest.raises(DimensionError):
        ev(np.zeros(3))


def test_evaluator_maps_non_finite_to_inf(caplog):
    space = SearchSpace.box(1)
    ev = Evaluator(lambda x: np.nan if x[0] > 0 else -1.0, space)
    with caplog.at_level(logging.WARNING):
        v = ev(np.array([[1.0], [-1.0]]))
    assert v[0] == np.inf and v[1] == -1.0
    assert ev.faults == 1
    assert "non-finite" in caplog.text


def test_evaluator_needs_a_space():
    with pytest.raises(ConfigurationError):
        Evaluator(lambda x: 0.0)


def test_evaluate_returns_copy(sphere2):
    ind = Individual([3.0, 4.0])
    out = evaluate(ind, sphere2)
    assert out.fitness == 25.0 and not ind.evaluated
    with pytest.raises(DimensionError):
        evaluate(Individual([1.0]), sphere2)


def test_select_greedy_is_strict():
    a = Individual([0.0], 1.0)
    assert select_greedy(a, Individual([1.0], 1.0)) is a
    t = Individual([1.0], 0.5)
    assert select_greedy(a, t) is t
    assert select_greedy(Individual([0.0], np.nan), Individual([1.0], 1e300)).fitness == 1e300
    with pytest.raises(ContractError):
        select_greedy(a, Individual([1.0]))
    with pytest.raises(DimensionError):
        select_greedy(a, Individual([1.0, 2.0], 0.0))


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(finite, finite), min_size=1, max_size=20))
def test_greedy_mask_agrees_with_select_greedy(pairs):
    cur = np.array([p[0] for p in pairs])
    tri = np.array([p[1] for p in pairs])
    mask = greedy_mask(cur, tri)
    for k, (c, t) in enumerate(pairs):
        kept = select_greedy(Individual([0.0], c), Individual([1.0], t))
        assert mask[k] == (kept.position[0] == 1.0)


def test_population_shapes_and_best():
    pop = Population([[0.0, 1.0], [2.0, 3.0], [4.0, 5.0]], [3.0, 1.0, 2.0])
    assert pop.size == 3 and pop.dim == 2
    assert pop.best().fitness == 1.0 and np.array_equal(pop.best().position, [2.0, 3.0])
    assert [m.fitness for m in pop.members] == [3.0, 1.0, 2.0]
    with pytest.raises(DimensionError):
        Population([[0.0, 1.0]], [1.0, 2.0])


def test_termination_validation_and_horizon():
    with pytest.raises(ConfigurationError):
        Termination(max_generations=None)
    with pytest.raises(ConfigurationError):
        Termination(max_generations=None, target_fitness=0.0)
    with pytest.raises(ConfigurationError):
        Termination(max_generations=0)
    assert Termination(max_generations=None, max_evaluations=1050).horizon(100) == 10
    assert Termination(50).horizon(100) == 50


def test_drive_stops_on_each_criterion(sphere2):
    ev = Evaluator(sphere2)
    calls = []

    def step(g):
        calls.append(g)
        ev(np.zeros((10, 2)))

    trace, gens = drive(Termination(5), 5, ev, 10, lambda: 1.0, step)
    assert gens == 5 and len(trace) == 6 and calls == [0, 1, 2, 3, 4]

    ev = Evaluator(sphere2)
    ev(np.zeros((10, 2)))
    trace, gens = drive(Termination(None, 45), 3, ev, 10, lambda: 1.0, step)
    assert gens == 3 and ev.evaluations <= 45

    values = iter([5.0, 3.0, 0.5, 0.1])
    trace, gens = drive(Termination(100, target_fitness=1.0), 100, Evaluator(sphere2), 10,
                        lambda: next(values), lambda g: None)
    assert list(trace) == [5.0, 3.0, 0.5] and gens == 2
