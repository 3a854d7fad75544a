import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hide_de.benchmarks import get_function
from hide_de.core import Evaluator, Population, RngStream, SearchSpace, Termination
from hide_de.de import (
    DEParams,
    binomial_crossover,
    de_generation,
    draw_donors,
    init_population,
    mutate_rand1,
    rand1,
    run_de,
)
from hide_de.errors import ConfigurationError, DimensionError

from reference import Tape, de_generation_reference, max_abs_diff


def shifted_sphere(x):
    return float(sum((xi - 1.5) ** 2 for xi in x))


def test_params_defaults_and_validation():
    p = DEParams()
    assert (p.F, p.CR, p.NP) == (0.5, 0.9, 100)
    for bad in (dict(F=-0.1), dict(F=2.5), dict(CR=1.1), dict(NP=3)):
        with pytest.raises(ConfigurationError):
            DEParams(**bad)


@settings(max_examples=50, deadline=None)
@given(st.integers(4, 40), st.integers(0, 2**32))
def test_donors_distinct_and_exclude_self(NP, seed):
    donors = draw_donors(NP, RngStream(seed), 3)
    assert donors.shape == (NP, 3)
    for i, row in enumerate(donors):
        assert len(set(row)) == 3 and i not in row
    one = draw_donors(NP, RngStream(seed), 3, exclude=2)
    assert len(set(one)) == 3 and 2 not in one


def test_donors_need_four_members():
    with pytest.raises(ConfigurationError):
        draw_donors(3, RngStream(0), 3)


def test_rand1_formula():
    assert np.allclose(rand1([1.0, 1.0], [3.0, 0.0], [1.0, 2.0], 0.5), [2.0, 0.0])


def test_mutate_rand1_stays_in_box():
    space = SearchSpace.box(3, -1, 1)
    pop = Population(space.uniform(RngStream(0), 6), np.zeros(6))
    for i in range(6):
        v = mutate_rand1(pop, i, 1.9, RngStream(i), space)
        assert space.contains(v)
    with pytest.raises(ConfigurationError):
        mutate_rand1(Population(np.zeros((3, 3)), np.zeros(3)), 0, 0.5, RngStream(0), space)


@settings(max_examples=100, deadline=None)
@given(st.integers(1, 12), st.floats(0.0, 1.0), st.integers(0, 2**32))
def test_crossover_inherits_every_coordinate_from_a_parent(d, CR, seed):
    u = np.arange(d) + 100.0
    x = -np.arange(d) - 1.0
    t = binomial_crossover(u, x, CR, RngStream(seed))
    from_u = t == u
    assert np.all(from_u | (t == x))
    assert from_u.any()


def test_crossover_extremes():
    u, x = np.ones(5), np.zeros(5)
    assert np.array_equal(binomial_crossover(u, x, 1.0, RngStream(1)), u)
    for s in range(20):
        assert binomial_crossover(u, x, 0.0, RngStream(s)).sum() == 1.0


def test_crossover_rejects_bad_input():
    with pytest.raises(DimensionError):
        binomial_crossover(np.ones(3), np.ones(4), 0.5, RngStream(0))
    with pytest.raises(ConfigurationError):
        binomial_crossover(np.ones(3), np.ones(3), 1.5, RngStream(0))


def test_crossover_rate_is_respected_statistically():
    rng = RngStream(5)
    t = binomial_crossover(np.ones((4000, 10)), np.zeros((4000, 10)), 0.3, rng)
    # expected share: 0.1 forced + 0.9 * 0.3
    assert abs(t.mean() - 0.37) < 0.01


@pytest.mark.parametrize("seed", [0, 1, 2])
def test_generation_matches_straight_line_transcription(seed):
    space = SearchSpace.box(2, -5, 5)
    params = DEParams(F=0.5, CR=0.9, NP=6)
    ev = Evaluator(shifted_sphere, space)
    pop = init_population(space, 6, ev, RngStream(seed))
    X, fit = pop.positions.tolist(), pop.fitness.tolist()
    rng = RngStream(seed + 100, record=True)
    for _ in range(25):
        start = len(rng.tape)
        pop = de_generation(pop, params, ev, rng)
        tape = Tape(rng.tape[start:])
        X, fit = de_generation_reference(X, fit, shifted_sphere, 0.5, 0.9,
                                         space.lower, space.upper, tape)
        assert tape.done()
        assert max_abs_diff(pop.positions, X) <= 1e-12
        assert max_abs_diff(pop.fitness, fit) <= 1e-12


def test_generation_is_elitist_and_counts_evaluations():
    f = get_function("f5", 5)
    ev = Evaluator(f)
    rng = RngStream(3)
    pop = init_population(f.space, 10, ev, rng)
    for _ in range(30):
        new = de_generation(pop, DEParams(NP=10), ev, rng)
        assert np.all(new.fitness <= pop.fitness)
        pop = new
    assert ev.evaluations == 10 + 30 * 10


def test_run_de_budget_trace_and_determinism():
    f = get_function("f1", 5)
    term = Termination(40)
    a = run_de(f.space, DEParams(NP=20), f, term, 9)
    b = run_de(f.space, DEParams(NP=20), f, term, 9)
    assert np.array_equal(a.trace, b.trace)
    assert a.evaluations_used == 20 + 40 * 20 and a.generations == 40
    assert len(a.trace) == 41
    assert np.all(np.diff(a.trace) <= 0)
    assert a.best_fitness == a.trace[-1]


def test_run_de_evaluation_budget():
    f = get_function("f1", 5)
    res = run_de(f.space, DEParams(NP=20), f, Termination(None, max_evaluations=205), 0)
    assert res.evaluations_used <= 205 and res.generations == 9


def test_run_de_converges_on_sphere():
    f = get_function("sphere", 5)
    res = run_de(f.space, DEParams(NP=30), f, Termination(400), 1)
    assert res.best_fitness < 1e-8


def test_callback_sees_every_generation():
    f = get_function("f1", 3)
    seen = []
    run_de(f.space, DEParams(NP=8), f, Termination(7), 0, callback=lambda g, pop: seen.append(g))
    assert seen == list(range(7))
