import math
import random
from collections import Counter

import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

from bitchrom.errors import ConfigurationError, DegenerateFitnessError, IncompatibleChromosomeError
from bitchrom.ga import (
    GAConfig,
    _next_generation,
    Member,
    Population,
    crossover,
    initialize_population,
    mutate,
    onemax_fitness,
    run,
    select_pair,
)
from bitchrom.packed import LayoutSpec, new_zero, pack

U8 = LayoutSpec(8)


def population_of(fitnesses, L=16):
    """Distinct chromosomes (member i encodes i in binary) with set fitness."""
    members = [Member(pack(format(i, f"0{L}b"), U8), f) for i, f in enumerate(fitnesses)]
    return Population(0, members)


def member_index(pop, c):
    return int(c.to_string(), 2)


def ones(L, layout=U8):
    return pack("1" * L, layout)


def test_onemax_fitness():
    assert onemax_fitness(ones(10)) == 10
    assert onemax_fitness(pack("1010011000", U8)) == 4
    assert onemax_fitness(new_zero(50, U8)) == 0


# --- config ---------------------------------------------------------------


@pytest.mark.parametrize(
    "kwargs, field",
    [
        ({"population_size": 3}, "population_size"),
        ({"population_size": 0}, "population_size"),
        ({"crossover_probability": 1.5}, "crossover_probability"),
        ({"mutation_probability": -0.1}, "mutation_probability"),
        ({"chromosome_length": 0}, "chromosome_length"),
        ({"chromosome_length": 300, "layout": U8}, "chromosome_length"),
        ({"selection": "rank"}, "selection"),
        ({"tournament_size": 1}, "tournament_size"),
        ({"elitism_count": 100}, "elitism_count"),
        ({"max_generations": 0}, "max_generations"),
    ],
)
def test_config_errors_name_field(kwargs, field):
    with pytest.raises(ConfigurationError) as info:
        GAConfig(**kwargs).validate()
    assert info.value.field == field
    assert field in str(info.value)


def test_default_pm_is_one_over_length():
    assert GAConfig(chromosome_length=64).pm == 1 / 64


# --- initialization -------------------------------------------------------


def test_initialize_population():
    cfg = GAConfig(population_size=4, chromosome_length=10, layout=U8)
    pop = initialize_population(cfg, random.Random(5))
    assert len(pop) == 4 and pop.generation == 0
    assert all(m.chromosome.elements[0] == 10 for m in pop)
    assert all(m.fitness == m.chromosome.count_ones() for m in pop)
    again = initialize_population(cfg, random.Random(5))
    assert pop.chromosomes == again.chromosomes


def test_initialize_rejects_odd_population():
    with pytest.raises(ConfigurationError):
        initialize_population(GAConfig(population_size=3), random.Random(0))


# --- selection ------------------------------------------------------------


def test_roulette_single_positive_member():
    pop = population_of([0, 0, 1, 0, 0, 0])
    rng = random.Random(1)
    for _ in range(500):
        a, b = select_pair(pop, "roulette", rng)
        assert member_index(pop, a) == member_index(pop, b) == 2


def test_roulette_zero_total():
    pop = population_of([0, 0, 0, 0])
    with pytest.raises(DegenerateFitnessError):
        select_pair(pop, "roulette", random.Random(0))
    a, b = select_pair(pop, "roulette", random.Random(0), fallback_uniform=True)
    assert a.length == 16


def test_tournament_full_size_picks_best():
    fit = [3, 9, 1, 4, 7, 2, 8, 5]
    pop = population_of(fit)
    rng = random.Random(2)
    for _ in range(500):
        a, b = select_pair(pop, "tournament", rng, tournament_size=len(fit))
        assert member_index(pop, a) == member_index(pop, b) == 1


def test_select_pair_returns_copies():
    pop = population_of([1, 1])
    a, _ = select_pair(pop, "tournament", random.Random(0))
    a.flip(0)
    assert all(m.chromosome.get(0) == 0 for m in pop)


@pytest.mark.parametrize("method, tsize", [("tournament", 2), ("tournament", 3), ("roulette", 2)])
def test_uniform_fitness_selection_frequencies(method, tsize):
    N, draws = 10, 10**4
    pop = population_of([5] * N)
    rng = random.Random(77)
    counts = Counter()
    for _ in range(draws // 2):
        for c in select_pair(pop, method, rng, tournament_size=tsize):
            counts[member_index(pop, c)] += 1
    p = 1 / N
    sigma = math.sqrt(p * (1 - p) / draws)
    for i in range(N):
        assert abs(counts[i] / draws - p) <= 3 * sigma, (i, counts[i])


def test_roulette_proportional():
    fit = [1, 2, 3, 4]
    pop = population_of(fit)
    rng = random.Random(11)
    counts = Counter()
    draws = 20000
    for _ in range(draws // 2):
        for c in select_pair(pop, "roulette", rng):
            counts[member_index(pop, c)] += 1
    observed = [counts[i] for i in range(4)]
    expected = [draws * f / sum(fit) for f in fit]
    assert stats.chisquare(observed, expected).pvalue > 0.01


# --- crossover ------------------------------------------------------------


def test_crossover_pc_zero_is_identity():
    rng = random.Random(0)
    a, b = ones(20), new_zero(20, U8)
    for _ in range(100):
        crossover(a, b, 0.0, rng)
    assert a == ones(20) and b == new_zero(20, U8)


def test_crossover_complementary_prefix():
    rng = random.Random(1)
    for _ in range(200):
        a, b = crossover(ones(20), new_zero(20, U8), 1.0, rng)
        sa, sb = a.to_string(), b.to_string()
        assert all(x != y for x, y in zip(sa, sb))
        cut = len(sa) - len(sa.lstrip("0"))
        assert cut >= 1
        assert sa == "0" * cut + "1" * (20 - cut)
        assert sb == "1" * cut + "0" * (20 - cut)


def test_crossover_incompatible():
    with pytest.raises(IncompatibleChromosomeError):
        crossover(ones(4), ones(5), 0.0, random.Random(0))


def test_crossover_cut_uniformity():
    L, trials = 16, 10**4
    rng = random.Random(99)
    cuts = Counter()
    for _ in range(trials):
        a, _ = crossover(ones(L), new_zero(L, U8), 1.0, rng)
        cuts[L - 1 - a.count_ones()] += 1
    observed = [cuts[k] for k in range(L)]
    assert sum(observed) == trials
    assert stats.chisquare(observed).pvalue > 0.01


# --- mutation -------------------------------------------------------------


def test_mutate_extremes():
    rng = random.Random(0)
    c = pack("1010011000", U8)
    assert mutate(c.copy(), 0.0, rng) == c
    assert mutate(c.copy(), 1.0, rng).to_string() == "0101100111"


def test_mutation_count_mean_and_variance():
    L, pm, samples = 1000, 0.01, 1000
    rng = random.Random(31)
    layout = LayoutSpec(64)
    flips = [mutate(new_zero(L, layout), pm, rng).count_ones() for _ in range(samples)]
    mean = sum(flips) / samples
    var = sum((f - mean) ** 2 for f in flips) / (samples - 1)
    # per-chromosome count is Binomial(L, pm)
    assert abs(mean - L * pm) <= 3 * math.sqrt(L * pm * (1 - pm) / samples)
    assert var == pytest.approx(L * pm * (1 - pm), rel=0.15)


def test_mutation_positions_uniform():
    # gap sampling must not favour any position
    L, pm, samples = 40, 0.1, 5000
    rng = random.Random(5)
    hits = [0] * L
    for _ in range(samples):
        s = mutate(new_zero(L, U8), pm, rng).to_string()
        for k, ch in enumerate(s):
            hits[k] += ch == "1"
    assert stats.chisquare(hits).pvalue > 0.01
    assert sum(hits) / (L * samples) == pytest.approx(pm, rel=0.05)


def test_mutation_matches_per_allele_loop_distribution():
    """Count distribution vs the literal one-draw-per-allele loop."""
    L, pm, samples = 60, 0.05, 4000
    rng_a, rng_b = random.Random(1), random.Random(2)
    fast = [mutate(new_zero(L, U8), pm, rng_a).count_ones() for _ in range(samples)]
    slow = [sum(rng_b.random() < pm for _ in range(L)) for _ in range(samples)]
    assert stats.ks_2samp(fast, slow).pvalue > 0.01


# --- generational loop ----------------------------------------------------


def test_run_selection_only_produces_copies():
    cfg = GAConfig(population_size=20, chromosome_length=30, layout=U8,
                   crossover_probability=0.0, mutation_probability=0.0,
                   max_generations=1, seed=4)
    init = initialize_population(cfg, random.Random(cfg.seed))
    result = run(cfg)
    parents = {c.key() for c in init.chromosomes}
    assert all(c.key() in parents for c in result.final_population.chromosomes)


@settings(max_examples=25)
@given(st.integers(0, 10**6), st.sampled_from(["tournament", "roulette"]))
def test_selection_only_submultiset_each_generation(seed, selection):
    cfg = GAConfig(population_size=12, chromosome_length=20, layout=LayoutSpec(8, True),
                   crossover_probability=0.0, mutation_probability=0.0, selection=selection,
                   roulette_fallback_uniform=True, max_generations=1, seed=seed)
    rng = random.Random(seed)
    prev = initialize_population(cfg, rng)
    for _ in range(5):
        nxt = _next_generation(prev, cfg, onemax_fitness, rng)
        assert len(nxt) == 12
        assert {c.key() for c in nxt.chromosomes} <= {c.key() for c in prev.chromosomes}
        prev = nxt


def test_run_is_deterministic():
    cfg = GAConfig(population_size=30, chromosome_length=40, max_generations=25, seed=7)
    a, b = run(cfg), run(cfg)
    assert a.stats == b.stats
    assert a.best.chromosome == b.best.chromosome


def test_run_invariants_each_generation():
    layout = LayoutSpec(16, True)
    cfg = GAConfig(population_size=16, chromosome_length=45, layout=layout,
                   elitism_count=2, max_generations=30, seed=3)
    seen = []

    def fitness(c):
        assert c.is_canonical() and c.elements[0] == 45 and c.layout == layout
        seen.append(1)
        return onemax_fitness(c)

    result = run(cfg, fitness)
    assert len(result.stats) == 31
    assert [s.generation for s in result.stats] == list(range(31))
    assert len(seen) == 16 * 31
    assert len(result.final_population) == 16
    assert result.best.fitness == max(s.best_fitness for s in result.stats)


@settings(max_examples=15)
@given(st.integers(0, 10**6), st.integers(1, 3), st.sampled_from(["tournament", "roulette"]))
def test_elitism_best_fitness_non_decreasing(seed, e, selection):
    cfg = GAConfig(population_size=20, chromosome_length=50, elitism_count=e,
                   selection=selection, crossover_probability=0.9, mutation_probability=0.05,
                   max_generations=40, seed=seed)
    best = [s.best_fitness for s in run(cfg).stats]
    assert all(b2 >= b1 for b1, b2 in zip(best, best[1:]))


def test_target_fitness_stops_early():
    cfg = GAConfig(population_size=40, chromosome_length=32, target_fitness=28,
                   elitism_count=1, max_generations=500, seed=1)
    result = run(cfg)
    assert result.best.fitness >= 28
    assert len(result.stats) < 501


def test_roulette_degenerate_surfaces():
    cfg = GAConfig(population_size=4, chromosome_length=8, layout=U8,
                   selection="roulette", max_generations=2, seed=0)
    with pytest.raises(DegenerateFitnessError):
        run(cfg, lambda c: 0)
    cfg.roulette_fallback_uniform = True
    assert run(cfg, lambda c: 0).best.fitness == 0


def test_custom_fitness():
    # fitness: number of zeros, so the GA should drive towards all zeros
    cfg = GAConfig(population_size=40, chromosome_length=32, elitism_count=1,
                   max_generations=80, seed=2)
    result = run(cfg, lambda c: c.length - c.count_ones())
    assert result.best.fitness >= 30


def test_on_generation_callback_sees_every_population():
    seen = []
    cfg = GAConfig(population_size=8, chromosome_length=16, max_generations=6, seed=0)
    result = run(cfg, on_generation=lambda p: seen.append((p.generation, len(p))))
    assert seen == [(g, 8) for g in range(7)]
    assert run(cfg).stats == result.stats
