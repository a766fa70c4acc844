"""
Generational genetic algorithm over packed chromosomes.

Each generation draws ``N/2`` parent pairs from the current population
(parents are sampled with replacement across draws), applies one-point prefix crossover with probability
``pc`` and per-allele bit-flip mutation with probability ``pm`` to both
children, and replaces the whole population with the ``N`` children. With
``elitism_count = e > 0`` the ``e`` best parents overwrite the ``e`` worst
children.
"""

from __future__ import annotations

import bisect
import itertools
import math
import random
from dataclasses import dataclass, field
from typing import Callable

from .errors import ConfigurationError, DegenerateFitnessError
from .packed import LayoutSpec, PackedChromosome, check_compatible, new_random

FitnessFunction = Callable[[PackedChromosome], float]

SELECTION_METHODS = ("tournament", "roulette")


def onemax_fitness(c: PackedChromosome) -> int:
    return c.count_ones()


@dataclass
class GAConfig:
    population_size: int = 100
    crossover_probability: float = 0.9
    mutation_probability: float | None = None  # None means 1/L
    chromosome_length: int = 128
    layout: LayoutSpec = field(default_factory=LayoutSpec)
    selection: str = "tournament"
    tournament_size: int = 2
    roulette_fallback_uniform: bool = False
    elitism_count: int = 0
    max_generations: int = 300
    target_fitness: float | None = None
    seed: int = 0

    @property
    def pm(self) -> float:
        if self.mutation_probability is None:
            return 1.0 / self.chromosome_length
        return self.mutation_probability

    def validate(self) -> "GAConfig":
        N = self.population_size
        if not isinstance(N, int) or N < 2 or N % 2:
            raise ConfigurationError("population_size", f"must be an even integer >= 2, got {N}")
        if not 0.0 <= self.crossover_probability <= 1.0:
            raise ConfigurationError(
                "crossover_probability", f"must be in [0, 1], got {self.crossover_probability}"
            )
        L = self.chromosome_length
        if not isinstance(L, int) or L < 1:
            raise ConfigurationError("chromosome_length", f"must be >= 1, got {L}")
        if L > self.layout.metadata_cap:
            raise ConfigurationError(
                "chromosome_length",
                f"{L} exceeds the {self.layout} metadata cap {self.layout.metadata_cap}",
            )
        if not 0.0 <= self.pm <= 1.0:
            raise ConfigurationError("mutation_probability", f"must be in [0, 1], got {self.pm}")
        if self.selection not in SELECTION_METHODS:
            raise ConfigurationError(
                "selection", f"must be one of {SELECTION_METHODS}, got {self.selection!r}"
            )
        if self.selection == "tournament" and not 2 <= self.tournament_size <= N:
            raise ConfigurationError(
                "tournament_size",
                f"must satisfy 2 <= t <= population_size, got {self.tournament_size}",
            )
        if not 0 <= self.elitism_count < N:
            raise ConfigurationError(
                "elitism_count", f"must satisfy 0 <= e < population_size, got {self.elitism_count}"
            )
        if self.max_generations < 1:
            raise ConfigurationError(
                "max_generations", f"must be >= 1, got {self.max_generations}"
            )
        return self


@dataclass
class Member:
    chromosome: PackedChromosome
    fitness: float


@dataclass
class Population:
    generation: int
    members: list[Member]

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def chromosomes(self) -> list[PackedChromosome]:
        return [m.chromosome for m in self.members]

    def best(self) -> Member:
        return max(self.members, key=lambda m: m.fitness)

    def mean_fitness(self) -> float:
        return math.fsum(m.fitness for m in self.members) / len(self.members)


@dataclass(frozen=True)
class GenerationStats:
    generation: int
    best_fitness: float
    mean_fitness: float


@dataclass
class RunResult:
    best: Member
    stats: list[GenerationStats]
    final_population: Population

    @property
    def best_so_far(self) -> list[float]:
        return list(itertools.accumulate((s.best_fitness for s in self.stats), max))


def _evaluate(chromosomes, fitness: FitnessFunction) -> list[Member]:
    return [Member(c, fitness(c)) for c in chromosomes]


def initialize_population(
    cfg: GAConfig, rng: random.Random, fitness: FitnessFunction = onemax_fitness
) -> Population:
    cfg.validate()
    chroms = [
        new_random(cfg.chromosome_length, cfg.layout, rng) for _ in range(cfg.population_size)
    ]
    return Population(0, _evaluate(chroms, fitness))


def _tournament(members: list[Member], size: int, rng: random.Random) -> Member:
    n = len(members)
    if size == 2:
        i = rng.randrange(n)
        j = rng.randrange(n - 1)
        if j >= i:
            j += 1
        a, b = members[i], members[j]
        return b if b.fitness > a.fitness else a
    best = None
    for i in rng.sample(range(n), size):
        if best is None or members[i].fitness > best.fitness:
            best = members[i]
    return best


def select_pair(
    population: Population,
    method: str,
    rng: random.Random,
    tournament_size: int = 2,
    fallback_uniform: bool = False,
    _cumulative: list[float] | None = None,
) -> tuple[PackedChromosome, PackedChromosome]:
    """Pick two parents independently and return copies of them.

    Tournament: best of ``tournament_size`` distinct members drawn uniformly,
    earliest draw wins ties. Roulette: probability proportional to fitness.
    """
    members = population.members
    if method == "tournament":
        a = _tournament(members, tournament_size, rng)
        b = _tournament(members, tournament_size, rng)
    elif method == "roulette":
        cum = _cumulative if _cumulative is not None else list(
            itertools.accumulate(m.fitness for m in members)
        )
        total = cum[-1]
        if total <= 0:
            if not fallback_uniform:
                raise DegenerateFitnessError(
                    "roulette wheel selection needs a positive total fitness"
                )
            a = members[rng.randrange(len(members))]
            b = members[rng.randrange(len(members))]
        else:
            # bisect_right skips zero-width slots
            last = len(members) - 1
            a = members[min(bisect.bisect_right(cum, rng.random() * total), last)]
            b = members[min(bisect.bisect_right(cum, rng.random() * total), last)]
    else:
        raise ValueError(f"unknown selection method {method!r}")
    return a.chromosome.copy(), b.chromosome.copy()


def crossover(
    c1: PackedChromosome, c2: PackedChromosome, pc: float, rng: random.Random
) -> tuple[PackedChromosome, PackedChromosome]:
    """One-point crossover in place; the cut allele is uniform over ``[0, L)``."""
    check_compatible(c1, c2)
    if rng.random() < pc:
        c1.exchange_prefix(c2, rng.randrange(c1.length))
    return c1, c2


def mutate(c: PackedChromosome, pm: float, rng: random.Random) -> PackedChromosome:
    """Flip each allele independently with probability ``pm`` (in place).

    Instead of one uniform draw per allele, the gaps between flipped alleles
    are drawn from the matching geometric distribution, which gives the same
    joint distribution at about ``L * pm`` draws.
    """
    L = c.length
    if pm <= 0.0:
        return c
    if pm >= 1.0:
        for k in range(L):
            c.flip(k)
        return c
    log_q = math.log1p(-pm)
    k = -1
    while True:
        k += 1 + int(math.log(1.0 - rng.random()) / log_q)
        if k >= L:
            return c
        c.flip(k)


def _next_generation(
    pop: Population, cfg: GAConfig, fitness: FitnessFunction, rng: random.Random
) -> Population:
    members = pop.members
    cum = None
    if cfg.selection == "roulette":
        cum = list(itertools.accumulate(m.fitness for m in members))
    pc, pm = cfg.crossover_probability, cfg.pm
    children = []
    for _ in range(cfg.population_size // 2):
        c1, c2 = select_pair(
            pop, cfg.selection, rng, cfg.tournament_size, cfg.roulette_fallback_uniform, cum
        )
        crossover(c1, c2, pc, rng)
        children.append(mutate(c1, pm, rng))
        children.append(mutate(c2, pm, rng))
    offspring = _evaluate(children, fitness)
    e = cfg.elitism_count
    if e:
        elite = sorted(members, key=lambda m: m.fitness, reverse=True)[:e]
        worst = sorted(range(len(offspring)), key=lambda i: offspring[i].fitness)[:e]
        for i, m in zip(worst, elite):
            offspring[i] = Member(m.chromosome.copy(), m.fitness)
    return Population(pop.generation + 1, offspring)


def _stats(pop: Population) -> GenerationStats:
    return GenerationStats(pop.generation, pop.best().fitness, pop.mean_fitness())


def run(
    cfg: GAConfig,
    fitness: FitnessFunction = onemax_fitness,
    on_generation: Callable[[Population], None] | None = None,
) -> RunResult:
    """Evolve for ``max_generations`` or until ``target_fitness`` is reached.

    Returns the best individual observed in any generation and one
    :class:`GenerationStats` record per generation, generation 0 included.
    ``on_generation`` sees every population (read-only) as it is formed.
    """
    cfg.validate()
    rng = random.Random(cfg.seed)
    pop = initialize_population(cfg, rng, fitness)
    stats = [_stats(pop)]
    if on_generation:
        on_generation(pop)
    best = pop.best()
    best = Member(best.chromosome.copy(), best.fitness)
    target = cfg.target_fitness
    while pop.generation < cfg.max_generations:
        if target is not None and best.fitness >= target:
            break
        pop = _next_generation(pop, cfg, fitness, rng)
        stats.append(_stats(pop))
        if on_generation:
            on_generation(pop)
        top = pop.best()
        if top.fitness > best.fitness:
            best = Member(top.chromosome.copy(), top.fitness)
    return RunResult(best, stats, pop)
