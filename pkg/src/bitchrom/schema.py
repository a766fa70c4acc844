"""Schema counting and the schema theorem growth estimate."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .errors import (
    DegenerateFitnessError,
    IncompatibleSchemaError,
    InvalidLengthError,
)
from .packed import PackedChromosome, pack

WILDCARD = "*"


@dataclass(frozen=True)
class Schema:
    pattern: str

    def __post_init__(self):
        if not self.pattern:
            raise InvalidLengthError("schema pattern must not be empty")
        bad = set(self.pattern) - {"0", "1", WILDCARD}
        if bad:
            raise ValueError(f"schema pattern may only contain 0, 1 and *, found {sorted(bad)}")

    @classmethod
    def wildcard(cls, length: int) -> "Schema":
        return cls(WILDCARD * length)

    def __len__(self):
        return len(self.pattern)

    @property
    def fixed_positions(self) -> list[int]:
        return [i for i, ch in enumerate(self.pattern) if ch != WILDCARD]

    @property
    def order(self) -> int:
        return len(self.pattern) - self.pattern.count(WILDCARD)

    @property
    def defining_length(self) -> int:
        fixed = self.fixed_positions
        if len(fixed) <= 1:
            return 0
        return fixed[-1] - fixed[0]

    def matches(self, c: PackedChromosome) -> bool:
        return matches(c, self)

    def __str__(self):
        return self.pattern


@dataclass(frozen=True)
class SchemaTheoremInputs:
    count_now: float
    schema_avg_fitness: float
    population_avg_fitness: float
    chromosome_length: int
    pc: float
    pm: float


def max_schemata_count(k: int, length: int) -> int:
    """Number of distinct schemata over a ``k``-letter alphabet plus ``*``."""
    if k < 1:
        raise ValueError(f"alphabet cardinality must be >= 1, got {k}")
    if length < 1:
        raise InvalidLengthError(f"length must be >= 1, got {length}")
    return (k + 1) ** length


def _check_probability(name, p):
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"{name} must be in [0, 1], got {p}")


def disruption_probability(schema: Schema, length: int, pc: float) -> float:
    """Chance that one-point crossover cuts inside the schema's fixed span."""
    if length < 2:
        raise InvalidLengthError(f"chromosome length must be >= 2, got {length}")
    _check_probability("pc", pc)
    delta = schema.defining_length
    if delta > length - 1:
        raise IncompatibleSchemaError(
            f"defining length {delta} exceeds L - 1 = {length - 1}"
        )
    return delta / (length - 1) * pc


def expected_schema_count(schema: Schema, inputs: SchemaTheoremInputs) -> float:
    """Expected number of schema members in the next generation.

    ``m * f(H)/f * (1 - delta/(L-1) * pc) * (1 - pm)**order``
    """
    if inputs.population_avg_fitness == 0:
        raise DegenerateFitnessError("population average fitness is zero")
    if inputs.count_now < 0:
        raise ValueError(f"count_now must be >= 0, got {inputs.count_now}")
    _check_probability("pm", inputs.pm)
    survive_crossover = 1.0 - disruption_probability(schema, inputs.chromosome_length, inputs.pc)
    survive_mutation = (1.0 - inputs.pm) ** schema.order
    selection = inputs.count_now * inputs.schema_avg_fitness / inputs.population_avg_fitness
    return selection * survive_crossover * survive_mutation


def _schema_masks(schema: Schema, like: PackedChromosome) -> tuple[list[int], list[int]]:
    # reuse the packed layout so matching is one AND/compare per word
    care = pack("".join("0" if ch == WILDCARD else "1" for ch in schema.pattern), like.layout)
    want = pack(schema.pattern.replace(WILDCARD, "0"), like.layout)
    return care.elements[1:], want.elements[1:]


def matches(c: PackedChromosome, schema: Schema) -> bool:
    if len(schema) != c.length:
        raise IncompatibleSchemaError(
            f"schema length {len(schema)} != chromosome length {c.length}"
        )
    care, want = _schema_masks(schema, c)
    return all(w & m == v for w, m, v in zip(c.elements[1:], care, want))


def count_matching(population: Iterable, schema: Schema) -> int:
    """Number of population members that are instances of ``schema``.

    Accepts a :class:`~bitchrom.ga.Population` or any iterable of chromosomes.
    """
    members = getattr(population, "chromosomes", population)
    count = 0
    masks = None
    for c in members:
        if len(schema) != c.length:
            raise IncompatibleSchemaError(
                f"schema length {len(schema)} != chromosome length {c.length}"
            )
        if masks is None or masks[0] != c.layout:
            masks = (c.layout, *_schema_masks(schema, c))
        _, care, want = masks
        if all(w & m == v for w, m, v in zip(c.elements[1:], care, want)):
            count += 1
    return count
