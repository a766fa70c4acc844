"""
Naive one-byte-per-allele chromosome and the packed-vs-naive harness.

``NaiveChromosome`` deliberately uses no bit arithmetic at all so that it can
serve as an independent reference for :mod:`bitchrom.packed`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable

from .errors import CapacityExceededError, IncompatibleChromosomeError, InvalidLengthError
from .packed import LayoutSpec, PackedChromosome, calculate_array_dim, memory_utilization, pack

# Relative weights of the generated operations.
OP_WEIGHTS = {"set": 40, "get": 30, "flip": 20, "exchange": 10}


class NaiveChromosome:
    __slots__ = ("alleles",)

    def __init__(self, alleles: Iterable[int]):
        self.alleles = bytearray(alleles)
        if not self.alleles:
            raise InvalidLengthError("chromosome length must be >= 1")
        if any(a > 1 for a in self.alleles):
            raise ValueError("alleles must be 0 or 1")

    @classmethod
    def zeros(cls, length: int) -> "NaiveChromosome":
        if length < 1:
            raise InvalidLengthError(f"chromosome length must be >= 1, got {length}")
        return cls(bytes(length))

    @classmethod
    def random(cls, length: int, rng: random.Random) -> "NaiveChromosome":
        if length < 1:
            raise InvalidLengthError(f"chromosome length must be >= 1, got {length}")
        return cls(rng.randrange(2) for _ in range(length))

    @classmethod
    def from_string(cls, text: str) -> "NaiveChromosome":
        return cls(1 if ch == "1" else 0 if ch == "0" else 2 for ch in text)

    @property
    def length(self) -> int:
        return len(self.alleles)

    @property
    def nbytes(self) -> int:
        return len(self.alleles)

    def _check_index(self, k):
        if not 0 <= k < len(self.alleles):
            raise IndexError(f"allele index {k} out of range for length {len(self.alleles)}")

    def get(self, k: int) -> int:
        self._check_index(k)
        return self.alleles[k]

    def set(self, k: int, value: int) -> "NaiveChromosome":
        self._check_index(k)
        if value not in (0, 1):
            raise ValueError(f"allele value must be 0 or 1, got {value!r}")
        self.alleles[k] = value
        return self

    def flip(self, k: int) -> "NaiveChromosome":
        self._check_index(k)
        self.alleles[k] = 1 - self.alleles[k]
        return self

    def exchange_prefix(self, other: "NaiveChromosome", k: int) -> "NaiveChromosome":
        if len(other.alleles) != len(self.alleles):
            raise IncompatibleChromosomeError("chromosome lengths differ")
        self._check_index(k)
        for j in range(k + 1):
            self.alleles[j], other.alleles[j] = other.alleles[j], self.alleles[j]
        return self

    def count_ones(self) -> int:
        return sum(self.alleles)

    def to_bits(self) -> list[int]:
        return list(self.alleles)

    def to_string(self) -> str:
        return "".join("1" if a else "0" for a in self.alleles)

    def copy(self) -> "NaiveChromosome":
        return NaiveChromosome(self.alleles)

    def __len__(self):
        return len(self.alleles)

    def __eq__(self, other):
        if not isinstance(other, NaiveChromosome):
            return NotImplemented
        return self.alleles == other.alleles

    __hash__ = None

    def __repr__(self):
        return f"NaiveChromosome({self.to_string()!r})"


@dataclass
class Divergence:
    step: int
    operation: str
    packed: object
    naive: object


@dataclass
class DifferentialResult:
    layout: LayoutSpec
    length: int
    steps: int
    seed: int
    divergence: Divergence | None = None
    counts: dict = field(default_factory=dict)

    @property
    def equivalent(self) -> bool:
        return self.divergence is None

    @property
    def verdict(self) -> str:
        return "equivalent" if self.equivalent else "divergent"


def _observe(packed_pair, naive_pair, extra_p=None, extra_n=None):
    obs_p = (
        extra_p,
        [c.to_string() for c in packed_pair],
        [c.count_ones() for c in packed_pair],
        all(c.is_canonical() and c.elements[0] == c.length for c in packed_pair),
    )
    obs_n = (
        extra_n,
        [c.to_string() for c in naive_pair],
        [c.count_ones() for c in naive_pair],
        True,
    )
    return obs_p, obs_n


def differential_run(
    layout: LayoutSpec,
    length: int,
    steps: int,
    seed: int,
    fault_step: int | None = None,
) -> DifferentialResult:
    """Drive a packed pair and a naive pair through the same random operations.

    Both pairs start from the same random bit strings (packed side built with
    :func:`pack`). After every step the get result, both allele sequences,
    both one-counts and the packed canonical-form flag are compared.

    ``fault_step`` corrupts allele 0 of the first packed chromosome right after
    that step's operation, bypassing the API; it exists to check that the
    harness actually notices.
    """
    rng = random.Random(seed)
    bits_a = "".join(rng.choice("01") for _ in range(length))
    bits_b = "".join(rng.choice("01") for _ in range(length))
    packed_pair = [pack(bits_a, layout), pack(bits_b, layout)]
    naive_pair = [NaiveChromosome.from_string(bits_a), NaiveChromosome.from_string(bits_b)]
    result = DifferentialResult(layout, length, steps, seed)
    ops, weights = zip(*OP_WEIGHTS.items())

    obs_p, obs_n = _observe(packed_pair, naive_pair)
    if obs_p != obs_n:
        result.divergence = Divergence(0, "construct", obs_p, obs_n)
        return result

    for step in range(1, steps + 1):
        op = rng.choices(ops, weights)[0]
        result.counts[op] = result.counts.get(op, 0) + 1
        side = rng.randrange(2)
        k = rng.randrange(length)
        p, q = packed_pair[side], naive_pair[side]
        got_p = got_n = None
        if op == "set":
            v = rng.randrange(2)
            p.set(k, v)
            q.set(k, v)
        elif op == "get":
            got_p, got_n = p.get(k), q.get(k)
        elif op == "flip":
            p.flip(k)
            q.flip(k)
        else:
            packed_pair[0].exchange_prefix(packed_pair[1], k)
            naive_pair[0].exchange_prefix(naive_pair[1], k)
        if step == fault_step:
            pa = packed_pair[0]
            i, shift = pa._locate(0)
            pa.elements[i] ^= 1 << shift
        obs_p, obs_n = _observe(packed_pair, naive_pair, got_p, got_n)
        if obs_p != obs_n:
            result.divergence = Divergence(step, f"{op}(side={side}, k={k})", obs_p, obs_n)
            return result
    return result


@dataclass(frozen=True)
class MemoryReport:
    length: int
    layout: LayoutSpec
    naive_bytes: int
    packed_bytes: int
    utilization_naive: Fraction
    utilization_packed: Fraction

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.naive_bytes, self.packed_bytes)


def memory_report(length: int, layout: LayoutSpec) -> MemoryReport:
    """Analytic footprint of a chromosome in both representations."""
    m = calculate_array_dim(length, layout)
    if length > layout.metadata_cap:
        raise CapacityExceededError(
            f"length {length} exceeds the {layout} metadata cap {layout.metadata_cap}"
        )
    return MemoryReport(
        length=length,
        layout=layout,
        naive_bytes=length,
        packed_bytes=m * layout.element_width // 8,
        utilization_naive=Fraction(1, 8),
        utilization_packed=memory_utilization(length, layout),
    )


def packed_nbytes(c: PackedChromosome) -> int:
    return len(c.elements) * c.layout.element_width // 8
