"""
Metadata-prefixed bit-packed binary chromosome.

A chromosome of ``L`` alleles is stored as ``m`` machine words of width ``W``.
Word 0 holds ``L``. The remaining words hold one allele per bit, using the
``n`` least significant bits of each word (``n = W`` for unsigned words,
``n = W - 1`` for signed words, whose sign bit is never used).

Alleles are laid out left to right. With ``offset = (n - L % n) % n`` the
allele ``k`` lives at global bit ``g = offset + k``, i.e. in word
``g // n + 1`` at usable position ``g % n``, where usable position 0 is the
most significant usable bit. The ``offset`` padding bits therefore sit at
the top of word 1::

    L = 10, unsigned 8-bit, alleles 1010011000

    word 0    word 1      word 2
    10        XXXXXX10    10011000

Every bit that does not carry an allele is kept at zero, so two chromosomes
hold the same alleles iff their words are equal.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import (
    CapacityExceededError,
    IncompatibleChromosomeError,
    InvalidCapacityError,
    InvalidLengthError,
)

WIDTHS = (8, 16, 32, 64)
DEFAULT_CAPACITY = 2**16


@dataclass(frozen=True)
class LayoutSpec:
    element_width: int = 64
    signed: bool = False

    def __post_init__(self):
        if self.element_width not in WIDTHS:
            raise ValueError(
                f"element_width must be one of {WIDTHS}, got {self.element_width}"
            )

    @property
    def usable_bits(self) -> int:
        return self.element_width - 1 if self.signed else self.element_width

    @property
    def metadata_cap(self) -> int:
        """Largest positive value a single element can hold."""
        return (1 << self.usable_bits) - 1

    @property
    def usable_mask(self) -> int:
        return (1 << self.usable_bits) - 1

    @property
    def name(self) -> str:
        return f"{'s' if self.signed else 'u'}{self.element_width}"

    @classmethod
    def parse(cls, text: str) -> "LayoutSpec":
        """Parse ``u8``, ``s16``, ``u64`` ... into a layout."""
        text = text.strip().lower()
        if len(text) < 2 or text[0] not in "su" or not text[1:].isdigit():
            raise ValueError(f"bad layout {text!r}, expected e.g. 'u8' or 's32'")
        return cls(int(text[1:]), text[0] == "s")

    def __str__(self):
        return self.name


ALL_LAYOUTS = tuple(LayoutSpec(w, s) for s in (False, True) for w in WIDTHS)


@dataclass(frozen=True)
class BitAddress:
    """Location of one allele: word index (>= 1) and usable position."""

    element_index: int
    usable_offset: int

    def shift(self, layout: LayoutSpec) -> int:
        """Bit position counted from the least significant bit of the word."""
        return layout.usable_bits - 1 - self.usable_offset


def _check_length(length: int) -> None:
    if length < 1:
        raise InvalidLengthError(f"chromosome length must be >= 1, got {length}")


def calculate_array_dim(length: int, layout: LayoutSpec) -> int:
    """Number of words (metadata included) needed for ``length`` alleles."""
    _check_length(length)
    n = layout.usable_bits
    return 1 + -(-length // n)


def padding_offset(length: int, layout: LayoutSpec) -> int:
    n = layout.usable_bits
    return (n - length % n) % n


def max_chromosome_length(layout: LayoutSpec, capacity: int = DEFAULT_CAPACITY) -> int:
    """Longest chromosome storable in an array of at most ``capacity`` words.

    Bounded both by the metadata word (``L`` must fit in one element) and by
    the allele bits available in the remaining ``capacity - 1`` words.
    """
    if capacity < 2:
        raise InvalidCapacityError(f"capacity must be >= 2, got {capacity}")
    return min(layout.metadata_cap, layout.usable_bits * (capacity - 1))


def memory_utilization(length: int, layout: LayoutSpec) -> Fraction:
    """Fraction of allocated bits (metadata word included) carrying alleles."""
    m = calculate_array_dim(length, layout)
    return Fraction(length, m * layout.element_width)


class PackedChromosome:
    """Bit-packed chromosome with its length stored in word 0.

    Methods named ``set``, ``flip`` and ``exchange_prefix`` mutate in place and
    return ``self``; the module-level functions of the same names work on
    copies.
    """

    __slots__ = ("layout", "length", "elements", "_offset", "_n")

    def __init__(self, layout: LayoutSpec, length: int, elements: Sequence[int] | None = None):
        _check_length(length)
        if length > layout.metadata_cap:
            raise CapacityExceededError(
                f"length {length} does not fit in a {layout} metadata element "
                f"(max {layout.metadata_cap})"
            )
        self.layout = layout
        self.length = length
        self._n = layout.usable_bits
        self._offset = padding_offset(length, layout)
        m = calculate_array_dim(length, layout)
        if elements is None:
            self.elements = [length] + [0] * (m - 1)
        else:
            elements = list(elements)
            if len(elements) != m or elements[0] != length:
                raise ValueError(
                    f"expected {m} elements with elements[0] == {length}, got {elements[:1]}.. "
                    f"({len(elements)} elements)"
                )
            self.elements = elements
            if not self.is_canonical():
                raise ValueError("non-allele bits must be zero")

    @property
    def offset(self) -> int:
        return self._offset

    def address(self, k: int) -> BitAddress:
        self._check_index(k)
        g = self._offset + k
        return BitAddress(g // self._n + 1, g % self._n)

    def _check_index(self, k: int) -> None:
        if not 0 <= k < self.length:
            raise IndexError(f"allele index {k} out of range for length {self.length}")

    def _locate(self, k: int) -> tuple[int, int]:
        self._check_index(k)
        g = self._offset + k
        return g // self._n + 1, self._n - 1 - g % self._n

    def get(self, k: int) -> int:
        i, shift = self._locate(k)
        return (self.elements[i] >> shift) & 1

    def set(self, k: int, value: int) -> "PackedChromosome":
        if value not in (0, 1):
            raise ValueError(f"allele value must be 0 or 1, got {value!r}")
        i, shift = self._locate(k)
        if value:
            self.elements[i] |= 1 << shift
        else:
            self.elements[i] &= ~(1 << shift)
        return self

    def flip(self, k: int) -> "PackedChromosome":
        i, shift = self._locate(k)
        self.elements[i] ^= 1 << shift
        return self

    def exchange_prefix(self, other: "PackedChromosome", k: int) -> "PackedChromosome":
        """Swap alleles ``0..k`` (inclusive) with ``other`` in place."""
        check_compatible(self, other)
        i, shift = self._locate(k)
        a, b = self.elements, other.elements
        # whole words before the cut word; padding bits are zero on both sides
        a[1:i], b[1:i] = b[1:i], a[1:i]
        high = self.layout.usable_mask & ~((1 << shift) - 1)
        diff = (a[i] ^ b[i]) & high
        a[i] ^= diff
        b[i] ^= diff
        return self

    def count_ones(self) -> int:
        return sum(w.bit_count() for w in self.elements[1:])

    def to_bits(self) -> list[int]:
        return [int(ch) for ch in self.to_string()]

    def to_string(self) -> str:
        n = self._n
        body = "".join(format(w, f"0{n}b") for w in self.elements[1:])
        return body[self._offset:]

    def is_canonical(self) -> bool:
        els = self.elements
        if els[0] != self.length:
            return False
        mask = self.layout.usable_mask
        if any(w & ~mask for w in els[1:]):
            return False
        return not els[1] >> (self._n - self._offset)

    def copy(self) -> "PackedChromosome":
        clone = PackedChromosome.__new__(PackedChromosome)
        clone.layout = self.layout
        clone.length = self.length
        clone.elements = self.elements.copy()
        clone._offset = self._offset
        clone._n = self._n
        return clone

    def key(self) -> tuple:
        """Hashable snapshot of the chromosome."""
        return (self.layout, tuple(self.elements))

    def __len__(self):
        return self.length

    def __eq__(self, other):
        if not isinstance(other, PackedChromosome):
            return NotImplemented
        return self.layout == other.layout and self.elements == other.elements

    __hash__ = None

    def __repr__(self):
        return f"PackedChromosome({self.layout}, L={self.length}, elements={self.elements})"


def check_compatible(c1: PackedChromosome, c2: PackedChromosome) -> None:
    if c1.layout != c2.layout or c1.length != c2.length:
        raise IncompatibleChromosomeError(
            f"{c1.layout}/L={c1.length} and {c2.layout}/L={c2.length} are not compatible"
        )


def new_zero(length: int, layout: LayoutSpec) -> PackedChromosome:
    return PackedChromosome(layout, length)


def new_random(length: int, layout: LayoutSpec, rng: random.Random) -> PackedChromosome:
    """Uniformly random alleles, non-allele bits masked off."""
    c = PackedChromosome(layout, length)
    n, w = layout.usable_bits, layout.element_width
    mask_other = (1 << n) - 1
    mask_first = mask_other >> c.offset
    els = c.elements
    els[1] = rng.getrandbits(w) & mask_first
    for i in range(2, len(els)):
        els[i] = rng.getrandbits(w) & mask_other
    return c


def pack(bits: Iterable[int] | str, layout: LayoutSpec) -> PackedChromosome:
    """Build a chromosome from a bit sequence or a '0'/'1' string, allele 0 first."""
    text = bits if isinstance(bits, str) else "".join(_bit_char(b) for b in bits)
    if text.strip("01"):
        raise ValueError("bit string may only contain '0' and '1'")
    c = PackedChromosome(layout, len(text))
    n = layout.usable_bits
    padded = "0" * c.offset + text
    for i in range(0, len(padded), n):
        c.elements[i // n + 1] = int(padded[i:i + n], 2)
    return c


def _bit_char(b) -> str:
    if b == 1:
        return "1"
    if b == 0:
        return "0"
    raise ValueError(f"allele value must be 0 or 1, got {b!r}")


def unpack(c: PackedChromosome) -> list[int]:
    return c.to_bits()


def get_allele(c: PackedChromosome, k: int) -> int:
    return c.get(k)


def set_allele(c: PackedChromosome, k: int, value: int) -> PackedChromosome:
    return c.copy().set(k, value)


def flip_allele(c: PackedChromosome, k: int) -> PackedChromosome:
    return c.copy().flip(k)


def exchange_prefix(
    c1: PackedChromosome, c2: PackedChromosome, k: int
) -> tuple[PackedChromosome, PackedChromosome]:
    a, b = c1.copy(), c2.copy()
    a.exchange_prefix(b, k)
    return a, b
