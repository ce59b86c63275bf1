from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Tuple


def iter_bits(mask: int) -> Iterator[int]:
    """Yields the set bit positions of `mask` in ascending order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def lex_smaller(a: int, b: int) -> bool:
    """
    True when the sorted index sequence of `a` precedes that of `b`.

    For equal sizes this reduces to: the smallest index in the symmetric
    difference belongs to `a`. Shorter sets come first otherwise.
    """
    size_a, size_b = a.bit_count(), b.bit_count()
    if size_a != size_b:
        return size_a < size_b
    diff = a ^ b
    if not diff:
        return False
    return bool(a & diff & -diff)


@dataclass(frozen=True, slots=True)
class SpeciesSet:
    """
    Canonical set of species indices, stored as a bitmask.

    Iteration and `members` always yield indices in ascending order, so two
    equal sets serialize identically. Index validity is checked by the owning
    instance (`Instance.check_set`), not here.
    """

    mask: int = 0

    def __post_init__(self):
        if self.mask < 0:
            raise ValueError("species mask must be non-negative")

    @classmethod
    def of(cls, indices: Iterable[int]) -> "SpeciesSet":
        mask = 0
        for index in indices:
            if index < 0:
                raise ValueError(f"species index {index} is negative")
            mask |= 1 << index
        return cls(mask)

    @classmethod
    def empty(cls) -> "SpeciesSet":
        return cls(0)

    @property
    def members(self) -> Tuple[int, ...]:
        return tuple(iter_bits(self.mask))

    def __len__(self) -> int:
        return self.mask.bit_count()

    def __iter__(self) -> Iterator[int]:
        return iter_bits(self.mask)

    def __contains__(self, index: object) -> bool:
        return isinstance(index, int) and index >= 0 and bool(self.mask >> index & 1)

    def __bool__(self) -> bool:
        return self.mask != 0

    def __or__(self, other: "SpeciesSet") -> "SpeciesSet":
        return SpeciesSet(self.mask | other.mask)

    def __and__(self, other: "SpeciesSet") -> "SpeciesSet":
        return SpeciesSet(self.mask & other.mask)

    def __sub__(self, other: "SpeciesSet") -> "SpeciesSet":
        return SpeciesSet(self.mask & ~other.mask)

    def __le__(self, other: "SpeciesSet") -> bool:
        return self.mask & ~other.mask == 0

    def __lt__(self, other: "SpeciesSet") -> bool:
        return self <= other and self.mask != other.mask

    def __repr__(self) -> str:
        return f"SpeciesSet({list(self.members)})"
