"""The sieve cuboid: a box of integer cells, half-open on top by default."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Region:
    """Axis-aligned box.  Lower faces are always included; each upper face
    is excluded unless its ``closed`` flag is set (demo fixtures close
    some faces, sieve regions close none)."""

    lo: tuple[int, int, int]
    hi: tuple[int, int, int]
    closed: tuple[bool, bool, bool] = (False, False, False)

    def __post_init__(self):
        if isinstance(self.closed, bool):
            object.__setattr__(self, "closed", (self.closed,) * 3)
        if any(h <= l for l, h in zip(self.lo, self.hi)):
            raise ValueError("empty region")

    @property
    def hi_cell(self) -> tuple[int, int, int]:
        """Largest integer cell per axis."""
        return tuple(h - (0 if c else 1) for h, c in zip(self.hi, self.closed))

    def spans(self) -> tuple[int, int, int]:
        return tuple(hc - l + 1 for l, hc in zip(self.lo, self.hi_cell))

    def cell_count(self) -> int:
        a, b, c = self.spans()
        return a * b * c

    def contains(self, x: int, y: int, z: int) -> bool:
        hc = self.hi_cell
        return (
            self.lo[0] <= x <= hc[0]
            and self.lo[1] <= y <= hc[1]
            and self.lo[2] <= z <= hc[2]
        )

    def corner_cells(self):
        """The 8 extreme integer cells."""
        hc = self.hi_cell
        return [
            (x, y, z)
            for x in (self.lo[0], hc[0])
            for y in (self.lo[1], hc[1])
            for z in (self.lo[2], hc[2])
        ]


def region_from_bits(h0: int, h1: int, h2: int) -> Region:
    """Standard sieve region [-2^h0, 2^h0) x [-2^h1, 2^h1) x [0, 2^h2).

    The cell count 2^(h0+h1+h2+2) must fit the 32-bit cell key.
    """
    if min(h0, h1, h2) < 1:
        raise ValueError("extent exponents must be >= 1")
    if h0 + h1 + h2 + 2 > 32:
        raise ValueError("region exceeds 32-bit cell keys (h0+h1+h2+2 > 32)")
    return Region((-(1 << h0), -(1 << h1), 0), (1 << h0, 1 << h1, 1 << h2))
