# ------------------------------------------------------------------------------
# File: core.py
#
# Purpose:
#     The necklace data model and the insertion rule of the necklace process.
#
# Conventions:
#     - A necklace is an immutable tuple of bead colours read as one full turn
#       starting at index 0. Gap i lies between bead i and bead (i+1) mod n.
#     - Text encoding uses the alphabet {W, B}: "WBB" is one white followed by
#       two blacks.
#     - Canonical form is the lexicographically minimal rotation of the
#       encoding W=1 / B=0. Reflections are not identified.
#     - Operations other than `is_valid` assume a valid necklace.
# ------------------------------------------------------------------------------

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Tuple

from necklace_lab.errors import InputError


class BeadColor(Enum):
    WHITE = "W"
    BLACK = "B"

    @property
    def bit(self) -> int:
        return 1 if self is BeadColor.WHITE else 0


W = BeadColor.WHITE
B = BeadColor.BLACK


@dataclass(frozen=True)
class Necklace:
    """Cyclic sequence of two-coloured beads."""

    beads: Tuple[BeadColor, ...]

    @classmethod
    def parse(cls, text: str) -> "Necklace":
        """Build a necklace from its {W, B} text encoding."""
        try:
            return cls(tuple(BeadColor(ch) for ch in text.strip().upper()))
        except ValueError as e:
            raise InputError(f"Necklace encoding must use only W/B, got '{text}'.") from e

    @property
    def size(self) -> int:
        return len(self.beads)

    def bits(self) -> Tuple[int, ...]:
        return tuple(b.bit for b in self.beads)

    def __len__(self) -> int:
        return len(self.beads)

    def __str__(self) -> str:
        return "".join(b.value for b in self.beads)


# ==============================================================================
# Process
# ==============================================================================


def start_necklace() -> Necklace:
    """The size-2 necklace [White, Black] every process starts from."""
    return Necklace((W, B))


def _check_gap(nk: Necklace, gap: int) -> None:
    if not 0 <= gap < nk.size:
        raise InputError(f"Gap index {gap} out of range for necklace of size {nk.size}.")


def gap_color(nk: Necklace, gap: int) -> BeadColor:
    """
    Colour of a bead inserted into `gap`.

    White iff bead `gap` and bead (gap+1) mod n are both black.
    """
    _check_gap(nk, gap)
    left = nk.beads[gap]
    right = nk.beads[(gap + 1) % nk.size]
    return W if left is B and right is B else B


def insert_at(nk: Necklace, gap: int) -> Necklace:
    """Return a new necklace with the process bead inserted into `gap`."""
    color = gap_color(nk, gap)
    return Necklace(nk.beads[: gap + 1] + (color,) + nk.beads[gap + 1 :])


def white_count(nk: Necklace) -> int:
    return sum(1 for b in nk.beads if b is W)


def white_gap_count(nk: Necklace) -> int:
    """Number of gaps that would receive a white bead (n - 2k on valid input)."""
    return sum(1 for g in range(nk.size) if gap_color(nk, g) is W)


# ==============================================================================
# Class membership and canonicalisation
# ==============================================================================


def is_valid(nk: Necklace) -> bool:
    """
    True iff `nk` belongs to Cyc(white x black+).

    Requires n >= 2, at least one white, at least one black, and no two
    whites cyclically adjacent.
    """
    n = nk.size
    if n < 2:
        return False
    whites = white_count(nk)
    if whites == 0 or whites == n:
        return False
    return not any(nk.beads[i] is W and nk.beads[(i + 1) % n] is W for i in range(n))


def canonical_form(nk: Necklace) -> Necklace:
    """Lexicographically minimal rotation under the encoding W=1, B=0."""
    n = nk.size
    if n == 0:
        return nk
    bits = nk.bits()
    best = min(range(n), key=lambda r: bits[r:] + bits[:r])
    return Necklace(nk.beads[best:] + nk.beads[:best])
