"""Tiny GF(2) linear algebra on int bitmasks (bit i = coordinate i)."""

from __future__ import annotations

from typing import Iterable, Optional


def _lead(x: int) -> int:
    return x.bit_length() - 1


class Echelon:
    """Row space in echelon form; supports rank queries and reduction."""

    def __init__(self):
        self.pivots: dict[int, int] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: int) -> int:
        """Canonical representative of vec modulo the row space.

        Every bit position owned by a pivot is eliminated, so two vectors in
        the same coset reduce to the same representative.
        """
        out = 0
        while vec:
            lead = _lead(vec)
            hit = self.pivots.get(lead)
            if hit is None:
                out |= 1 << lead
                vec ^= 1 << lead
            else:
                vec ^= hit
        return out

    def add(self, vec: int) -> bool:
        """Insert vec; True if it enlarged the space."""
        while vec:
            hit = self.pivots.get(_lead(vec))
            if hit is None:
                self.pivots[_lead(vec)] = vec
                return True
            vec ^= hit
        return False


def rank_of(rows: Iterable[int]) -> int:
    ech = Echelon()
    for r in rows:
        ech.add(r)
    return ech.rank


class TrackedBasis:
    """Echelon basis remembering how each pivot combines the added vectors."""

    def __init__(self):
        self.pivots: dict[int, tuple[int, int]] = {}
        self.n_added = 0

    def _sweep(self, vec: int, comb: int) -> tuple[int, int]:
        while vec:
            hit = self.pivots.get(_lead(vec))
            if hit is None:
                break
            vec ^= hit[0]
            comb ^= hit[1]
        return vec, comb

    def add(self, vec: int) -> bool:
        idx = self.n_added
        self.n_added += 1
        vec, comb = self._sweep(vec, 1 << idx)
        if vec:
            self.pivots[_lead(vec)] = (vec, comb)
            return True
        return False

    def express(self, vec: int) -> Optional[int]:
        """Combination (bitmask over added indices) equal to vec, if any."""
        vec, comb = self._sweep(vec, 0)
        return None if vec else comb


def nullspace_columns(cols: list[int]) -> list[int]:
    """Kernel basis of the matrix with the given columns.

    Each returned vector is a bitmask over column indices whose XOR of
    columns vanishes.
    """
    piv: dict[int, tuple[int, int]] = {}
    out = []
    for j, col in enumerate(cols):
        comb = 1 << j
        while col:
            hit = piv.get(_lead(col))
            if hit is None:
                break
            col ^= hit[0]
            comb ^= hit[1]
        if col:
            piv[_lead(col)] = (col, comb)
        else:
            out.append(comb)
    return out


def nullspace_rows(rows: list[int], width: int) -> list[int]:
    """Kernel basis of the linear system given by constraint rows."""
    # reduced row echelon form: every pivot column occurs in one row only
    pivots: dict[int, int] = {}
    for r in rows:
        while r:
            lead = _lead(r)
            hit = pivots.get(lead)
            if hit is None:
                break
            r ^= hit
        if not r:
            continue
        lead = _lead(r)
        for k, row in pivots.items():
            if (row >> lead) & 1:
                pivots[k] = row ^ r
        pivots[lead] = r
    basis = []
    for f in range(width):
        if f in pivots:
            continue
        vec = 1 << f
        for lead, row in pivots.items():
            if (row >> f) & 1:
                vec |= 1 << lead
        basis.append(vec)
    return basis
