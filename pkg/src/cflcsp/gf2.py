"""GF(2) linear algebra on bitmask-encoded rows.

A row vector over k flows is stored as a Python int whose bit j is
component j (bit 0 = flow 1). This keeps elimination branch-free and
fast for the small systems that clause evaluation produces.
"""

from __future__ import annotations

from typing import Sequence


def _to_mask(row: Sequence[int]) -> int:
    mask = 0
    for j, bit in enumerate(row):
        if bit not in (0, 1):
            raise ValueError(f"matrix entries must be 0 or 1, got {bit!r}")
        mask |= bit << j
    return mask


def solve_masks(rows: Sequence[int], target: int) -> int | None:
    """Find a subset of rows whose XOR equals target.

    Returns the subset as a bitmask over row indices (bit i set means
    row i is used), or None when target is outside the rowspan.
    """
    # Eliminate while tracking which original rows built each pivot.
    pivots: list[tuple[int, int]] = []  # (reduced row, combination mask)
    for i, row in enumerate(rows):
        comb = 1 << i
        for prow, pcomb in pivots:
            if row & (-prow & prow):  # shares the pivot bit
                row ^= prow
                comb ^= pcomb
        if row:
            pivots.append((row, comb))
    residue = target
    theta = 0
    for prow, pcomb in pivots:
        if residue & (-prow & prow):
            residue ^= prow
            theta ^= pcomb
    return theta if residue == 0 else None


def solvable_masks(rows: Sequence[int], target: int) -> bool:
    return solve_masks(rows, target) is not None


def gf2_solve(
    matrix: Sequence[Sequence[int]], target: Sequence[int]
) -> tuple[int, ...] | None:
    """Solve for a binary theta selecting rows of matrix whose XOR is target.

    matrix rows and target are 0/1 sequences of equal length. Returns
    theta as a 0/1 tuple (one entry per row), or None when no solution
    exists.
    """
    width = len(target)
    row_masks = []
    for r, row in enumerate(matrix):
        if len(row) != width:
            raise ValueError(
                f"row {r} has length {len(row)}, target has length {width}"
            )
        row_masks.append(_to_mask(row))
    target_mask = _to_mask(target)
    comb = solve_masks(row_masks, target_mask)
    if comb is None:
        return None
    return tuple((comb >> i) & 1 for i in range(len(row_masks)))


def xor_rows(matrix: Sequence[Sequence[int]], theta: Sequence[int]) -> tuple[int, ...]:
    """XOR-combine the rows selected by theta; used to verify witnesses."""
    if len(theta) != len(matrix):
        raise ValueError("theta length must equal the number of rows")
    width = len(matrix[0]) if matrix else 0
    acc = [0] * width
    for sel, row in zip(theta, matrix):
        if sel:
            for j, bit in enumerate(row):
                acc[j] ^= bit
    return tuple(acc)
