"""GF(256) arithmetic with reduction polynomial 0x11D.

Tables are built once at import and never mutated, so everything here is
safe to call concurrently.  Bulk payload math goes through numpy gathers on
the 256x256 product table; scalar helpers back the matrix algebra.
"""

from __future__ import annotations

import numpy as np

ORDER = 256
POLY = 0x11D  # x^8 + x^4 + x^3 + x^2 + 1, primitive

_exp = [0] * 510
_log = [0] * 256
_x = 1
for _i in range(255):
    _exp[_i] = _x
    _log[_x] = _i
    _x <<= 1
    if _x & 0x100:
        _x ^= POLY
for _i in range(255, 510):
    _exp[_i] = _exp[_i - 255]

EXP = tuple(_exp)
LOG = tuple(_log)

# MUL_TABLE[a, b] = a*b in the field; row/column 0 forced to zero since
# LOG[0] is meaningless.
_exp_arr = np.array(_exp, dtype=np.uint8)
_log_arr = np.array(_log, dtype=np.int64)
MUL_TABLE = _exp_arr[_log_arr[:, None] + _log_arr[None, :]]
MUL_TABLE[0, :] = 0
MUL_TABLE[:, 0] = 0
MUL_TABLE.setflags(write=False)

INV_TABLE = tuple(EXP[255 - LOG[a]] if a else 0 for a in range(256))


def add(a: int, b: int) -> int:
    return a ^ b


def mul(a: int, b: int) -> int:
    if a == 0 or b == 0:
        return 0
    return EXP[LOG[a] + LOG[b]]


def inv(a: int) -> int:
    if a == 0:
        raise ZeroDivisionError("0 has no multiplicative inverse in GF(256)")
    return INV_TABLE[a]


def div(a: int, b: int) -> int:
    if b == 0:
        raise ZeroDivisionError("division by 0 in GF(256)")
    if a == 0:
        return 0
    return EXP[LOG[a] + 255 - LOG[b]]


def mul_bytes(coeff: int, data: np.ndarray) -> np.ndarray:
    """coeff * data elementwise over uint8 arrays."""
    if coeff == 0:
        return np.zeros_like(data)
    if coeff == 1:
        return data.copy()
    return MUL_TABLE[coeff][data]


def addmul_bytes(acc: np.ndarray, coeff: int, data: np.ndarray) -> None:
    """acc ^= coeff * data, in place."""
    if coeff == 0:
        return
    if coeff == 1:
        np.bitwise_xor(acc, data, out=acc)
    else:
        np.bitwise_xor(acc, MUL_TABLE[coeff][data], out=acc)


def matrix_rank(rows: list[list[int]], cols: int) -> int:
    """Rank of a matrix over GF(256) by Gaussian elimination."""
    work = [list(r) for r in rows]
    rank = 0
    for c in range(cols):
        pivot = next((i for i in range(rank, len(work)) if work[i][c]), None)
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        scale = inv(work[rank][c])
        work[rank] = [mul(v, scale) for v in work[rank]]
        for i in range(len(work)):
            if i != rank and work[i][c]:
                f = work[i][c]
                work[i] = [v ^ mul(f, w) for v, w in zip(work[i], work[rank])]
        rank += 1
        if rank == len(work):
            break
    return rank


def matrix_invert(rows: list[list[int]]) -> list[list[int]]:
    """Inverse of a square matrix over GF(256); raises on singular input."""
    size = len(rows)
    work = [list(r) + [int(i == j) for j in range(size)] for i, r in enumerate(rows)]
    for c in range(size):
        pivot = next((i for i in range(c, size) if work[i][c]), None)
        if pivot is None:
            raise ValueError("matrix is singular over GF(256)")
        work[c], work[pivot] = work[pivot], work[c]
        scale = inv(work[c][c])
        work[c] = [mul(v, scale) for v in work[c]]
        for i in range(size):
            if i != c and work[i][c]:
                f = work[i][c]
                work[i] = [v ^ mul(f, w) for v, w in zip(work[i], work[c])]
    return [r[size:] for r in work]
