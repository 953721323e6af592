"""Amplitude-update kernels: numba-compiled loops with a pure-numpy fallback.

Every gate in the model is either a (multi-)controlled two-level rotation
or a basis permutation, so two kernels cover the whole gate set:

* ``apply_two_level`` -- combine amplitude pairs that differ in the target
  bit with an arbitrary 2x2 matrix, restricted to indices where all
  control bits are 1.
* ``apply_diag`` -- multiply per-index phases (diagonal gates), same
  control convention.

Backend selection: the ``LQC_KERNEL`` environment variable may be set to
``numba`` or ``numpy``; default is numba when importable.  Both paths
perform the same arithmetic in the same order, so results are identical
bit for bit -- the flag trades compile latency against loop speed only.
"""

from __future__ import annotations

import os

import numpy as np

try:
    from numba import njit

    _HAS_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    _HAS_NUMBA = False

_env = os.environ.get("LQC_KERNEL", "").strip().lower()
if _env not in ("", "numba", "numpy"):
    raise ValueError(f"LQC_KERNEL must be 'numba' or 'numpy', got {_env!r}")
_USE_NUMBA = _HAS_NUMBA if _env == "" else (_env == "numba" and _HAS_NUMBA)


def backend() -> str:
    return "numba" if _USE_NUMBA else "numpy"


def set_backend(name: str) -> None:
    """Switch kernel backend at runtime (used by tests and the benchmark)."""
    global _USE_NUMBA
    if name == "numba":
        if not _HAS_NUMBA:
            raise ValueError("numba is not available")
        _USE_NUMBA = True
    elif name == "numpy":
        _USE_NUMBA = False
    else:
        raise ValueError(f"unknown kernel backend {name!r}")


# ---------------------------------------------------------------------------
# numba kernels

if _HAS_NUMBA:

    @njit(cache=True)
    def _two_level_nb(amps, m00, m01, m10, m11, tbit, cmask):  # pragma: no cover
        half = amps.shape[0] >> 1
        for g in range(half):
            i0 = ((g // tbit) * tbit) * 2 + (g % tbit)
            if cmask and (i0 & cmask) != cmask:
                continue
            i1 = i0 + tbit
            a0 = amps[i0]
            a1 = amps[i1]
            amps[i0] = m00 * a0 + m01 * a1
            amps[i1] = m10 * a0 + m11 * a1

    @njit(cache=True)
    def _diag_nb(amps, p0, p1, tbit, cmask):  # pragma: no cover
        half = amps.shape[0] >> 1
        for g in range(half):
            i0 = ((g // tbit) * tbit) * 2 + (g % tbit)
            if cmask and (i0 & cmask) != cmask:
                continue
            if p0 != 1.0 + 0.0j:
                amps[i0] = p0 * amps[i0]
            if p1 != 1.0 + 0.0j:
                i1 = i0 + tbit
                amps[i1] = p1 * amps[i1]


# ---------------------------------------------------------------------------
# numpy fallbacks


def _pair_indices(n: int, tbit: int, cmask: int) -> np.ndarray:
    """Indices with target bit 0 and all control bits 1."""
    g = np.arange(n >> 1, dtype=np.int64)
    i0 = ((g // tbit) * tbit) * 2 + (g % tbit)
    if cmask:
        i0 = i0[(i0 & cmask) == cmask]
    return i0


def _cmul(p: complex, arr: np.ndarray) -> np.ndarray:
    # Scalar-formula complex multiply over real parts.  numpy's native
    # complex-multiply loops may contract to FMA instructions, which would
    # break bit-identity with the numba path.
    out = np.empty_like(arr)
    out.real = p.real * arr.real - p.imag * arr.imag
    out.imag = p.real * arr.imag + p.imag * arr.real
    return out


def _two_level_np(amps, m00, m01, m10, m11, tbit, cmask):
    i0 = _pair_indices(amps.shape[0], tbit, cmask)
    i1 = i0 + tbit
    a0 = amps[i0]
    a1 = amps[i1]
    amps[i0] = _cmul(m00, a0) + _cmul(m01, a1)
    amps[i1] = _cmul(m10, a0) + _cmul(m11, a1)


def _diag_np(amps, p0, p1, tbit, cmask):
    i0 = _pair_indices(amps.shape[0], tbit, cmask)
    if p0 != 1.0:
        amps[i0] = _cmul(p0, amps[i0])
    if p1 != 1.0:
        amps[i0 + tbit] = _cmul(p1, amps[i0 + tbit])


# ---------------------------------------------------------------------------
# public dispatch


def apply_two_level(
    amps: np.ndarray, mat: np.ndarray, tbit: int, cmask: int = 0
) -> None:
    """In-place 2x2 update on the target bit, gated on control bits.

    ``tbit`` is the power-of-two mask of the target bit; ``cmask`` holds the
    OR of the control-bit masks (0 for no controls).
    """
    m00, m01 = complex(mat[0, 0]), complex(mat[0, 1])
    m10, m11 = complex(mat[1, 0]), complex(mat[1, 1])
    if m01 == 0 and m10 == 0:
        if _USE_NUMBA:
            _diag_nb(amps, m00, m11, tbit, cmask)
        else:
            _diag_np(amps, m00, m11, tbit, cmask)
    elif _USE_NUMBA:
        _two_level_nb(amps, m00, m01, m10, m11, tbit, cmask)
    else:
        _two_level_np(amps, m00, m01, m10, m11, tbit, cmask)


def swap_pairs(amps: np.ndarray, i0: np.ndarray, i1: np.ndarray) -> None:
    """Swap amplitudes between paired index arrays (basis permutations)."""
    # Fancy-indexed swap is memory bound either way, so no numba variant.
    tmp = amps[i0].copy()
    amps[i0] = amps[i1]
    amps[i1] = tmp
