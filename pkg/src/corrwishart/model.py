"""Problem definitions for the three correlation models.

A problem is a pair of matrix dimensions (n rows, m columns, n >= m) plus
the spectrum of one or two inverse covariance matrices.  Spectra are
stored for the *inverse* covariance directly, because every distribution
formula is written in those eigenvalues; `spectrum_from_covariance`
converts a covariance matrix for callers who have one.

The determinant formulas divide by products of spectral gaps, so a
validated spectrum is strictly increasing.  Near-degenerate inputs are
deterministically perturbed (and flagged) rather than silently producing
garbage; the exact confluent limit is deliberately not implemented.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

__all__ = [
    "GAP_TOL_DEFAULT",
    "PERTURB_EPS",
    "Dimensions",
    "Spectrum",
    "RowCorrelated",
    "ColumnCorrelated",
    "DoublyCorrelated",
    "ModelCase",
    "validate_spectrum",
    "spectrum_from_covariance",
]

# Relative gap below which the Vandermonde denominators are considered
# numerically degenerate, and the multiplicative nudge applied then.
GAP_TOL_DEFAULT = 1e-8
PERTURB_EPS = 1e-6


@dataclass(frozen=True)
class Dimensions:
    """Data-matrix shape: n samples (rows) by m variables (columns), n >= m."""

    n: int
    m: int

    def __post_init__(self):
        if not isinstance(self.n, int) or not isinstance(self.m, int):
            raise ValueError("dimensions must be integers")
        if not (self.n >= self.m >= 1):
            raise ValueError(f"require n >= m >= 1, got n={self.n}, m={self.m}")


@dataclass(frozen=True)
class Spectrum:
    """Strictly increasing positive eigenvalues of an inverse covariance."""

    values: tuple
    perturbed: bool = False

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))

    def __len__(self):
        return len(self.values)

    def __iter__(self):
        return iter(self.values)


def validate_spectrum(raw: Sequence[float], gap_tol: float = GAP_TOL_DEFAULT) -> Spectrum:
    """Sort, positivity-check and degeneracy-break a raw spectrum.

    Values are sorted ascending.  If any relative gap (difference over the
    spectrum mean) falls below ``gap_tol``, every value is nudged by
    ``s_j -> s_j * (1 + j * PERTURB_EPS)`` (j = 1-based rank) and the result
    re-checked; the returned Spectrum records whether that happened.

    Raises ValueError for empty/nonfinite/nonpositive input, or if one
    perturbation pass does not separate the values.
    """
    values = [float(v) for v in raw]
    if len(values) == 0:
        raise ValueError("spectrum must be nonempty")
    for v in values:
        if not math.isfinite(v):
            raise ValueError(f"spectrum values must be finite, got {v!r}")
        if v <= 0.0:
            raise ValueError(f"spectrum values must be positive, got {v!r}")
    values.sort()

    def min_rel_gap(vals):
        if len(vals) == 1:
            return math.inf
        mean = sum(vals) / len(vals)
        return min((b - a) / mean for a, b in zip(vals, vals[1:]))

    if min_rel_gap(values) >= gap_tol:
        return Spectrum(tuple(values), perturbed=False)

    nudged = [v * (1.0 + (j + 1) * PERTURB_EPS) for j, v in enumerate(values)]
    if min_rel_gap(nudged) < gap_tol:
        raise ValueError(
            "spectrum remains degenerate after one perturbation pass; "
            "separate the eigenvalues or lower gap_tol"
        )
    return Spectrum(tuple(nudged), perturbed=True)


def spectrum_from_covariance(C, gap_tol: float = GAP_TOL_DEFAULT) -> Spectrum:
    """Spectrum of the inverse of a Hermitian positive definite covariance.

    Returns the sorted reciprocals of the eigenvalues of ``C``, validated by
    `validate_spectrum`.  Rejects non-Hermitian (relative asymmetry above
    1e-12) and non positive definite input.
    """
    from .montecarlo import hermitian_eigs

    C = np.asarray(C, dtype=complex)
    if C.ndim != 2 or C.shape[0] != C.shape[1]:
        raise ValueError(f"covariance must be square, got shape {C.shape}")
    scale = np.max(np.abs(C))
    if scale == 0.0 or not np.isfinite(scale):
        raise ValueError("covariance must be finite and nonzero")
    if np.max(np.abs(C - C.conj().T)) > 1e-12 * scale:
        raise ValueError("covariance must be Hermitian to 1e-12 relative")
    eigs = hermitian_eigs(C)
    if eigs[0] <= 0.0:
        raise ValueError("covariance must be positive definite")
    return validate_spectrum([1.0 / t for t in eigs], gap_tol=gap_tol)


@dataclass(frozen=True)
class RowCorrelated:
    """Z is n x m Gaussian with density proportional to exp(-Tr(S Z^H Z)).

    ``s`` holds the m eigenvalues of the inverse covariance coupling the
    columns (variables) of Z.
    """

    dims: Dimensions
    s: Spectrum

    def __post_init__(self):
        if len(self.s) != self.dims.m:
            raise ValueError(
                f"row-correlated spectrum must have length m={self.dims.m}, "
                f"got {len(self.s)}"
            )


@dataclass(frozen=True)
class ColumnCorrelated:
    """Z is n x m Gaussian with density proportional to exp(-Tr(Z^H S Z)).

    ``s`` holds the n eigenvalues of the inverse covariance coupling the
    rows (repeated measurements) of Z.
    """

    dims: Dimensions
    s: Spectrum

    def __post_init__(self):
        if len(self.s) != self.dims.n:
            raise ValueError(
                f"column-correlated spectrum must have length n={self.dims.n}, "
                f"got {len(self.s)}"
            )


@dataclass(frozen=True)
class DoublyCorrelated:
    """Z is n x m Gaussian with density prop. to exp(-Tr(R Z^H S Z)).

    ``r`` holds the m eigenvalues of the column-side inverse covariance and
    ``s`` the n eigenvalues of the row-side one.  With m < n only the
    largest-eigenvalue statistic is available; the smallest-eigenvalue
    formula exists only at m = n.
    """

    dims: Dimensions
    r: Spectrum
    s: Spectrum

    def __post_init__(self):
        if len(self.r) != self.dims.m:
            raise ValueError(
                f"doubly-correlated r spectrum must have length m={self.dims.m}, "
                f"got {len(self.r)}"
            )
        if len(self.s) != self.dims.n:
            raise ValueError(
                f"doubly-correlated s spectrum must have length n={self.dims.n}, "
                f"got {len(self.s)}"
            )


ModelCase = Union[RowCorrelated, ColumnCorrelated, DoublyCorrelated]
