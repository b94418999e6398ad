"""Hermitian spectral calculus: eigendecomposition, fractional powers, traces.

All state functionals in the package (rho**alpha, tr rho**alpha,
<phi|rho**alpha|phi>) go through this module.
"""
from dataclasses import dataclass

import numpy as np

from .errors import NotAStateError, ValidationError

HERMITIAN_TOL = 1e-12
CLAMP_TOL = 1e-12
UNIT_TOL = 1e-10
MIN_EXPONENT, MAX_EXPONENT = 0.0, 2.0


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues in nonincreasing order, eigenvectors as matching columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    @property
    def dim(self):
        return self.eigenvalues.shape[0]

    def reconstruct(self):
        u = self.eigenvectors
        return (u * self.eigenvalues) @ u.conj().T

    def apply(self, fn):
        """Return sum_k fn(lambda_k) |u_k><u_k| for a vectorised scalar `fn`."""
        u = self.eigenvectors
        return (u * fn(self.eigenvalues)) @ u.conj().T


def _readonly(a):
    a = np.array(a)
    a.setflags(write=False)
    return a


def check_hermitian(h, tol=HERMITIAN_TOL):
    """Return `h` as a complex square array, or raise naming the worst pair."""
    h = np.asarray(h, dtype=complex)
    if h.ndim != 2 or h.shape[0] != h.shape[1] or h.shape[0] == 0:
        raise ValidationError(f"expected a non-empty square matrix, got shape {h.shape}")
    dev = np.abs(h - h.conj().T)
    worst = np.unravel_index(np.argmax(dev), dev.shape)
    if dev[worst] > tol:
        i, j = (int(k) for k in worst)
        raise ValidationError(
            f"matrix is not Hermitian: |H[{i},{j}] - conj(H[{j},{i}])| = {dev[worst]:.3e} > {tol:g}"
        )
    return h


def _fix_phase(u):
    # first component with nonnegligible modulus made real positive
    for k in range(u.shape[1]):
        col = u[:, k]
        idx = int(np.argmax(np.abs(col) > 1e-12))
        z = col[idx]
        u[:, k] = col * (abs(z) / z)
    return u


def decompose(h):
    """Spectral decomposition of a Hermitian matrix.

    Eigenvalues come out nonincreasing; each eigenvector is phase-fixed so its
    first nonzero component is real and positive, and equal eigenvalues are
    ordered lexicographically on the phase-fixed vectors. Identical input
    therefore gives identical output.
    """
    h = check_hermitian(h)
    h = 0.5 * (h + h.conj().T)
    w, u = np.linalg.eigh(h)
    u = _fix_phase(u.copy())
    keys = [(-w[k],) + tuple(np.column_stack([u[:, k].real, u[:, k].imag]).ravel())
            for k in range(len(w))]
    order = sorted(range(len(w)), key=lambda k: keys[k])
    return SpectralDecomposition(_readonly(w[order]), _readonly(u[:, order]))


def spectrum_of(x):
    """Accept a matrix, a SpectralDecomposition, or anything with `.spectrum`."""
    if isinstance(x, SpectralDecomposition):
        return x
    spec = getattr(x, "spectrum", None)
    if isinstance(spec, SpectralDecomposition):
        return spec
    return decompose(x)


def clamped_eigenvalues(x):
    """Eigenvalues with rounding noise set to zero; genuine negatives raise.

    Anything below d * eps * max|lambda| is under the resolution of the
    eigensolver and is returned as exactly 0, so 0**a stays 0 for small a.
    """
    w = spectrum_of(x).eigenvalues
    if w.min() < -CLAMP_TOL:
        raise NotAStateError(f"eigenvalue {w.min():.3e} is below -{CLAMP_TOL:g}")
    floor = w.shape[0] * np.finfo(float).eps * np.max(np.abs(w))
    return np.where(w > floor, w, 0.0)


def _check_exponent(a):
    if not (MIN_EXPONENT < a <= MAX_EXPONENT):
        raise ValidationError(f"exponent {a!r} outside (0, 2]")


def matrix_power(h, a):
    """Fractional power of a positive semidefinite Hermitian matrix.

    Parameters
    ----------
    h : array_like or DensityMatrix or SpectralDecomposition
        PSD Hermitian matrix; eigenvalues down to -1e-12 are treated as zero.
    a : float
        Exponent in (0, 2].

    Returns
    -------
    numpy.ndarray
        sum_k max(lambda_k, 0)**a |u_k><u_k|
    """
    _check_exponent(a)
    spec = spectrum_of(h)
    w = clamped_eigenvalues(spec)
    u = spec.eigenvectors
    return (u * w ** a) @ u.conj().T


def trace_power(rho, a):
    """tr rho**a computed from the clamped spectrum."""
    _check_exponent(a)
    return float(np.sum(clamped_eigenvalues(rho) ** a))


def check_unit(v, tol=UNIT_TOL):
    v = np.asarray(v, dtype=complex)
    if v.ndim != 1:
        raise ValidationError(f"expected a vector, got shape {v.shape}")
    norm = np.linalg.norm(v)
    if abs(norm - 1.0) > tol:
        raise ValidationError(f"vector norm {norm:.12g} differs from 1 by more than {tol:g}")
    return v


def quadratic_form(v, h):
    """<v|H|v> for a unit vector v; tiny negative rounding is clamped to 0."""
    v = check_unit(v)
    h = np.asarray(h, dtype=complex)
    if h.shape != (v.shape[0], v.shape[0]):
        raise ValidationError(f"vector of length {v.shape[0]} against matrix of shape {h.shape}")
    val = float(np.real(np.vdot(v, h @ v)))
    if -CLAMP_TOL <= val < 0.0:
        val = 0.0
    return val
