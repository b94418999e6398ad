"""Density matrices and the state families used throughout the package."""
import numpy as np

from . import spectra
from .errors import NotAStateError, ValidationError

TRACE_TOL = 1e-12
BLOCH_TOL = 1e-12

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


class DensityMatrix:
    """Immutable d x d quantum state with a cached spectral decomposition.

    Construction validates Hermiticity, unit trace (1e-12) and positivity
    (eigenvalues >= -1e-12). Fractional powers are memoised per exponent.
    """

    __slots__ = ("_matrix", "_spectrum", "_powers")

    def __init__(self, matrix):
        m = spectra.check_hermitian(matrix)
        tr = np.trace(m).real
        if abs(tr - 1.0) > TRACE_TOL:
            raise NotAStateError(f"trace {tr!r} differs from 1 by more than {TRACE_TOL:g}")
        m = np.array(0.5 * (m + m.conj().T))
        m.setflags(write=False)
        self._matrix = m
        self._spectrum = spectra.decompose(m)
        spectra.clamped_eigenvalues(self._spectrum)
        self._powers = {}

    @property
    def matrix(self):
        return self._matrix

    @property
    def dim(self):
        return self._matrix.shape[0]

    @property
    def spectrum(self):
        return self._spectrum

    @property
    def eigenvalues(self):
        return spectra.clamped_eigenvalues(self._spectrum)

    def power(self, a):
        p = self._powers.get(a)
        if p is None:
            p = spectra.matrix_power(self._spectrum, a)
            p.setflags(write=False)
            self._powers[a] = p
        return p

    def trace_power(self, a):
        return spectra.trace_power(self._spectrum, a)

    def purity(self):
        return float(np.sum(self.eigenvalues ** 2))

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self._matrix, dtype=dtype)

    def __repr__(self):
        return f"DensityMatrix(dim={self.dim}, purity={self.purity():.6g})"

    def to_json(self):
        """Nested [re, im] pairs, row-major; round-trips through from_json."""
        return [[[float(z.real), float(z.imag)] for z in row] for row in self._matrix]

    @classmethod
    def from_json(cls, data):
        arr = np.asarray(data, dtype=float)
        return cls(arr[..., 0] + 1j * arr[..., 1])


def as_state(rho):
    return rho if isinstance(rho, DensityMatrix) else DensityMatrix(rho)


def from_pure(v):
    """Rank-one projector |v><v| for a unit vector v."""
    v = spectra.check_unit(v)
    return DensityMatrix(np.outer(v, v.conj()))


def maximally_mixed(d):
    if d < 1:
        raise ValidationError(f"dimension must be positive, got {d}")
    return DensityMatrix(np.eye(d, dtype=complex) / d)


def pseudopure(v):
    """Qubit mixture ((1-v)/2) I + v |0><0| for visibility v in [0, 1]."""
    if not (0.0 <= v <= 1.0):
        raise ValidationError(f"visibility {v!r} outside [0, 1]")
    return DensityMatrix(np.diag([(1 + v) / 2, (1 - v) / 2]).astype(complex))


def bloch_qubit(r1, r2, r3):
    """(I + r . sigma) / 2 for a Bloch vector in the closed unit ball."""
    norm2 = r1 * r1 + r2 * r2 + r3 * r3
    if norm2 > 1.0 + BLOCH_TOL:
        raise ValidationError(f"Bloch vector length^2 {norm2!r} exceeds 1")
    m = 0.5 * (np.eye(2) + r1 * PAULI_X + r2 * PAULI_Y + r3 * PAULI_Z)
    return DensityMatrix(m)


def _ginibre(rng, d):
    g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    w = g @ g.conj().T
    return DensityMatrix(w / np.trace(w).real)


def random_state(d, seed):
    """Ginibre-distributed full-rank state; same (d, seed) gives the same matrix."""
    if d < 2:
        raise ValidationError(f"dimension must be >= 2, got {d}")
    return _ginibre(np.random.default_rng(seed), d)


def random_states(d, count, seed):
    """Yield `count` Ginibre states drawn sequentially from one seeded stream."""
    if d < 2:
        raise ValidationError(f"dimension must be >= 2, got {d}")
    rng = np.random.default_rng(seed)
    for _ in range(count):
        yield _ginibre(rng, d)
