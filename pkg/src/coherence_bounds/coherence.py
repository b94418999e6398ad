"""Unified (alpha, beta)-relative entropy and the coherence quantifiers built on it.

The coherence of rho with respect to a tight frame {phi_j} (N vectors in C^d)
is evaluated in closed form,

    C(alpha, beta) = ([sum_j ((d/N) <phi_j|rho^alpha|phi_j>)^(1/alpha)]^(alpha beta) - 1)
                     / ((alpha - 1) beta),

which for an orthonormal basis is the minimum of the unified relative
entropy over incoherent states. beta = 1 gives the Tsallis quantifier and
beta -> 0 the Renyi one (natural logarithm).
"""
import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchError, CertificationError, SupportError, ValidationError
from .frames import Frame, as_ensemble
from .states import as_state

SUPPORT_TOL = 1e-12
BETA_EQ_TOL = 1e-12


class Branch(enum.Enum):
    """Parameter region of (alpha, beta); B1-B3 each carry their own lower bound."""

    B1 = "B1"        # alpha in [1/2, 1), beta in (-inf, 0) u (0, 1]
    B2 = "B2"        # alpha in (0, 1/2), beta < 0
    B3 = "B3"        # alpha in (0, 1/2), beta in (0, 1]
    RENYI = "RENYI"  # beta = 0, taken as a limit


@dataclass(frozen=True)
class CoherenceParams:
    alpha: float
    beta: float

    def __post_init__(self):
        a, b = self.alpha, self.beta
        if not (isinstance(a, (int, float)) and 0.0 < a < 1.0):
            raise BranchError(f"alpha = {a!r} violates alpha in (0, 1)")
        if not (isinstance(b, (int, float)) and math.isfinite(b) and b <= 1.0):
            raise BranchError(f"beta = {b!r} violates beta <= 1 (finite)")

    @property
    def branch(self):
        if self.beta == 0:
            return Branch.RENYI
        if self.alpha >= 0.5:
            return Branch.B1
        return Branch.B2 if self.beta < 0 else Branch.B3

    @property
    def is_tsallis(self):
        return self.beta == 1

    def describe(self):
        conditions = {
            Branch.B1: "alpha in [1/2, 1) and beta in (-inf, 0) u (0, 1]",
            Branch.B2: "alpha in (0, 1/2) and beta in (-inf, 0)",
            Branch.B3: "alpha in (0, 1/2) and beta in (0, 1]",
            Branch.RENYI: "beta = 0 (Renyi limit)",
        }
        return f"{self.branch.value}: {conditions[self.branch]}"


def _nonrenyi(alpha, beta, where):
    p = CoherenceParams(alpha, beta)
    if p.branch is Branch.RENYI:
        raise BranchError(f"{where} needs beta != 0; use the renyi_* function for the beta -> 0 limit")
    return p


# relative entropy between states

def _check_support(rho, sigma):
    w = sigma.spectrum.eigenvalues
    kernel = sigma.spectrum.eigenvectors[:, w <= SUPPORT_TOL]
    if kernel.shape[1]:
        leak = float(np.real(np.trace(kernel.conj().T @ rho.matrix @ kernel)))
        if leak > 1e-10:
            raise SupportError(f"rho has weight {leak:.3e} outside the support of sigma")


def _on_support(spec, fn):
    def masked(w):
        keep = w > SUPPORT_TOL
        return np.where(keep, fn(np.where(keep, w, 1.0)), 0.0)
    return spec.apply(masked)


def _support_power(spec, p):
    return _on_support(spec, lambda w: w ** p)


def _sandwich_trace(rho, sigma, a):
    """tr(rho^a sigma^(1-a)) on the support of sigma (a >= 0)."""
    rp = _support_power(rho.spectrum, a)  # a = 0 gives the support projector
    sp = _support_power(sigma.spectrum, 1.0 - a)
    return float(np.real(np.trace(rp @ sp)))


def unified_relative_entropy(rho, sigma, alpha, beta, log_base=2.0):
    """Unified (alpha, beta)-relative entropy D(rho || sigma).

    Branches, for 0 <= alpha < 1 unless stated, with t = tr(rho^a sigma^(1-a)):

    * beta = 0: log(t) / (alpha - 1)                       (Renyi)
    * beta = 1: (t - 1) / (alpha - 1)                      (Tsallis)
    * beta = 1/alpha, 0 < alpha < 1:
      ((tr rho^(1/alpha) sigma^(1-1/alpha))^alpha - 1) / (1 - alpha)
    * alpha = 1: tr rho log rho - tr rho log sigma         (Umegaki)
    * otherwise: (t^beta - 1) / ((alpha - 1) beta)

    Logarithms use `log_base` (2 by default). Support of rho must lie in
    that of sigma.
    """
    rho, sigma = as_state(rho), as_state(sigma)
    if rho.dim != sigma.dim:
        raise ValidationError(f"dimension mismatch: {rho.dim} vs {sigma.dim}")
    if not (0.0 <= alpha <= 1.0):
        raise ValidationError(f"alpha = {alpha!r} outside [0, 1]")
    _check_support(rho, sigma)
    if rho is sigma or np.array_equal(rho.matrix, sigma.matrix):
        return 0.0
    log = math.log(log_base)
    if alpha == 1.0:
        lr = _on_support(rho.spectrum, np.log)
        ls = _on_support(sigma.spectrum, np.log)
        return float(np.real(np.trace(rho.matrix @ (lr - ls)))) / log
    if beta == 0:
        return math.log(_sandwich_trace(rho, sigma, alpha)) / ((alpha - 1.0) * log)
    if beta == 1:
        return (_sandwich_trace(rho, sigma, alpha) - 1.0) / (alpha - 1.0)
    if alpha > 0 and abs(beta - 1.0 / alpha) <= BETA_EQ_TOL:
        inv = 1.0 / alpha
        t = float(np.real(np.trace(_support_power(rho.spectrum, inv)
                                   @ _support_power(sigma.spectrum, 1.0 - inv))))
        return (t ** alpha - 1.0) / (1.0 - alpha)
    t = _sandwich_trace(rho, sigma, alpha)
    return (t ** beta - 1.0) / ((alpha - 1.0) * beta)


# coherence quantifiers

def weighted_overlaps(rho, vectors, alpha):
    """(d/N) <phi|rho^alpha|phi> for vectors of shape (..., N, d), clamped at 0."""
    d, n = vectors.shape[-1], vectors.shape[-2]
    rp = rho.power(alpha)
    q = np.real(np.einsum("...ni,ij,...nj->...n", vectors.conj(), rp, vectors))
    return np.maximum(q * (d / n), 0.0)


def _inner_sum(rho, vectors, alpha):
    return np.sum(weighted_overlaps(rho, vectors, alpha) ** (1.0 / alpha), axis=-1)


def _from_inner_sum(s, alpha, beta):
    return (s ** (alpha * beta) - 1.0) / ((alpha - 1.0) * beta)


def _check_tight(frame, rho):
    if not isinstance(frame, Frame):
        raise ValidationError(f"expected a Frame, got {type(frame).__name__}")
    if frame.dim != rho.dim:
        raise ValidationError(f"frame dimension {frame.dim} != state dimension {rho.dim}")
    if not frame.is_tight:
        raise CertificationError(f"{frame!r} is not a unit-norm tight frame:\n{frame.report}")


def basis_coherence(rho, basis, alpha, beta):
    """Coherence of rho in an orthonormal reference basis (beta != 0)."""
    rho = as_state(rho)
    _nonrenyi(alpha, beta, "basis_coherence")
    _check_tight(basis, rho)
    if not basis.is_orthonormal:
        raise CertificationError(f"{basis!r} is not an orthonormal basis")
    return float(_from_inner_sum(_inner_sum(rho, basis.vectors, alpha), alpha, beta))


def frame_coherence(rho, frame, alpha, beta):
    """Coherence of rho with respect to the POVM induced by a tight frame (beta != 0)."""
    rho = as_state(rho)
    _nonrenyi(alpha, beta, "frame_coherence")
    _check_tight(frame, rho)
    return float(_from_inner_sum(_inner_sum(rho, frame.vectors, alpha), alpha, beta))


def tsallis_coherence(rho, frame, alpha):
    return frame_coherence(rho, frame, alpha, 1.0)


def renyi_coherence(rho, frame, alpha):
    """beta -> 0 limit: alpha/(alpha-1) * ln(inner sum), natural logarithm."""
    rho = as_state(rho)
    CoherenceParams(alpha, 0.0)
    _check_tight(frame, rho)
    s = _inner_sum(rho, frame.vectors, alpha)
    return float(alpha / (alpha - 1.0) * math.log(s))


def _certified(ensemble, rho):
    ens = as_ensemble(ensemble).require_certified()
    if ens.dim != rho.dim:
        raise ValidationError(f"ensemble dimension {ens.dim} != state dimension {rho.dim}")
    return ens


def member_coherences(ensemble, rho, alpha, beta):
    """Coherence under each member of a certified ensemble, as an (M,) array."""
    rho = as_state(rho)
    _nonrenyi(alpha, beta, "member_coherences")
    ens = _certified(ensemble, rho)
    return _from_inner_sum(_inner_sum(rho, ens.vectors, alpha), alpha, beta)


def average_coherence(ensemble, rho, alpha, beta):
    """Mean coherence over the members of a certified MUETF ensemble."""
    return float(np.mean(member_coherences(ensemble, rho, alpha, beta)))


def average_renyi_coherence(ensemble, rho, alpha):
    rho = as_state(rho)
    CoherenceParams(alpha, 0.0)
    ens = _certified(ensemble, rho)
    s = _inner_sum(rho, ens.vectors, alpha)
    return float(np.mean(alpha / (alpha - 1.0) * np.log(s)))
