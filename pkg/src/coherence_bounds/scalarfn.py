"""Scalar functions behind the bounds.

Deformed logarithm, Tsallis entropy, index of coincidence, the piecewise
linear entropy floor in terms of the index of coincidence, and the concave
map (with its chord interpolant) that converts coherence at -beta into
coherence at +beta.
"""
import math

import numpy as np

from .errors import ValidationError

PROB_TOL = 1e-10
LOG_BRANCH_TOL = 1e-8


def as_probability_vector(p, tol=PROB_TOL):
    """Validate a probability vector; tiny negative rounding is set to zero."""
    p = np.asarray(p, dtype=float)
    if p.ndim != 1 or p.size == 0:
        raise ValidationError(f"expected a non-empty 1-d probability vector, got shape {p.shape}")
    if p.min() < -tol:
        raise ValidationError(f"negative probability {p.min():.3e}")
    s = p.sum()
    if abs(s - 1.0) > tol:
        raise ValidationError(f"probabilities sum to {s!r}, not 1")
    return np.maximum(p, 0.0)


def gamma_log(x, gamma):
    """Deformed logarithm (x**(1-gamma) - 1)/(1 - gamma); ln(x) as gamma -> 1."""
    if x <= 0:
        raise ValidationError(f"gamma_log needs x > 0, got {x!r}")
    if abs(gamma - 1.0) < LOG_BRANCH_TOL:
        return math.log(x)
    return (x ** (1.0 - gamma) - 1.0) / (1.0 - gamma)


def tsallis_entropy(p, gamma):
    p = as_probability_vector(p)
    nz = p[p > 0]
    if abs(gamma - 1.0) < LOG_BRANCH_TOL:
        return float(-np.sum(nz * np.log(nz)))
    return float((np.sum(nz ** gamma) - 1.0) / (1.0 - gamma))


def index_of_coincidence(p):
    p = as_probability_vector(p)
    return float(np.dot(p, p))


def entropy_floor(x, gamma):
    """Piecewise linear lower bound on Tsallis gamma-entropy given I(P) = x.

    On [1/(k+1), 1/k] it is the chord through (1/(k+1), ln_g(k+1)) and
    (1/k, ln_g(k)), so the value at every knot 1/k is ln_g(k) and the
    function is continuous; which segment a knot is assigned to does not
    matter. k = floor(1/x), kept >= 1.

    Parameters
    ----------
    x : float
        Index of coincidence, in (0, 1].
    gamma : float
        Entropy order, in (0, 2].
    """
    if not (0.0 < x <= 1.0 + 1e-12):
        raise ValidationError(f"entropy_floor argument {x!r} outside (0, 1]")
    if not (0.0 < gamma <= 2.0):
        raise ValidationError(f"gamma {gamma!r} outside (0, 2]")
    k = max(1, math.floor(1.0 / x))
    lk = gamma_log(k, gamma)
    lk1 = gamma_log(k + 1, gamma)
    return (k + 1) * lk1 - k * lk - k * (k + 1) * (lk1 - lk) * x


def _flip_slope(alpha, beta):
    if not (0.0 < alpha < 1.0):
        raise ValidationError(f"alpha {alpha!r} outside (0, 1)")
    if not (0.0 <= beta <= 1.0):
        raise ValidationError(f"beta {beta!r} outside [0, 1]")
    return (alpha - 1.0) * beta


def beta_flip_map(x, alpha, beta):
    """x / (1 - (alpha-1) beta x): sends C(alpha,-beta) to C(alpha,beta).

    Increasing and concave on x >= 0 for alpha in (0,1), beta in [0,1].
    """
    a = _flip_slope(alpha, beta)
    if x < 0:
        raise ValidationError(f"beta_flip_map needs x >= 0, got {x!r}")
    return x / (1.0 - a * x)


def beta_flip_chord(x, alpha, beta):
    """Chord interpolant of beta_flip_map between consecutive integers.

    Lies between 0 and beta_flip_map(x), touching it at integer x.
    """
    _flip_slope(alpha, beta)
    if x < 0:
        raise ValidationError(f"beta_flip_chord needs x >= 0, got {x!r}")
    l = math.floor(x)
    fl = beta_flip_map(l, alpha, beta)
    fl1 = beta_flip_map(l + 1, alpha, beta)
    return fl + (fl1 - fl) * (x - l)
