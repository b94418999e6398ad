"""Hand-derived closed forms for two qubit scenarios, used to cross-check the engine.

* Pseudopure states ((1-v)/2) I + v|0><0| averaged over the Hadamard,
  circular and computational bases, with beta = alpha.
* Bloch vectors (r1, 0, r1) measured with the tetrahedral SIC-POVM, with
  beta = -alpha.

These are independent transcriptions; they are not used by the engine.
"""
import math

from .scalarfn import entropy_floor

SQRT2 = math.sqrt(2.0)


def pseudopure_mub_coherence(alpha, v):
    """Average coherence over the three qubit MUBs, beta = alpha."""
    t = (1 - v) ** alpha + (1 + v) ** alpha
    return (2 - 2 ** (1 - alpha) * t ** alpha) / (3 * alpha - 3 * alpha ** 2)


def pseudopure_mub_bound(alpha, v):
    """Lower bound matching :func:`pseudopure_mub_coherence`."""
    t = (1 - v) ** alpha + (1 + v) ** alpha
    x = 2 * ((1 - v * v) ** alpha + (1 - v) ** (2 * alpha) + (1 + v) ** (2 * alpha)) / (3 * t ** 2)
    brace = (alpha - 1) / alpha * entropy_floor(min(x, 1.0), 1 / alpha) + 1
    return (t ** alpha / ((alpha - 1) * alpha * 2 ** (alpha ** 2)) * brace ** (alpha ** 2)
            - 1 / ((alpha - 1) * alpha))


def _bloch_powers(alpha, r1):
    # 1 - sqrt2 r1 may round below zero at the pure endpoint r1 = 1/sqrt2
    plus = (SQRT2 * r1 + 1) ** alpha
    minus = max(0.0, 1 - SQRT2 * r1) ** alpha
    return plus, minus


def sic_bloch_coherence(alpha, r1):
    """Coherence under the qubit SIC-POVM for Bloch vector (r1, 0, r1), beta = -alpha."""
    p, m = _bloch_powers(alpha, r1)
    k = 2 ** (-alpha - 0.5)
    ia = 1 / alpha
    first = 3 ** ia * (k * ((SQRT2 + 1) * p + (SQRT2 - 1) * m)) ** ia
    second = 2 * (k * ((2 * SQRT2 - 1) * p + (4 * SQRT2 + 1) * m)) ** ia
    third = (k * ((5 * SQRT2 - 1) * p + (SQRT2 + 1) * m)) ** ia
    inner = 12 ** (-ia) * (first + second + third)
    return (inner ** (-alpha ** 2) - 1) / ((1 - alpha) * alpha)


def sic_bloch_bound(alpha, r1):
    """Lower bound matching :func:`sic_bloch_coherence`."""
    p, m = _bloch_powers(alpha, r1)
    p2 = (SQRT2 * r1 + 1) ** (2 * alpha)
    m2 = max(0.0, 1 - SQRT2 * r1) ** (2 * alpha)
    # 1 - 2 r1^2 factored so it rounds consistently with the eigenvalues above
    det = (1 + SQRT2 * r1) * max(0.0, 1 - SQRT2 * r1)
    x = (det ** alpha + p2 + m2) / (3 * (p + m) ** 2)
    brace = (alpha - 1) / alpha * entropy_floor(min(x, 1.0), 1 / alpha) + 1
    num = 2 ** (alpha ** 2) * brace ** (-alpha ** 2)
    return num / ((1 - alpha) * alpha * (p + m) ** alpha) - 1 / ((1 - alpha) * alpha)
