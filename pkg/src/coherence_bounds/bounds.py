"""State-dependent lower bounds on coherence averaged over a MUETF ensemble.

Everything is driven by one engine, :func:`coherence_lower_bound`, which
needs only the ensemble shape (d, N, M) and spectral data of rho. The MUB,
ETF, Tsallis and Renyi variants are parameter specialisations of it.

Notation used below: for an exponent a, the coincidence argument is

    X(a) = (1 - c) [d tr rho^(2a) / (tr rho^a)^2 - 1] / (M N S) + 1/N

with c = (N - d)/(d (N - 1)) and S = N/d, and the *brace* is
1 + ((a - 1)/a) F_(1/a)(X(a)) where F is :func:`~.scalarfn.entropy_floor`.
"""
import math
from dataclasses import dataclass

from .coherence import Branch, CoherenceParams
from .errors import BranchError, ConsistencyError, ValidationError
from .frames import MuetfEnsemble, Frame, as_ensemble, equiangular_constant
from .scalarfn import beta_flip_chord, entropy_floor
from .states import as_state

BRACE_FLOOR = 1e-300
RANGE_TOL = 1e-12
NEG_TOL = 1e-10


@dataclass(frozen=True)
class EnsembleShape:
    d: int
    N: int
    M: int = 1

    def __post_init__(self):
        if self.d < 2 or self.N < self.d or self.M < 1:
            raise ValidationError(f"invalid ensemble shape d={self.d}, N={self.N}, M={self.M}")

    @property
    def c(self):
        return equiangular_constant(self.d, self.N)

    @property
    def S(self):
        return self.N / self.d

    @classmethod
    def of(cls, obj):
        """Shape of an ensemble or frame; shapes pass through unchanged."""
        if isinstance(obj, EnsembleShape):
            return obj
        if isinstance(obj, Frame):
            return cls(obj.dim, obj.count, 1)
        if isinstance(obj, MuetfEnsemble):
            return cls(obj.dim, obj.count, obj.size)
        return cls.of(as_ensemble(obj))


@dataclass(frozen=True)
class BoundResult:
    value: float
    branch: Branch
    x: float
    brace: float
    clamped: bool = False

    def __float__(self):
        return self.value


def _shape_for(shape, rho):
    shape = EnsembleShape.of(shape)
    if shape.d != rho.dim:
        raise ValidationError(f"shape dimension {shape.d} != state dimension {rho.dim}")
    return shape


def coincidence_bound(rho, shape):
    """Upper bound on the member-averaged index of coincidence:

    (1 - c)(d tr rho^2 - 1)/(M N S) + 1/N.
    """
    rho = as_state(rho)
    s = _shape_for(shape, rho)
    return (1 - s.c) * (s.d * rho.purity() - 1) / (s.M * s.N * s.S) + 1 / s.N


def _argument_from_traces(shape, t_a, t_2a):
    return (1 - shape.c) * (shape.d * t_2a / t_a ** 2 - 1) / (shape.M * shape.N * shape.S) + 1 / shape.N


def bound_argument(rho, shape, a):
    """Coincidence argument X(a) for exponent a in (0, 1); lies in (0, 1]."""
    rho = as_state(rho)
    s = _shape_for(shape, rho)
    if not (0.0 < a < 1.0):
        raise ValidationError(f"exponent {a!r} outside (0, 1)")
    x = _argument_from_traces(s, rho.trace_power(a), rho.trace_power(2 * a))
    if not (0.0 < x <= 1.0 + RANGE_TOL):
        raise ConsistencyError(f"coincidence argument {x!r} left (0, 1] for shape {s}")
    return min(x, 1.0)


def _brace(x, a):
    b = 1.0 + (a - 1.0) / a * entropy_floor(x, 1.0 / a)
    if b > 1.0 + RANGE_TOL:
        raise ConsistencyError(f"brace {b!r} exceeds 1")
    if b < BRACE_FLOOR:
        return BRACE_FLOOR, True
    return min(b, 1.0), False


def _tsallis_form(log_core, beta, denom):
    # (exp(beta * log_core) - 1) / denom, accurate near the zero of the numerator
    return math.expm1(beta * log_core) / denom


def coherence_lower_bound(rho, shape, alpha, beta):
    """Lower bound on (1/M) sum_mu C_(alpha,beta)(F_mu; rho).

    Branch B1 (alpha >= 1/2) works at exponent alpha; B2 and B3 work at
    1 - alpha, and B3 additionally passes the B2-type bound for -beta through
    :func:`~.scalarfn.beta_flip_chord`. beta = 0 is rejected (see
    :func:`renyi_bound`).

    Returns
    -------
    BoundResult
        value, branch, the coincidence argument and the brace used.
    """
    rho = as_state(rho)
    s = _shape_for(shape, rho)
    p = CoherenceParams(alpha, beta)
    if p.branch is Branch.RENYI:
        raise BranchError("beta = 0 has no finite-beta bound; use renyi_bound")
    if p.branch is Branch.B1:
        a = alpha
    else:
        a = 1.0 - alpha
    t = rho.trace_power(a)
    x = _argument_from_traces(s, t, rho.trace_power(2 * a))
    if not (0.0 < x <= 1.0 + RANGE_TOL):
        raise ConsistencyError(f"coincidence argument {x!r} left (0, 1] for shape {s}")
    x = min(x, 1.0)
    brace, clamped = _brace(x, a)
    core = math.log(t) + a * math.log(brace)  # log of t * brace^a

    if p.branch is Branch.B1:
        value = _tsallis_form(core, beta, (alpha - 1.0) * beta)
    elif p.branch is Branch.B2:
        value = -_tsallis_form(core, beta, alpha * beta)
    else:
        inner = -_tsallis_form(core, -beta, -alpha * beta)
        if inner < 0:
            if inner < -NEG_TOL:
                raise ConsistencyError(f"negative B3 chord argument {inner!r}")
            inner = 0.0
        value = beta_flip_chord(inner, alpha, beta)
    if value < -NEG_TOL:
        raise ConsistencyError(f"bound {value!r} is negative beyond {NEG_TOL:g}")
    return BoundResult(value, p.branch, x, brace, clamped)


def mub_bound(rho, d, M, alpha, beta):
    """Bound for M mutually unbiased bases in C^d (N = d, c = 0, S = 1)."""
    return coherence_lower_bound(rho, EnsembleShape(d, d, M), alpha, beta)


def etf_bound(rho, shape, alpha, beta):
    """Bound for a single ETF (M = 1)."""
    s = EnsembleShape.of(shape)
    if s.M != 1:
        raise ValidationError(f"etf_bound takes a single frame, got M={s.M}")
    return coherence_lower_bound(rho, s, alpha, beta)


def tsallis_bound(rho, shape, alpha):
    if not (0.0 < alpha < 1.0):
        raise ValidationError(f"alpha = {alpha!r} outside (0, 1)")
    return coherence_lower_bound(rho, shape, alpha, 1.0)


def renyi_bound(rho, shape, alpha):
    """beta -> 0 limit of the bound, natural logarithm:

    alpha >= 1/2:  ln(brace^alpha tr rho^alpha) / (alpha - 1)
    alpha <  1/2:  -ln(brace^(1-alpha) tr rho^(1-alpha)) / alpha
    """
    rho = as_state(rho)
    s = _shape_for(shape, rho)
    if not (0.0 < alpha < 1.0):
        raise ValidationError(f"alpha = {alpha!r} outside (0, 1)")
    a = alpha if alpha >= 0.5 else 1.0 - alpha
    t = rho.trace_power(a)
    x = min(_argument_from_traces(s, t, rho.trace_power(2 * a)), 1.0)
    brace, _ = _brace(x, a)
    core = a * math.log(brace) + math.log(t)
    return core / (alpha - 1.0) if alpha >= 0.5 else -core / alpha


def pure_state_bounds(shape, alpha, beta):
    """The three branch formulas evaluated for a pure state.

    With tr rho^a = 1 the argument becomes (1 - c)(d - 1)/(M N S) + 1/N.
    Returns (b1, b2, b3); an entry is None when (alpha, beta) is outside the
    domain where that formula is defined (entropy order above 2, or beta
    outside (0, 1] for the chord).
    """
    s = EnsembleShape.of(shape)
    CoherenceParams(alpha, beta)
    if beta == 0:
        raise BranchError("beta = 0 has no finite-beta bound")
    x = min((1 - s.c) * (s.d - 1) / (s.M * s.N * s.S) + 1 / s.N, 1.0)
    b1 = b2 = b3 = None
    if alpha >= 0.5:
        brace, _ = _brace(x, alpha)
        b1 = (brace ** (alpha * beta) - 1.0) / ((alpha - 1.0) * beta)
    if alpha <= 0.5:
        brace, _ = _brace(x, 1.0 - alpha)
        b2 = -(brace ** ((1.0 - alpha) * beta) - 1.0) / (alpha * beta)
        if beta > 0:
            inner = brace ** ((alpha - 1.0) * beta) / (alpha * beta) - 1.0 / (alpha * beta)
            b3 = beta_flip_chord(max(inner, 0.0), alpha, beta)
    return b1, b2, b3
