"""Parameter grids, randomized inequality checks and CSV output.

Rows are produced in deterministic grid order; identical arguments give
identical bytes.
"""
import io
import math
from dataclasses import dataclass, field

import numpy as np

from . import closed_forms
from .bounds import EnsembleShape, coherence_lower_bound, coincidence_bound, etf_bound, renyi_bound
from .coherence import (Branch, CoherenceParams, average_coherence, average_renyi_coherence,
                        frame_coherence)
from .errors import ClosedFormMismatch, ConsistencyError, InequalityViolation, ValidationError
from .frames import as_ensemble, outcome_probabilities, qubit_mub_triple, qubit_sic
from .scalarfn import index_of_coincidence
from .states import bloch_qubit, pseudopure, random_states

AGREEMENT_TOL = 1e-9
GAP_TOL = 1e-9
COINCIDENCE_TOL = 1e-12
SIG_DIGITS = 12

DEFAULT_ALPHA_STEPS = 81
DEFAULT_STATE_STEPS = 101
DEFAULT_EPS = 1e-4

BRANCH_GRID = {
    Branch.B1: [(a, b) for a in (0.5, 0.7, 0.9) for b in (-3.0, -1.0, -0.2, 0.3, 1.0)],
    Branch.B2: [(a, b) for a in (0.1, 0.3, 0.45) for b in (-3.0, -0.5)],
    Branch.B3: [(a, b) for a in (0.1, 0.3, 0.45) for b in (0.3, 1.0)],
}

AXES = ("alpha", "beta", "v", "r1")


def fmt(x):
    return format(float(x), f".{SIG_DIGITS}g")


def to_csv(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(x) for x in row) + "\n")
    return buf.getvalue()


def alpha_grid(steps=DEFAULT_ALPHA_STEPS, eps=DEFAULT_EPS):
    """Evenly spaced alpha over [1/2, 1], with the top capped at 1 - eps."""
    if eps < 1e-4:
        raise ValidationError(f"eps must be >= 1e-4, got {eps!r}")
    if steps < 2:
        raise ValidationError("alpha grid needs at least 2 steps")
    return np.minimum(np.linspace(0.5, 1.0, steps), 1.0 - eps)


@dataclass
class GridTable:
    header: list
    rows: list

    def column(self, name):
        i = self.header.index(name)
        return np.array([r[i] for r in self.rows])

    @property
    def max_gap(self):
        return float(self.column("gap").max())

    @property
    def min_gap(self):
        return float(self.column("gap").min())

    def to_csv(self):
        return to_csv(self.header, self.rows)


EXAMPLE_HEADER = ["alpha", "{x}", "lhs_closed", "lhs_pipeline", "bound_closed", "bound_pipeline", "gap"]


def _check_cell(label, lhs_c, lhs_p, b_c, b_p, check):
    gap = lhs_p - b_p
    if check:
        if abs(lhs_c - lhs_p) > AGREEMENT_TOL or abs(b_c - b_p) > AGREEMENT_TOL:
            raise ClosedFormMismatch(
                f"closed form disagrees with the engine at {label}: "
                f"lhs {lhs_c!r} vs {lhs_p!r}, bound {b_c!r} vs {b_p!r}; "
                "the engine is authoritative, the transcription is suspect"
            )
        if gap < -GAP_TOL:
            raise InequalityViolation(f"bound exceeds coherence at {label}: gap {gap!r}")
    return gap


def pseudopure_mub_table(alphas=None, vs=None, check=True):
    """Pseudopure states over the qubit MUB triple with beta = alpha."""
    alphas = alpha_grid() if alphas is None else alphas
    vs = np.linspace(0.0, 1.0, DEFAULT_STATE_STEPS) if vs is None else vs
    ens = qubit_mub_triple().require_certified()
    rows = []
    for a in alphas:
        a = float(a)
        for v in vs:
            v = float(v)
            rho = pseudopure(v)
            lhs_p = average_coherence(ens, rho, a, a)
            b_p = coherence_lower_bound(rho, ens, a, a).value
            lhs_c = closed_forms.pseudopure_mub_coherence(a, v)
            b_c = closed_forms.pseudopure_mub_bound(a, v)
            gap = _check_cell(f"alpha={a!r}, v={v!r}", lhs_c, lhs_p, b_c, b_p, check)
            rows.append((a, v, lhs_c, lhs_p, b_c, b_p, gap))
    return GridTable([h.format(x="v") for h in EXAMPLE_HEADER], rows)


def sic_bloch_table(alphas=None, r1s=None, check=True):
    """Bloch vectors (r1, 0, r1) under the qubit SIC-POVM with beta = -alpha."""
    alphas = alpha_grid() if alphas is None else alphas
    r1s = np.linspace(0.0, 1 / math.sqrt(2), DEFAULT_STATE_STEPS) if r1s is None else r1s
    sic = qubit_sic()
    shape = EnsembleShape.of(sic)
    rows = []
    for a in alphas:
        a = float(a)
        for r1 in r1s:
            r1 = float(r1)
            rho = bloch_qubit(r1, 0.0, r1)
            lhs_p = frame_coherence(rho, sic, a, -a)
            b_p = etf_bound(rho, shape, a, -a).value
            lhs_c = closed_forms.sic_bloch_coherence(a, r1)
            b_c = closed_forms.sic_bloch_bound(a, r1)
            gap = _check_cell(f"alpha={a!r}, r1={r1!r}", lhs_c, lhs_p, b_c, b_p, check)
            rows.append((a, r1, lhs_c, lhs_p, b_c, b_p, gap))
    return GridTable([h.format(x="r1") for h in EXAMPLE_HEADER], rows)


# generic scans

@dataclass
class SweepSpec:
    """Grid over up to four axes (alpha, beta, v, r1) with fixed values for the rest.

    `axes` maps an axis name to (start, stop, steps). `state` is used when
    neither v nor r1 is swept; v sweeps pseudopure states, r1 sweeps Bloch
    vectors (r1, 0, r1).
    """

    ensemble: object
    axes: dict = field(default_factory=dict)
    alpha: float = None
    beta: float = None
    state: object = None
    seed: int = 0

    def __post_init__(self):
        for name, (start, stop, steps) in self.axes.items():
            if name not in AXES:
                raise ValidationError(f"unknown axis {name!r}; choose from {AXES}")
            if steps < 2 or not start < stop:
                raise ValidationError(f"axis {name}: need steps >= 2 and start < stop")
        if "v" in self.axes and "r1" in self.axes:
            raise ValidationError("sweep v or r1, not both")
        for name in ("alpha", "beta"):
            if name not in self.axes and getattr(self, name) is None:
                raise ValidationError(f"{name} is neither swept nor fixed")
        if "v" not in self.axes and "r1" not in self.axes and self.state is None:
            raise ValidationError("no state given and neither v nor r1 swept")

    def points(self):
        names = list(self.axes)
        grids = [np.linspace(*self.axes[n]) for n in names]
        for combo in (np.stack(np.meshgrid(*grids, indexing="ij"), -1).reshape(-1, len(names))
                      if names else [()]):
            yield dict(zip(names, (float(x) for x in combo)))


def scan(spec):
    """Average coherence, bound and gap at every grid point of `spec`."""
    ens = as_ensemble(spec.ensemble).require_certified()
    names = list(spec.axes)
    rows = []
    for pt in spec.points():
        a = pt.get("alpha", spec.alpha)
        b = pt.get("beta", spec.beta)
        if "v" in pt:
            rho = pseudopure(pt["v"])
        elif "r1" in pt:
            rho = bloch_qubit(pt["r1"], 0.0, pt["r1"])
        else:
            rho = spec.state
        CoherenceParams(a, b)
        if b == 0:
            lhs = average_renyi_coherence(ens, rho, a)
            bnd = renyi_bound(rho, ens, a)
        else:
            lhs = average_coherence(ens, rho, a, b)
            bnd = coherence_lower_bound(rho, ens, a, b).value
        rows.append(tuple(pt[n] for n in names) + (lhs, bnd, lhs - bnd))
    header = names + ["avg_coherence", "bound", "gap"]
    return GridTable(header, rows)


# randomized verification

@dataclass
class RandomTestSummary:
    ensemble: str
    samples: int
    seed: int
    checks: int = 0
    min_gap: float = math.inf
    argmin: dict = None
    min_bound: float = math.inf
    violations: list = field(default_factory=list)
    coincidence_violations: int = 0
    negative_bounds: int = 0
    negative_examples: list = field(default_factory=list)
    max_coincidence_excess: float = -math.inf

    @property
    def violation_count(self):
        return len(self.violations)

    @property
    def passed(self):
        return not self.violations and not self.coincidence_violations and not self.negative_bounds

    def lines(self):
        out = [
            f"ensemble {self.ensemble}: {self.samples} states x {self.checks // max(self.samples, 1)} "
            f"parameter points (seed {self.seed})",
            f"  min gap (coherence - bound): {self.min_gap:.6e}",
            f"  min bound: {self.min_bound:.6e}",
            f"  max averaged coincidence - its bound: {self.max_coincidence_excess:.6e}",
            f"  inequality violations: {self.violation_count}",
            f"  negative bounds: {self.negative_bounds}",
            f"  coincidence bound violations: {self.coincidence_violations}",
        ]
        if self.argmin is not None:
            out.append(f"  argmin: alpha={self.argmin['alpha']}, beta={self.argmin['beta']}, "
                       f"state index {self.argmin['index']}")
        return out


def random_test(ensemble, samples=1000, seed=0, branches=(Branch.B1, Branch.B2, Branch.B3),
                grid=None):
    """Check the averaged-coherence bound and the coincidence bound on random states.

    States are Ginibre samples from a single stream seeded by `seed`. Every
    (alpha, beta) in `grid` (default: :data:`BRANCH_GRID` restricted to
    `branches`) is checked against each state.
    """
    if samples < 1:
        raise ValidationError("samples must be >= 1")
    ens = as_ensemble(ensemble).require_certified()
    if grid is None:
        grid = [p for br in branches for p in BRANCH_GRID[br]]
    summary = RandomTestSummary(ens.name or "ensemble", samples, seed)
    argmin_state = None
    for idx, rho in enumerate(random_states(ens.dim, samples, seed)):
        ioc = np.mean([index_of_coincidence(outcome_probabilities(m, rho)) for m in ens.members])
        excess = ioc - coincidence_bound(rho, ens)
        summary.max_coincidence_excess = max(summary.max_coincidence_excess, excess)
        if excess > COINCIDENCE_TOL:
            summary.coincidence_violations += 1
        for a, b in grid:
            lhs = average_coherence(ens, rho, a, b)
            try:
                bnd = coherence_lower_bound(rho, ens, a, b).value
            except ConsistencyError as exc:
                summary.negative_bounds += 1
                summary.negative_examples.append({"alpha": a, "beta": b, "index": idx,
                                                  "error": str(exc)})
                continue
            summary.checks += 1
            gap = lhs - bnd
            if bnd < summary.min_bound:
                summary.min_bound = bnd
            if gap < summary.min_gap:
                summary.min_gap = gap
                summary.argmin = {"alpha": a, "beta": b, "index": idx}
                argmin_state = rho
            if gap < -GAP_TOL:
                summary.violations.append({"alpha": a, "beta": b, "index": idx, "gap": gap,
                                           "state": rho.to_json()})
    if argmin_state is not None:
        summary.argmin["state"] = argmin_state.to_json()
    return summary
