"""Acceptance criteria 1-11, one test each (criterion 3 split by branch).

Every test prints a PASS/FAIL line, and the terminal summary repeats them.
"""
import math
from collections import Counter

import numpy as np
import pytest
from scipy.optimize import minimize_scalar

from coherence_bounds import (EnsembleShape, average_coherence, average_renyi_coherence,
                              basis_coherence, builtin_ensemble, coherence_lower_bound,
                              computational_basis, etf_bound, maximally_mixed, mub_bound,
                              prime_mub_set, qubit_mub_triple, qubit_sic, random_state,
                              renyi_bound, simplex_etf, tsallis_bound, unified_relative_entropy,
                              verify_frame, verify_muetf)
from coherence_bounds.frames import as_ensemble
from coherence_bounds.scalarfn import (beta_flip_chord, beta_flip_map, entropy_floor,
                                       index_of_coincidence, tsallis_entropy)
from coherence_bounds.states import DensityMatrix
from coherence_bounds.sweeps import GAP_TOL, pseudopure_mub_table, random_test, sic_bloch_table

from conftest import ACCEPTANCE

SWEEP_ENSEMBLES = (["mub2", "mub-prime-3", "mub-prime-5"]
                   + [f"simplex-{d}" for d in range(2, 7)] + ["sic2"])
SWEEP_SAMPLES = 1000
SWEEP_SEED = 0


def report(key, ok, detail):
    ACCEPTANCE[key] = (ok, detail)
    print(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
    return ok


def branch_of(alpha, beta):
    if alpha >= 0.5:
        return "B1"
    return "B2" if beta < 0 else "B3"


@pytest.fixture(scope="module")
def example_tables():
    return pseudopure_mub_table(check=False), sic_bloch_table(check=False)


@pytest.fixture(scope="module")
def sweep():
    return {name: random_test(builtin_ensemble(name), SWEEP_SAMPLES, SWEEP_SEED)
            for name in SWEEP_ENSEMBLES}


def test_criterion_1_example1_gap(example_tables):
    table, _ = example_tables
    ok = table.max_gap <= 0.1 and table.min_gap >= -1e-9 and len(table.rows) == 81 * 101
    report("1", ok, f"max gap {table.max_gap:.6g} (<= 0.1), min gap {table.min_gap:.3g} (>= -1e-9)")
    assert ok


def test_criterion_2_closed_form_agreement(example_tables):
    worst = 0.0
    for t in example_tables:
        worst = max(worst,
                    np.max(np.abs(t.column("lhs_closed") - t.column("lhs_pipeline"))),
                    np.max(np.abs(t.column("bound_closed") - t.column("bound_pipeline"))))
    ok = worst <= 1e-9
    report("2", ok, f"max |closed - pipeline| {worst:.3g} over both default grids")
    assert ok


def _branch_violations(sweep, branch):
    counts = {name: sum(branch_of(v["alpha"], v["beta"]) == branch for v in s.violations)
              for name, s in sweep.items()}
    worst = min((v["gap"] for s in sweep.values() for v in s.violations
                 if branch_of(v["alpha"], v["beta"]) == branch), default=0.0)
    return counts, worst


@pytest.mark.parametrize("branch", ["B1", "B2", "B3"])
def test_criterion_3_inequality_sweep(sweep, branch):
    counts, worst = _branch_violations(sweep, branch)
    total = sum(counts.values())
    bad = {k: v for k, v in counts.items() if v}
    detail = (f"{branch}: {total} violations over {SWEEP_SAMPLES} states x {len(sweep)} ensembles"
              + (f", worst gap {worst:.4g}, by ensemble {bad}" if total else ""))
    report(f"3.{branch}", total == 0, detail)
    assert total == 0, detail


def test_criterion_4_nonnegativity(sweep):
    counts = {name: s.negative_bounds for name, s in sweep.items() if s.negative_bounds}
    min_bound = min(s.min_bound for s in sweep.values())
    examples = [dict(e, ensemble=n) for n, s in sweep.items() for e in s.negative_examples][:3]
    ok = not counts and min_bound >= -1e-10
    detail = f"min finite bound {min_bound:.3g}; negative bounds by ensemble {counts or 'none'}"
    if examples:
        detail += f"; e.g. {examples[0]['ensemble']} state {examples[0]['index']} " \
                  f"alpha={examples[0]['alpha']} beta={examples[0]['beta']}"
    report("4", ok, detail)
    assert ok, detail


def test_criterion_5_tightness():
    worst = 0.0
    ensembles = [qubit_mub_triple(), prime_mub_set(3), prime_mub_set(5), prime_mub_set(7)]
    ensembles += [as_ensemble(computational_basis(d)) for d in (2, 3, 4)]
    params = [(0.5, 1.0), (0.7, 0.7), (0.9, -1.0), (0.3, -2.0), (0.2, 0.5), (0.45, 1.0)]
    for ens in ensembles:
        rho = maximally_mixed(ens.dim)
        for a, b in params:
            worst = max(worst, abs(average_coherence(ens, rho, a, b)),
                        abs(coherence_lower_bound(rho, ens, a, b).value))
    ok = worst <= 1e-10
    report("5", ok, f"max |value| {worst:.3g} at I/d over {len(ensembles)} orthonormal MUB ensembles")
    assert ok


def test_criterion_6_entropy_floor():
    rng = np.random.default_rng(6)
    gammas = np.concatenate([np.linspace(0.05, 2.0, 40), [1.0, 2.0]])
    worst = math.inf
    for _ in range(10_000):
        n = int(rng.integers(2, 17))
        p = rng.dirichlet(np.full(n, rng.choice([0.1, 1.0, 5.0])))
        p = p / p.sum()
        x = index_of_coincidence(p)
        g = float(rng.choice(gammas))
        worst = min(worst, tsallis_entropy(p, g) - entropy_floor(x, g))
    eq2 = 0.0
    for _ in range(2000):
        p = rng.dirichlet(np.ones(int(rng.integers(2, 17))))
        eq2 = max(eq2, abs(tsallis_entropy(p, 2.0) - entropy_floor(index_of_coincidence(p), 2.0)))
    uni = max(abs(tsallis_entropy(np.full(n, 1 / n), g) - entropy_floor(1 / n, g))
              for n in range(1, 17) for g in gammas)
    ok = worst >= -1e-12 and eq2 <= 1e-12 and uni <= 1e-12
    report("6", ok, f"min H - L {worst:.3g}; gamma=2 equality {eq2:.3g}; uniform equality {uni:.3g}")
    assert ok


def test_criterion_7_coincidence_bound(sweep):
    excess = max(s.max_coincidence_excess for s in sweep.values())
    count = sum(s.coincidence_violations for s in sweep.values())
    ok = count == 0 and excess <= 1e-12
    report("7", ok, f"max averaged coincidence - bound {excess:.3g}, violations {count}")
    assert ok


def test_criterion_8_chord():
    xs = np.linspace(0.0, 10.0, 2001)
    worst_upper = worst_lower = worst_knot = 0.0
    for a in np.linspace(0.02, 0.48, 24):
        for b in np.linspace(0.05, 1.0, 20):
            f = np.array([beta_flip_map(x, a, b) for x in xs])
            ch = np.array([beta_flip_chord(x, a, b) for x in xs])
            worst_upper = min(worst_upper, float(np.min(f - ch)))
            worst_lower = min(worst_lower, float(np.min(ch)))
            worst_knot = max(worst_knot, max(abs(beta_flip_chord(k, a, b) - beta_flip_map(k, a, b))
                                             for k in range(11)))
    ok = worst_upper >= -1e-12 and worst_lower >= 0 and worst_knot <= 1e-12
    report("8", ok, f"min f - chord {worst_upper:.3g}, min chord {worst_lower:.3g}, "
                    f"max knot gap {worst_knot:.3g}")
    assert ok


def test_criterion_9_certification():
    builtins = [qubit_mub_triple(), qubit_sic(), *(prime_mub_set(p) for p in (3, 5, 7, 11)),
                *(simplex_etf(d) for d in range(2, 9)), *(computational_basis(d) for d in (2, 5))]
    failed = []
    povm_dev = 0.0
    for obj in builtins:
        ens = as_ensemble(obj)
        rep = verify_muetf(ens)
        frames_ok = all(verify_frame(m).passed for m in ens.members)
        if not (rep.passed and frames_ok):
            failed.append(ens.name)
        for m in ens.members:
            povm_dev = max(povm_dev, np.max(np.abs(m.povm().sum(axis=0) - np.eye(m.dim))))
    v = qubit_sic().vectors
    sq = np.abs(v.conj() @ v.T) ** 2
    sic_dev = np.max(np.abs(sq[~np.eye(4, dtype=bool)] - 1 / 3))
    ok = not failed and sic_dev <= 1e-12 and povm_dev <= 1e-12
    report("9", ok, f"{len(builtins)} constructions, failed {failed or 'none'}; "
                    f"SIC overlap dev {sic_dev:.3g}; POVM completeness dev {povm_dev:.3g}")
    assert ok


def _displayed(rho, arg, alpha, beta):
    """MUB and ETF bounds written out with plain powers; the argument comes from the caller."""
    if alpha >= 0.5:
        t, x = rho.trace_power(alpha), arg(alpha)
        brace = (alpha - 1) / alpha * entropy_floor(x, 1 / alpha) + 1
        return t ** beta / ((alpha - 1) * beta) * brace ** (alpha * beta) - 1 / ((alpha - 1) * beta)
    a = 1 - alpha
    t, x = rho.trace_power(a), arg(a)
    brace = alpha / (alpha - 1) * entropy_floor(x, 1 / a) + 1
    if beta < 0:
        return -t ** beta / (alpha * beta) * brace ** (a * beta) + 1 / (alpha * beta)
    inner = t ** (-beta) / (alpha * beta) * brace ** ((alpha - 1) * beta) - 1 / (alpha * beta)
    return beta_flip_chord(max(inner, 0.0), alpha, beta)


def _mub_arg(rho, M):
    d = rho.dim
    return lambda a: (M - 1 + d * rho.trace_power(2 * a) / rho.trace_power(a) ** 2) / (M * d)


def _etf_arg(rho, N, M=1):
    d = rho.dim
    c, S = (N - d) / (d * (N - 1)), N / d
    return lambda a: ((1 - c) * (d * rho.trace_power(2 * a) / rho.trace_power(a) ** 2 - 1)
                      / (M * N * S) + 1 / N)


def test_criterion_10_specialisations():
    states = [random_state(d, s) for d, s in [(2, 1), (2, 2), (3, 3), (5, 4)]]
    params = [(0.6, 0.5), (0.8, -1.0), (0.5, 1.0), (0.3, -0.7), (0.2, 0.4), (0.45, 1.0)]
    cor12 = 0.0
    for rho in states:
        d = rho.dim
        mub = qubit_mub_triple() if d == 2 else prime_mub_set(d)
        etf = simplex_etf(d)
        for a, b in params:
            generic = coherence_lower_bound(rho, EnsembleShape(d, d, mub.size), a, b).value
            cor12 = max(cor12, abs(mub_bound(rho, d, mub.size, a, b).value - generic),
                        abs(_displayed(rho, _mub_arg(rho, mub.size), a, b) - generic))
            generic = coherence_lower_bound(rho, EnsembleShape(d, d + 1, 1), a, b).value
            cor12 = max(cor12, abs(etf_bound(rho, etf, a, b).value - generic),
                        abs(_displayed(rho, _etf_arg(rho, d + 1), a, b) - generic))
    cor3 = 0.0
    for rho in states:
        shape = EnsembleShape(rho.dim, rho.dim + 1, 2)
        arg = _etf_arg(rho, rho.dim + 1, 2)
        for a in (0.3, 0.6, 0.9):
            cor3 = max(cor3,
                       abs(tsallis_bound(rho, shape, a).value
                           - coherence_lower_bound(rho, shape, a, 1.0).value),
                       abs(tsallis_bound(rho, shape, a).value - _displayed(rho, arg, a, 1.0)))
    cor4 = 0.0
    for rho in states:
        shape = EnsembleShape(rho.dim, rho.dim + 1, 1)
        for a in (0.55, 0.7, 0.9, 0.1, 0.3, 0.45):
            r = renyi_bound(rho, shape, a)
            for eps in (1e-6, -1e-6):
                cor4 = max(cor4, abs(coherence_lower_bound(rho, shape, a, eps).value - r))
    ok = cor12 <= 1e-13 and cor3 <= 1e-13 and cor4 <= 1e-5
    report("10", ok, f"MUB/ETF forms vs generic {cor12:.3g}; Tsallis {cor3:.3g}; "
                     f"Renyi vs beta=+-1e-6 probe {cor4:.3g}")
    assert ok


def _brute_force(rho, alpha, beta):
    # minimise D over the diagonal qubit family diag(q, 1 - q)
    def objective(q):
        sigma = DensityMatrix(np.diag([q, 1.0 - q]).astype(complex))
        return unified_relative_entropy(rho, sigma, alpha, beta)

    grid = np.linspace(1e-6, 1 - 1e-6, 401)
    vals = [objective(q) for q in grid]
    i = int(np.argmin(vals))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    return min(res.fun, vals[i])


def test_criterion_11_minimizer_oracle():
    basis = computational_basis(2)
    worst = 0.0
    for seed in range(50):
        rho = random_state(2, 1000 + seed)
        for a, b in [(0.5, 1.0), (0.7, 0.5), (0.9, -1.0)]:
            worst = max(worst, abs(basis_coherence(rho, basis, a, b) - _brute_force(rho, a, b)))
    ok = worst <= 1e-6
    report("11", ok, f"max |closed form - brute force| {worst:.3g} over 50 qubit states")
    assert ok
