import math

import numpy as np
import pytest

from coherence_bounds import closed_forms, sweeps
from coherence_bounds.bounds import EnsembleShape, coherence_lower_bound, pure_state_bounds
from coherence_bounds.coherence import Branch, average_coherence
from coherence_bounds.errors import ClosedFormMismatch, ValidationError
from coherence_bounds.frames import builtin_ensemble, prime_mub_set, qubit_mub_triple, simplex_etf
from coherence_bounds.states import random_state

R1_MAX = 1 / math.sqrt(2)


def test_alpha_grid():
    g = sweeps.alpha_grid()
    assert len(g) == 81 and g[0] == 0.5 and g[-1] == 1 - 1e-4
    assert g[1] == pytest.approx(0.50625)
    with pytest.raises(ValidationError):
        sweeps.alpha_grid(eps=1e-5)


def test_example1_known_cells():
    t = sweeps.pseudopure_mub_table(alphas=[0.5, 0.7, 0.9], vs=[0.0, 1.0])
    rows = {(r[0], r[1]): r for r in t.rows}
    for a in (0.5, 0.7, 0.9):
        assert abs(rows[(a, 0.0)][3]) < 1e-12 and abs(rows[(a, 0.0)][5]) < 1e-12
    assert rows[(0.5, 1.0)][3] == pytest.approx((2 - 2 ** 0.75) / 0.75)
    assert rows[(0.5, 1.0)][3] == pytest.approx(0.42427622599, abs=1e-10)


def test_example2_known_cells():
    a = 0.6
    t = sweeps.sic_bloch_table(alphas=[a], r1s=[0.0, R1_MAX])
    # I/2 under the SIC: every weighted overlap is 2^(-1-alpha)
    s = 4 * 2 ** (-(1 + a) / a)
    assert t.rows[0][3] == pytest.approx((s ** (-a * a) - 1) / ((a - 1) * -a))
    assert t.rows[1][5] == pytest.approx(pure_state_bounds(EnsembleShape(2, 4), a, -a)[0], abs=1e-12)
    assert min(t.column("gap")) >= -1e-9


def test_closed_forms_at_pure_endpoints():
    for a in (0.5, 0.8, 0.9999):
        # equality at alpha = 1/2 for the SIC, so allow rounding
        assert closed_forms.sic_bloch_coherence(a, R1_MAX) >= closed_forms.sic_bloch_bound(a, R1_MAX) - 1e-12
        assert closed_forms.pseudopure_mub_coherence(a, 1.0) >= closed_forms.pseudopure_mub_bound(a, 1.0) - 1e-12


def test_mismatch_is_reported(monkeypatch):
    monkeypatch.setattr(closed_forms, "pseudopure_mub_bound", lambda a, v: 1.0)
    with pytest.raises(ClosedFormMismatch, match="transcription"):
        sweeps.pseudopure_mub_table(alphas=[0.6], vs=[0.5])
    t = sweeps.pseudopure_mub_table(alphas=[0.6], vs=[0.5], check=False)
    assert t.rows[0][4] == 1.0


def test_csv_format():
    text = sweeps.to_csv(["a", "b"], [(0.1, 1 / 3), (2.0, 1e-20)])
    assert text == "a,b\n0.1,0.333333333333\n2,1e-20\n"
    assert "\r" not in text


def test_sweep_spec_validation():
    e = qubit_mub_triple()
    with pytest.raises(ValidationError):
        sweeps.SweepSpec(e, {"gamma": (0, 1, 3)}, alpha=0.5, beta=1)
    with pytest.raises(ValidationError):
        sweeps.SweepSpec(e, {"alpha": (0.6, 0.5, 3)}, beta=1, state=random_state(2, 0))
    with pytest.raises(ValidationError):
        sweeps.SweepSpec(e, {"alpha": (0.5, 0.6, 1)}, beta=1, state=random_state(2, 0))
    with pytest.raises(ValidationError):
        sweeps.SweepSpec(e, {}, alpha=0.5, state=random_state(2, 0))
    with pytest.raises(ValidationError):
        sweeps.SweepSpec(e, {}, alpha=0.5, beta=1)
    with pytest.raises(ValidationError):
        sweeps.SweepSpec(e, {"v": (0, 1, 3), "r1": (0, 0.5, 3)}, alpha=0.5, beta=1)


def test_one_point_scan_is_a_single_query():
    rho, e = random_state(3, 2), prime_mub_set(3)
    t = sweeps.scan(sweeps.SweepSpec(e, {}, alpha=0.7, beta=-1.0, state=rho))
    assert len(t.rows) == 1
    lhs, bound, gap = t.rows[0]
    assert lhs == average_coherence(e, rho, 0.7, -1.0)
    assert bound == coherence_lower_bound(rho, e, 0.7, -1.0).value
    assert gap == lhs - bound


def test_scan_grid_order_and_determinism():
    spec = sweeps.SweepSpec(qubit_mub_triple(), {"alpha": (0.5, 0.9, 3), "v": (0, 1, 4)}, beta=0.5)
    t = sweeps.scan(spec)
    assert t.header == ["alpha", "v", "avg_coherence", "bound", "gap"]
    assert [r[:2] for r in t.rows][:4] == [(0.5, 0.0), (0.5, 1 / 3), (0.5, 2 / 3), (0.5, 1.0)]
    assert sweeps.scan(spec).to_csv() == t.to_csv()


def test_scan_renyi_column():
    spec = sweeps.SweepSpec(qubit_mub_triple(), {"beta": (-0.5, 0.5, 3)}, alpha=0.7,
                            state=random_state(2, 1))
    t = sweeps.scan(spec)
    assert t.rows[1][0] == 0.0 and np.all(np.isfinite(t.column("gap")))


def test_scan_rejects_uncertified():
    from coherence_bounds.frames import MuetfEnsemble, computational_basis
    from coherence_bounds.errors import CertificationError
    b = computational_basis(2)
    with pytest.raises(CertificationError):
        sweeps.scan(sweeps.SweepSpec(MuetfEnsemble([b, b]), {}, alpha=0.6, beta=1,
                                     state=random_state(2, 0)))


def test_random_test_large_alpha_clean():
    s = sweeps.random_test(simplex_etf(4), samples=100, seed=3, branches=[Branch.B1])
    assert s.passed and s.violation_count == 0
    assert s.checks == 100 * len(sweeps.BRANCH_GRID[Branch.B1])
    assert s.argmin["state"] and "inequality violations: 0" in "\n".join(s.lines())


def test_random_test_reports_small_alpha_violations():
    s = sweeps.random_test(qubit_mub_triple(), samples=20, seed=0, branches=[Branch.B2])
    assert not s.passed and s.violation_count > 0
    v = s.violations[0]
    assert set(v) == {"alpha", "beta", "index", "gap", "state"} and v["gap"] < -1e-9


def test_random_test_records_negative_bounds():
    s = sweeps.random_test(simplex_etf(6), samples=1, seed=0, branches=[Branch.B1])
    assert s.negative_bounds > 0 and s.negative_examples[0]["index"] == 0


def test_random_test_deterministic():
    a = sweeps.random_test(builtin_ensemble("sic2"), 30, 9)
    b = sweeps.random_test(builtin_ensemble("sic2"), 30, 9)
    assert a.lines() == b.lines() and a.violations == b.violations


def test_random_test_needs_samples():
    with pytest.raises(ValidationError):
        sweeps.random_test(qubit_mub_triple(), samples=0)
