"""Acceptance criteria, one test per criterion.

Run `pytest -s tests/test_acceptance.py` to see one pass/fail line per
criterion; without -s the lines appear for failing criteria only.

The scenario corpus: 100 seeded mixed random scenarios (dims 2-5, beta in
{0.2, 1, 5}, unital and non-unital channels), 100 seeded random unitary
mixtures (unital only), 18 constructed degenerate-gap scenarios, 20 Haar
unitary channels, and the committed cooling-witness golden scenario. All
golden numbers were frozen from the brute-force enumeration oracle in
tests/oracle.py before the package was built.
"""

import numpy as np
import pytest

from fluctlab import Hamiltonian, Scenario, exp_average, scenario_artifacts, validate_channel

GOLDEN = {
    "gamma": 1.4621171572600098,
    "x": -0.37988549304172248,
    "kl": 0.11094407167172737,
    "delta_u": -0.26894142136999516,
    "delta_s": -0.2689414213699951,
    "delta_s_v": -0.58220310888821791,
}


def _line(criterion, name, ok, detail):
    print(f"[acceptance] criterion {criterion:2d} {name}: "
          f"{'PASS' if ok else 'FAIL'} ({detail})")


def _check_max(criterion, name, values, bound):
    worst = max(values)
    ok = worst < bound
    _line(criterion, name, ok, f"max {worst:.3e} < {bound:.0e}")
    assert ok, f"criterion {criterion} {name}: max {worst:.3e} >= {bound:.0e}"


@pytest.fixture(scope="module")
def golden_artifacts():
    h = Hamiltonian.from_matrix(np.diag([0.0, 1.0]))
    channel = validate_channel(
        [np.diag([1.0, 0.0]), [[0.0, 1.0], [0.0, 0.0]]], label="amplitude_damping(p=1)"
    )
    scenario = Scenario(name="golden", dim=2, beta=1.0,
                        h_initial=h, h_final=h, channel=channel)
    return scenario, scenario_artifacts(scenario)


@pytest.fixture(scope="module")
def every_artifact(mixed_artifacts, unital_artifacts, degenerate_artifacts,
                   golden_artifacts):
    return mixed_artifacts + unital_artifacts + degenerate_artifacts + [golden_artifacts]


def test_c01_forward_normalization(mixed_artifacts):
    _check_max(1, "forward normalization",
               [a.report.residuals["forward_norm"] for _, a in mixed_artifacts],
               1e-10)


def test_c02_forward_jarzynski(mixed_artifacts, unital_artifacts):
    _check_max(2, "forward exponential average vs trace formula",
               [a.report.residuals["jarzynski_forward"] for _, a in mixed_artifacts],
               1e-10)
    deviations = []
    for scenario, art in unital_artifacts:
        avg = exp_average(art.forward, -scenario.beta,
                          scenario.beta * art.report.delta_f)
        deviations.append(abs(avg - 1.0))
    _check_max(2, "unital-only batch reduces to 1", deviations, 1e-10)


def test_c03_backward_mass_equals_gamma(every_artifact):
    _check_max(3, "backward total mass vs gamma",
               [a.report.residuals["backward_mass_vs_gamma"] for _, a in every_artifact],
               1e-10)


def test_c04_backward_jarzynski(every_artifact):
    _check_max(4, "backward exponential average equals 1",
               [a.report.residuals["jarzynski_backward"] for _, a in every_artifact],
               1e-10)


def test_c05_crooks_pointwise(every_artifact, degenerate_artifacts):
    assert len(degenerate_artifacts) > 0  # degenerate gaps are in the corpus
    _check_max(5, "pointwise log-ratio relation",
               [a.report.residuals["crooks_max"] for _, a in every_artifact],
               1e-8)


def test_c06_energy_decomposition(every_artifact):
    _check_max(6, "energy decomposition",
               [a.report.residuals["eq11"] for _, a in every_artifact],
               1e-8)
    _check_max(6, "first moment vs trace formula",
               [a.report.residuals["moment_vs_trace"] for _, a in every_artifact],
               1e-10)


def test_c07_entropy_law(every_artifact):
    _check_max(7, "entropy change law vs beta (dU - dF)",
               [a.report.residuals["eq16"] for _, a in every_artifact],
               1e-8)


def test_c08_von_neumann_identity(every_artifact):
    _check_max(8, "von Neumann entropy identity",
               [a.report.residuals["eq17"] for _, a in every_artifact],
               1e-8)


def test_c09_closed_system_limit(unitary_reports):
    assert len(unitary_reports) == 20
    pairwise = []
    dsv = []
    for scenario, report in unitary_reports:
        k = report.kl
        bdudf = scenario.beta * (report.delta_u - report.delta_f)
        s_r = report.s_r_final
        pairwise.append(max(abs(k - bdudf), abs(k - s_r), abs(bdudf - s_r)))
        dsv.append(abs(report.delta_s_v))
    _check_max(9, "K, beta(dU-dF), S_R pairwise agreement", pairwise, 1e-8)
    _check_max(9, "unitary dS_V = 0", dsv, 1e-10)


def test_c10_cooling_witness_golden(golden_artifacts):
    _, art = golden_artifacts
    report = art.report
    worst = max(abs(getattr(report, key) - value) for key, value in GOLDEN.items())
    signs_ok = report.x < 0.0 and report.delta_s < 0.0
    ok = worst < 1e-5 and signs_ok
    _line(10, "cooling witness golden values", ok,
          f"max dev {worst:.3e} < 1e-05, X<0 and dS<0: {signs_ok}")
    assert worst < 1e-5
    assert report.x < 0.0, "cooling must have X < 0"
    assert report.delta_s < 0.0, "cooling must decrease entropy"


def test_c11_unital_positivity(unital_artifacts):
    excess = [a.report.excess_energy for _, a in unital_artifacts]
    entropy = [a.report.delta_s for _, a in unital_artifacts]
    assert len(unital_artifacts) == 100
    ok = min(excess) >= -1e-10 and min(entropy) >= -1e-10
    _line(11, "unital excess energy and entropy non-negative", ok,
          f"min excess {min(excess):.3e}, min dS {min(entropy):.3e}, bound -1e-10")
    assert min(excess) >= -1e-10
    assert min(entropy) >= -1e-10
