"""Acceptance criteria; each test records one PASS/FAIL line.

All comparisons are exact rational equality.
"""

import subprocess
import sys
import time
from fractions import Fraction as F

from pentalab.factor import Theta, factor, normalize_theta
from pentalab.groups import Block2NModel, SL3SModel, Tri2Model
from pentalab.linalg import RatMatrix
from pentalab.maps import FactorizedSolution
from pentalab.rootdata import DynkinType, cartan_matrix, h_decomposition_dims, tau
from pentalab.suites import Config, acceptance_configs, checks_for, run_check

SEED = 2026
TRI2 = Tri2Model()
SL3 = SL3SModel()


def _check(suite, name):
    return next(c for c in checks_for(suite) if c.name == name)


def _run(configs, suite, names, samples):
    reports = []
    for config in configs:
        for name in names:
            reports.append(run_check(config, _check(suite, name), samples, SEED))
    return reports


def _summary(reports):
    failed = sum(r["failed"] for r in reports)
    rejected = sum(r["rejected"] for r in reports)
    worst = max(r["rejected"] / (r["rejected"] + r["samples"]) for r in reports)
    return failed, rejected, worst


def _unipotent_configs():
    return [c for c in acceptance_configs() if c.theta.unipotent]


def test_criterion_01_pentagon(criterion):
    start = time.perf_counter()
    reports = _run(acceptance_configs(), "pentagon", ["pentagon"], 100)
    elapsed = time.perf_counter() - start
    failed, rejected, worst = _summary(reports)
    ok = failed == 0 and worst < 0.5 and elapsed < 30 and all(r["passed"] == 100 for r in reports)
    criterion(1, ok, f"5 configs x 100 triples, failures={failed}, rejected={rejected}, "
                     f"worst rejection rate={worst:.2f}, wall={elapsed:.1f}s")


def test_criterion_02_prop1(criterion):
    reports = _run(acceptance_configs(), "prop1", ["dot_star_system"], 100)
    failed, rejected, _ = _summary(reports)
    criterion(2, failed == 0, f"5 configs x 100 triples, failures={failed}, rejected={rejected}")


def test_criterion_03_star_closed_form(criterion):
    config = Config(TRI2, Theta.tri2(TRI2, -1, 1))
    report = run_check(config, _check("prop1", "star_closed_form"), 200, SEED)
    sol = FactorizedSolution.of(TRI2, config.theta)
    pinned = sol.star(TRI2.element((2, 3)), TRI2.element((5, 7))).coords
    ok = report["failed"] == 0 and report["passed"] == 200 and pinned == (F(15, 17), F(7, 17))
    criterion(3, ok, f"200 pairs, route failures={report['failed']}, (2,3)*(5,7)={pinned[0]},{pinned[1]}")


def test_criterion_04_rho_order_three(criterion):
    configs = [c for c in acceptance_configs() if c.theta.square_central]
    reports = _run(configs, "sigma", ["rho_order3", "sigma_is_rho_inv"], 200)
    failed, rejected, _ = _summary(reports)
    ok = failed == 0 and len(configs) == 5
    criterion(4, ok, f"{len(configs)} central configs x 200 samples x 2 identities, "
                     f"failures={failed}, rejected={rejected}")


def test_criterion_05_jot(criterion):
    configs = _unipotent_configs()
    reports = _run(configs, "jot", ["j_involution", "k_routes", "j_functional_equation"], 200)
    reports += _run(configs, "s3", ["ij_order3"], 200)
    failed, rejected, _ = _summary(reports)
    criterion(5, failed == 0, f"{len(configs)} unipotent configs x 200 samples x 4 identities, "
                              f"failures={failed}, rejected={rejected}")


def test_criterion_06_factorization(criterion):
    configs = acceptance_configs()
    reports = _run(configs, "factorization", ["round_trip", "uniqueness"], 200)
    reports += _run(configs, "lemma1", ["lemma1"], 100)
    reports += _run(configs, "factorization", ["normalize_theta"], 100)
    failed, rejected, _ = _summary(reports)
    f = factor(RatMatrix.from_rows([[1, 2], [3, 4]]), Block2NModel(n=1))
    pinned_factor = (f.gp == RatMatrix.from_rows([["-1/2", "1/2"], [0, 1]])
                     and f.gm.inv() == RatMatrix.from_rows([[1, 0], [3, 4]]))
    theta = normalize_theta(Theta.tri2(TRI2, 2, 3))
    pinned_theta = theta.matrix == RatMatrix.from_rows([[0, "1/3"], [3, 0]]) and theta.unipotent
    ok = failed == 0 and pinned_factor and pinned_theta
    criterion(6, ok, f"round trip/uniqueness 200, lemma 100, normalization 100 per config; "
                     f"failures={failed}, rejected={rejected}, pinned factor={pinned_factor}, "
                     f"pinned theta={pinned_theta}")


def test_criterion_07_odot(criterion):
    configs = _unipotent_configs()
    names = ["s_sbar", "s_bar_op", "odot_associativity", "odot_via_k", "odot_routes"]
    reports = _run(configs, "odot", names, 100)
    failed, rejected, _ = _summary(reports)
    criterion(7, failed == 0, f"{len(configs)} configs x 100 samples x {len(names)} identities, "
                              f"failures={failed}, rejected={rejected}")


def test_criterion_08_almost_group(criterion):
    configs = [Config(TRI2, Theta.tri2(TRI2, 1, 1)), Config(SL3, Theta.sl3s(SL3, 1, 1))]
    names = ["theta_square", "theta_conjugation_unit", "split", "associativity"]
    reports = _run(configs, "almostgroup", names, 100)
    failed, rejected, _ = _summary(reports)
    excluded = {f"{r['model']['model']}/{r['check']}": r["rejected"] for r in reports}
    criterion(8, failed == 0, f"tri2 and sl3s x 100 x {len(names)}, failures={failed}, "
                              f"domain exclusions={rejected} {excluded}")


def test_criterion_09_root_data(criterion):
    types = ([DynkinType("A", n) for n in range(1, 7)] + [DynkinType("D", n) for n in range(3, 7)]
             + [DynkinType("E", 6)])
    ok = True
    for t in types:
        c, n = cartan_matrix(t), t.rank
        for i in range(1, n + 1):
            ok &= c[i - 1, i - 1] == 2
            ok &= tau(t, tau(t, i)) == i
            for j in range(1, n + 1):
                ok &= c[tau(t, i) - 1, tau(t, j) - 1] == c[i - 1, j - 1]
        h0, h1 = h_decomposition_dims(t)
        ok &= h0 + 2 * h1 == n
    e6 = cartan_matrix(DynkinType("E", 6))
    ok &= e6.row(2) == (0, -1, 2, -1, -1, 0) and e6.row(4) == (0, 0, -1, 0, 2, -1)
    ok &= [tau(DynkinType("A", 4), i) for i in range(1, 5)] == [4, 3, 2, 1]
    ok &= (tau(DynkinType("D", 5), 4), tau(DynkinType("D", 5), 5)) == (5, 4)
    ok &= [h_decomposition_dims(DynkinType(f, r)) for f, r in [("A", 2), ("A", 3), ("D", 5), ("E", 6)]] \
        == [(0, 1), (1, 1), (3, 1), (2, 2)]
    criterion(9, bool(ok), f"{len(types)} types A1-A6, D3-D6, E6")


def test_criterion_10_pullback(criterion):
    reports = _run(acceptance_configs(), "pullback", ["operator_pentagon"], 50)
    failed, rejected, _ = _summary(reports)
    criterion(10, failed == 0, f"5 configs x 50 triples x 6 monomials, failures={failed}, rejected={rejected}")


def _cli(*args):
    return subprocess.run([sys.executable, "-m", "pentalab.cli", *args], capture_output=True)


def test_criterion_11_cli(criterion):
    a = _cli("verify", "--suite", "all", "--seed", "42")
    b = _cli("verify", "--suite", "all", "--seed", "42")
    identical = a.stdout == b.stdout and len(a.stdout) > 0
    codes = {
        "all": a.returncode == 0,
        "jot b=1,c=2": _cli("verify", "--model", "tri2", "--theta", "b=1,c=2", "--suite", "jot").returncode == 2,
        "theta b=0": _cli("verify", "--model", "tri2", "--theta", "b=0,c=1").returncode == 2,
        "pentagon 1 sample": _cli("verify", "--suite", "pentagon", "--samples", "1", "--seed", "7").returncode == 0,
        "factor bad locus": _cli("factor", "[[1,2],[3,0]]").returncode == 1,
        "factor ok": _cli("factor", "[[1,2],[3,4]]").returncode == 0,
    }
    ok = identical and all(codes.values())
    criterion(11, ok, f"byte-identical={identical}, exit codes ok={all(codes.values())} {codes}")
