"""Acceptance criteria, one test each, at the stated scales and tolerances.

Every test appends a ``PASS``/``FAIL`` line to the session summary (see
``conftest.pytest_terminal_summary``) before asserting.
"""

import json
import time

import numpy as np
import pytest
from scipy import stats

from matmod import hypothesis as ht
from matmod import montecarlo as mc
from matmod.arrays import Array, left_mul, orthogonal_transform, scalar_product, scalar_square
from matmod.cli import main
from matmod.least_squares import matrix_ls, sample_in, trace_ls
from matmod.linear_models import one_way_layout
from matmod.matrices import random_orthogonal
from matmod.random_arrays import stream
from matmod.submodules import Submodule, from_rows, project, projector

from .conftest import ACCEPTANCE_LINES

pytestmark = pytest.mark.slow


def record(number, title, passed, detail):
    ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'} [{number}] {title}: {detail}")
    print(ACCEPTANCE_LINES[-1])


def rel(diff, *refs):
    scale = 1.0 + max(float(np.max(np.abs(r), initial=0.0)) for r in refs)
    return float(np.max(np.abs(diff), initial=0.0)) / scale


def sum_of_outer(a, b):
    out = np.zeros((a.shape[0], a.shape[0]))
    for i in range(a.shape[1]):
        for r in range(a.shape[0]):
            for c in range(a.shape[0]):
                out[r, c] += a[r, i] * b[c, i]
    return out


def lstsq_row_projection(rows, y):
    coef, *_ = np.linalg.lstsq(rows.T, y, rcond=None)
    return rows.T @ coef


def test_1_algebra_suite():
    rng = stream(1001)
    worst = {"bilinearity": 0.0, "transposition": 0.0, "pythagoras": 0.0, "orthogonal": 0.0, "matrix_form": 0.0}
    for _ in range(1000):
        p, n = (int(v) for v in rng.integers(1, 7, size=2))
        t1, t2, t3 = (Array(rng.normal(size=(p, n)) * rng.uniform(0.1, 10)) for _ in range(3))
        k = rng.normal(size=(p, p))
        lhs = scalar_product(left_mul(k, t1), t2)
        rhs = k @ scalar_product(t1, t2)
        worst["bilinearity"] = max(worst["bilinearity"], rel(lhs - rhs, lhs, rhs))
        lhs = scalar_product(t1 + t2, t3)
        rhs = scalar_product(t1, t3) + scalar_product(t2, t3)
        worst["bilinearity"] = max(worst["bilinearity"], rel(lhs - rhs, lhs, rhs))
        worst["transposition"] = max(
            worst["transposition"], rel(scalar_product(t2, t1) - scalar_product(t1, t2).T, scalar_product(t1, t2))
        )
        q = random_orthogonal(n, rng)
        split = int(rng.integers(0, n + 1))
        a = Array(rng.normal(size=(p, split)) @ q[:split]) if split else Array.zeros(p, n)
        b = Array(rng.normal(size=(p, n - split)) @ q[split:]) if split < n else Array.zeros(p, n)
        whole = scalar_square(a + b)
        worst["pythagoras"] = max(
            worst["pythagoras"], rel(whole - scalar_square(a) - scalar_square(b), whole)
        )
        before = scalar_product(t1, t2)
        after = scalar_product(orthogonal_transform(t1, q), orthogonal_transform(t2, q))
        worst["orthogonal"] = max(worst["orthogonal"], rel(after - before, before))
        oracle = sum_of_outer(t1.data, t2.data)
        worst["matrix_form"] = max(worst["matrix_form"], rel(before - oracle, oracle))
    passed = all(v <= 1e-10 for v in worst.values())
    record(1, "algebra suite, 1000 instances, <= 1e-10 relative", passed,
           ", ".join(f"{k}={v:.2e}" for k, v in worst.items()))
    assert passed, worst


def test_2_projection_suite():
    rng = stream(1002)
    worst = {"idempotence": 0.0, "orthogonality": 0.0, "linearity": 0.0, "roy": 0.0}
    eigmin = np.inf
    for _ in range(500):
        n = int(rng.integers(2, 9))
        p = int(rng.integers(1, 5))
        gens = rng.normal(size=(int(rng.integers(1, n + 1)), n))
        l = from_rows(gens)
        x = Array(rng.normal(size=(p, n)) * rng.uniform(0.1, 10))
        proj = project(x, l)
        worst["idempotence"] = max(worst["idempotence"], rel(project(proj, l).data - proj.data, proj.data))
        resid = x - proj
        z = sample_in(l, p, rng)
        worst["orthogonality"] = max(
            worst["orthogonality"], rel(scalar_product(resid, z), x.data, z.data)
        )
        y = Array(rng.normal(size=(p, n)))
        k1, k2 = rng.normal(size=(p, p)), rng.normal(size=(p, p))
        lhs = project(left_mul(k1, x) + left_mul(k2, y), l).data
        rhs = (left_mul(k1, proj) + left_mul(k2, project(y, l))).data
        worst["linearity"] = max(worst["linearity"], rel(lhs - rhs, lhs, rhs))
        lam = rng.normal(size=p)
        oracle = lstsq_row_projection(gens, lam @ x.data)
        worst["roy"] = max(worst["roy"], rel(lam @ proj.data - oracle, oracle))
        # 200 probes Z in L: |X - Z|^2 - |X - proj|^2 must be nonnegative definite
        coef = rng.normal(size=(200, p, l.r)) * 3.0
        zs = coef @ l.basis
        d = x.data - zs
        gaps = d @ d.transpose(0, 2, 1) - scalar_square(resid)
        eigmin = min(eigmin, float(np.linalg.eigvalsh((gaps + gaps.transpose(0, 2, 1)) / 2)[:, 0].min()))
    passed = (
        worst["idempotence"] <= 1e-12
        and all(worst[k] <= 1e-10 for k in ("orthogonality", "linearity", "roy"))
        and eigmin >= -1e-8
    )
    record(2, "projection suite, 500 pairs x 200 probes", passed,
           ", ".join(f"{k}={v:.2e}" for k, v in worst.items()) + f", min eig gap={eigmin:.3g}")
    assert passed, (worst, eigmin)


def test_3_least_squares_equivalence():
    rng = stream(1003)
    worst = 0.0
    for _ in range(500):
        n = int(rng.integers(1, 9))
        p = int(rng.integers(1, 5))
        l = from_rows(rng.normal(size=(int(rng.integers(1, n + 1)), n)))
        x = Array(rng.normal(size=(p, n)) * rng.uniform(0.1, 10))
        a, b = matrix_ls(x, l), trace_ls(x, l)
        worst = max(worst, float(np.max(np.abs(a.fitted.data - b.fitted.data))))
    mean_gap = 0.0
    for _ in range(100):
        n, p = int(rng.integers(1, 12)), int(rng.integers(1, 5))
        x = Array(rng.normal(size=(p, n)))
        fitted = matrix_ls(x, Submodule.mean(n)).fitted.data
        mean_gap = max(mean_gap, float(np.max(np.abs(fitted - x.data.mean(axis=1, keepdims=True)))))
    passed = worst <= 1e-10 and mean_gap <= 1e-12
    record(3, "matrix vs trace least squares; arithmetic mean", passed,
           f"max fitted gap={worst:.2e} (<=1e-10), mean gap={mean_gap:.2e} (<=1e-12)")
    assert passed


def test_4_estimator_suite():
    result = mc.sigma_unbiasedness(mc.UnbiasednessConfig(replicates=10000))
    record(4, "unbiased sigma_hat and m_hat, 10^4 replicates", result.passed,
           f"sigma_hat {result.details['sigma_hat_se']:.2f} s.e., m_hat {result.details['m_hat_se']:.2f} s.e. (<=5)")
    assert result.passed


def test_5_orthogonal_decomposition_suite():
    indep = mc.projection_independence(mc.IndependenceConfig(replicates=20000))
    moments = mc.wishart_moments(mc.WishartConfig(replicates=20000))
    noncentral = mc.noncentrality_sufficiency(mc.NoncentralityConfig(replicates=5000))
    passed = (
        indep.details["correlation_se"] <= 5
        and indep.details["mean_se"] <= 5
        and moments.details["mean_se"] <= 5
        and noncentral.passed
    )
    record(5, "decomposition: independence, Wishart mean, noncentrality", passed,
           f"cross-corr {indep.details['correlation_se']:.2f} s.e., proj mean {indep.details['mean_se']:.2f} s.e., "
           f"W mean {moments.details['mean_se']:.2f} s.e., KS {noncentral.deviation:.4f} < {noncentral.tolerance:.4f}")
    assert passed


def test_6_distribution_freeness():
    start = time.perf_counter()
    result = mc.distribution_freeness(mc.FreenessConfig(replicates=5000))
    elapsed = time.perf_counter() - start
    passed = result.passed and elapsed <= 300
    ks = ", ".join(f"{k}={v:.4f}" for k, v in result.details["ks"].items())
    record(6, "null roots free of (M, Sigma), 2 x 5000 replicates", passed,
           f"KS {ks} < {result.tolerance:.4f}; {elapsed:.1f}s (<=300s)")
    assert passed


def test_7_univariate_reduction():
    rng = stream(1007)
    f_gap = 0.0
    for sizes in ([3, 4], [5, 5, 5], [2, 3, 4, 5], [10, 2], [6, 7, 3]):
        model = one_way_layout(sizes)
        spec = ht.HypothesisSpec(model.l, Submodule.mean(model.n))
        for _ in range(20):
            y = rng.normal(size=model.n) + np.repeat(rng.normal(size=len(sizes)), sizes)
            roots = ht.test_statistics(Array(y), spec).roots
            f_classic = stats.f_oneway(*np.split(y, np.cumsum(sizes)[:-1])).statistic
            f_gap = max(f_gap, abs(roots[0] * (model.n - model.m) / spec.m2 - f_classic) / max(1.0, f_classic))
    p_gap = 0.0
    datasets = [
        ([5, 6], [0.0, 0.9]),
        ([4, 4, 4], [0.0, 0.5, 1.0]),
        ([8, 7], [0.0, 0.4]),
    ]
    for k, (sizes, shifts) in enumerate(datasets):
        model = one_way_layout(sizes)
        spec = ht.HypothesisSpec(model.l, Submodule.mean(model.n))
        y = stream(2007, k).normal(size=model.n) + np.repeat(shifts, sizes)
        report = ht.test_statistics(Array(y), spec)
        f = report.roots[0] * (model.n - model.m) / spec.m2
        exact = stats.f.sf(f, spec.m2, model.n - model.m)
        out = ht.monte_carlo_pvalues(report, spec, 10000, seed=3007 + k)
        p_gap = max(p_gap, max(abs(pv - exact) for pv in out.pvalues.values()))
    passed = f_gap <= 1e-9 and p_gap <= 0.01
    record(7, "p=1 reduction to the F ratio", passed,
           f"F relative gap={f_gap:.2e} (<=1e-9), MC vs exact p gap={p_gap:.4f} (<=0.01)")
    assert passed


def test_8_cli_determinism_and_exit_codes(tmp_path, capsys):
    def call(*argv):
        code = main(list(argv))
        out, _ = capsys.readouterr()
        return code, out

    data = tmp_path / "groups.csv"
    data.write_text("y1,y2,group\n1,2,a\n5,1,b\n3,4,a\n6,3,b\n2,2,a\n7,2,b\n4,1,c\n3,3,c\n5,2,c\n")
    runs = [call("test", "--input", str(data), "--seed", "99", "--replicates", "2000") for _ in range(2)]
    fits = [call("fit", "--input", str(data)) for _ in range(2)]
    identical = runs[0] == runs[1] and fits[0] == fits[1] and runs[0][0] == 0
    json.loads(runs[0][1])

    def csv(name, text):
        path = tmp_path / name
        path.write_text(text)
        return str(path)

    cases = {
        "non-numeric cell": (call("fit", "--input", csv("bad.csv", "y1,y2\n1,NaN\n2,3\n"))[0], 2),
        "mixed schema": (call("fit", "--input", csv("mix.csv", "y1,group,x1\n1,a,1\n"))[0], 2),
        "missing file": (call("fit", "--input", str(tmp_path / "none.csv"))[0], 2),
        "saturated fit": (call("fit", "--input", csv("sat.csv", "y1,group\n2,a\n4,b\n"))[0], 2),
        "n-m<p": (call("test", "--input", csv("df.csv", "y1,y2,y3,group\n1,2,3,a\n2,1,0,a\n3,3,1,b\n0,1,2,b\n"),
                       "--replicates", "1000")[0], 2),
        "replicates<1000": (call("simulate", "wishart-moments", "--replicates", "10")[0], 2),
        "unknown scenario": (call("simulate", "bogus")[0], 2),
        "singular S1": (call("test", "--input", csv("sing.csv", "y1,y2,group\n1,1,a\n2,2,a\n4,4,a\n3,3,b\n5,5,b\n9,9,b\n"),
                             "--replicates", "1000")[0], 1),
    }
    codes_ok = all(got == want for got, want in cases.values())
    passed = identical and codes_ok
    record(8, "CLI determinism and exit codes", passed,
           f"byte-identical={identical}; " + ", ".join(f"{k}:{g}" for k, (g, _) in cases.items()))
    assert passed, cases
