"""Acceptance gate: one check per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""
import math
import subprocess
import sys
import time

import numpy as np
import pytest

from quasipower import smoothing_kernel as sk
from quasipower.berry_esseen import integral_term, verify_bound
from quasipower.gaussian import GaussianSpec
from quasipower.lambda_operator import lambda_apply
from quasipower.lattice import LatticeDistribution
from quasipower.models import (DissectionSpec, binomial_model, correlated_model, dissection_counts, enumerate_derivations,
                               example_grammar, grammar_counts, grammar_model, iid_sum_law, rademacher_demo)
from quasipower.partition_lattice import (SetPartition, enumerate_partitions, fubini_number, is_refinement,
                                          weisner_sum)
from quasipower.quasi_power import exponents, mean_cov, moment_polynomial, rate_experiment

sys.path.insert(0, __file__.rsplit("/", 1)[0])
from conftest import binomial_law, product_law  # noqa: E402
from test_models import brute_table  # noqa: E402


def _rng():
    return np.random.default_rng(7)


def criterion_1():
    bell = [len(enumerate_partitions(m)) for m in range(1, 7)]
    zero = True
    for m in range(2, 6):
        parts = enumerate_partitions(m)
        for beta in parts:
            if len(beta) == 1:
                continue
            for gamma in parts:
                if is_refinement(gamma, beta):
                    zero &= weisner_sum(gamma, beta) == 0
    fub = [fubini_number(j) for j in range(1, 6)]
    ok = bell == [1, 2, 5, 15, 52, 203] and zero and fub == [1, 3, 13, 75, 541]
    return ok, f"bell={bell} weisner_zero={zero} fubini={fub}", 5


def _correlated_gaussian(m, rho=0.4):
    return GaussianSpec(np.zeros(m), (1 - rho) * np.eye(m) + rho * np.ones((m, m)))


def _dependent_binomial(m, n=5):
    # coordinate l is B_0 + B_l summed n times: binomial marginals sharing a common part
    step = {}
    for bits in np.ndindex(*(2,) * (m + 1)):
        key = tuple(bits[0] + b for b in bits[1:])
        step[key] = step.get(key, 0.0) + 0.5 ** (m + 1)
    return iid_sum_law(LatticeDistribution.from_mapping(step), n)


def criterion_2():
    rng = _rng()
    h = _correlated_gaussian(2).charfn()
    t = rng.uniform(-3, 3, size=(1000, 2))
    z = np.zeros(1000)
    closed = h(t) - h(np.stack([t[:, 0], z], 1)) * h(np.stack([z, t[:, 1]], 1))
    err_closed = float(np.max(np.abs(lambda_apply(h, t) - closed)))
    err_plane = 0.0
    for m in (2, 3, 4):
        for cf in (_correlated_gaussian(m).charfn(), _dependent_binomial(m).charfn()):
            for K in range(m):
                pts = rng.uniform(-3, 3, size=(200, m))
                pts[:, K] = 0.0
                err_plane = max(err_plane, float(np.max(np.abs(lambda_apply(cf, pts)))))
    x = product_law(binomial_law(6), binomial_law(5, 0.3))
    y = GaussianSpec(np.zeros(2), np.diag([1.0, 2.0]))
    prod = integral_term(x.charfn(), y.charfn(), 3.0)
    ok = err_closed <= 1e-14 and err_plane <= 1e-10 and abs(prod) <= 1e-8
    return ok, f"closed_form={err_closed:.1e} hyperplane={err_plane:.1e} product={prod:.1e}", 30


def criterion_3():
    branch = float(sk.charfn_phi_P(0.5))
    grid = np.round(np.arange(-12, 13) / 10, 12)
    fourier = max(abs(sk.fourier_transform_f_P(t) - float(sk.charfn_phi_P(t))) for t in grid)
    curv = abs(sk.second_moment_from_charfn() - 12)
    m2 = sk.truncated_moment(2, 1e5)
    lam_ok, resid = True, 0.0
    for m in range(1, 9):
        lam = sk.solve_lambda(m, tol=1e-8)
        lam_ok &= lam <= sk.constant_C1(m)
        resid = max(resid, abs(sk.cdf_P(lam) - 0.75 ** (1 / m)))
    orth = max(abs(sk.shifted_orthant_mass(m, 3.0, th) - 0.75) for m in (1, 2, 3) for th in (1, -1))
    ok = (branch == 0.25 and fourier <= 1e-6 and curv <= 1e-4 and 11.99 <= m2 <= 12 and lam_ok
          and resid <= 1e-8 and orth <= 1e-6)
    return ok, (f"branch={branch} fourier={fourier:.1e} curvature={curv:.1e} E(P^2)={m2:.6f} "
                f"lambda<=C1={lam_ok} quantile={resid:.1e} orthant={orth:.1e}"), 60


def criterion_4():
    cases = []
    for label, model, ns in (("binomial1", binomial_model(1), (16, 64, 256)),
                             ("binomial2", binomial_model(2), (16, 64, 256)),
                             ("correlated", correlated_model(), (16, 64, 256)),
                             ("grammar", grammar_model(), (10, 20, 30))):
        for n in ns:
            x, y = model.standardized(n)
            rep = verify_bound(x, y, math.sqrt(model.phi(n)))
            cases.append((f"{label}@{n}", rep.holds, rep.lhs_sup_distance / rep.rhs_total))
    ok = all(c[1] for c in cases)
    worst = max(cases, key=lambda c: c[2])
    return ok, f"{sum(c[1] for c in cases)}/{len(cases)} hold, max lhs/rhs={worst[2]:.3f} at {worst[0]}", 300


def criterion_5():
    ns = [2**k for k in range(4, 11)]
    parts, ok = [], True
    for label, model in (("m=1", binomial_model(1)), ("m=2", binomial_model(2))):
        exp = rate_experiment(model, ns)
        ratios = exp.doubling_ratios()
        good = -0.62 <= exp.slope <= -0.38 and bool(np.all((ratios >= 0.6) & (ratios <= 0.8)))
        ok &= good
        parts.append(f"{label} slope={exp.slope:.4f} ratios=[{ratios.min():.3f},{ratios.max():.3f}]")
    return ok, " ".join(parts), 120


def criterion_6():
    worst = 0.0
    for model in (binomial_model(1), binomial_model(2), correlated_model()):
        for n in (5, 33, 200):
            law = model.exact_law(n)
            mean, cov = mean_cov(model, n)
            worst = max(worst, float(np.max(np.abs(mean - law.mean()) / np.abs(law.mean()))))
            # a zero covariance entry has no relative error; measure it against the matrix scale
            big = np.max(np.abs(law.cov()))
            scale = np.where(np.abs(law.cov()) > 1e-9 * big, np.abs(law.cov()), big)
            worst = max(worst, float(np.max(np.abs(cov - law.cov()) / scale)))
            for k in exponents(model.dimension, 3):
                exact = law.moment(k)
                pred = moment_polynomial(model, k)(float(n)) * math.prod(math.factorial(i) for i in k)
                worst = max(worst, abs(pred - exact) / abs(exact))
    return worst <= 1e-9, f"max relative error={worst:.1e}", 30


def criterion_7():
    g = example_grammar()
    grammar_ok = all(sum(grammar_counts(g, n).values()) == len(enumerate_derivations(g, n)) for n in range(1, 13))
    word_ok = "abcabababba" in enumerate_derivations(g, 11)
    diss_ok = True
    for text in ("all", "3", "3;4+"):
        spec = DissectionSpec.parse(text, max_n=8)
        diss_ok &= all(dissection_counts(spec, n) == brute_table(spec, n) for n in range(3, 9))
    tot_all = [sum(dissection_counts(DissectionSpec.parse("all", 8), n).values()) for n in (3, 4, 5, 6)]
    tot_tri = [sum(dissection_counts(DissectionSpec.parse("3", 8), n).values()) for n in (4, 5, 6)]
    ok = grammar_ok and word_ok and diss_ok and tot_all == [1, 3, 11, 45] and tot_tri == [2, 5, 14]
    return ok, (f"grammar_dp={grammar_ok} word={word_ok} dissection_brute={diss_ok} "
                f"all={tot_all} triangulations={tot_tri}"), 120


def criterion_8():
    dists = [rademacher_demo(n)[1] for n in (1, 10**2, 10**6)]
    return all(d == 0.5 for d in dists), f"distances={dists}", 30


CLI_SUITE = [
    ["partitions", "--m", "4"],
    ["kernel", "--m", "3", "--format", "json"],
    ["bound", "--model", "correlated", "--n", "16,64"],
    ["bound", "--model", "grammar", "--n", "10,20", "--format", "json"],
    ["rate", "--model", "binomial", "--n", "16,32,...,256"],
    ["rate", "--model", "dissection", "--classes", "3;4+", "--n", "12,16", "--format", "json"],
    ["demo", "--n", "1,100,1000000"],
]


def _cli_outputs():
    return [subprocess.run([sys.executable, "-m", "quasipower", *argv], capture_output=True, check=True).stdout
            for argv in CLI_SUITE]


def criterion_9():
    first, second = _cli_outputs(), _cli_outputs()
    same = [a == b for a, b in zip(first, second)]
    return all(same), f"{sum(same)}/{len(same)} reports byte-identical", 300


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6, criterion_7,
            criterion_8, criterion_9]


def evaluate(fn):
    start = time.perf_counter()
    ok, detail, budget = fn()
    elapsed = time.perf_counter() - start
    ok = ok and elapsed < budget
    line = f"{'PASS' if ok else 'FAIL'} criterion {fn.__name__[-1]}: {detail} ({elapsed:.1f}s of {budget}s)"
    return ok, line


@pytest.mark.parametrize("fn", CRITERIA, ids=[f.__name__ for f in CRITERIA])
def test_criterion(fn, capsys):
    ok, line = evaluate(fn)
    with capsys.disabled():
        print("\n" + line)
    assert ok, line


if __name__ == "__main__":
    results = [evaluate(fn) for fn in CRITERIA]
    for _, line in results:
        print(line)
    sys.exit(0 if all(ok for ok, _ in results) else 1)
