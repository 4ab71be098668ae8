"""Acceptance suite: each criterion runs at its stated tolerance and
prints one pass/fail line (run with ``pytest -s`` to see them inline).

Stochastic criteria state their seed; criteria 5 and 11 carry the
documented rerun-once policy with a second seed.  Regression thresholds
marked FROZEN were produced by the exact pipeline, reviewed, and pinned.
"""

import time

import numpy as np

from empirica import streams
from empirica.cadlag import (
    CadlagStep,
    CountingClass,
    classify_counting,
    j1_local_distance,
    modulus_w_hat,
)
from empirica.changepoint import ChangePointModel, run_convergence_1d
from empirica.charfn import (
    factorization_gap,
    psi_limit,
    psi_n_bruteforce,
    psi_n_exact,
)
from empirica.dists import AtomMix, PolygonalF, Uniform01, one_sided_derivatives
from empirica.errors import CaseUndefinedError
from empirica.limits import sample_n0_path
from empirica.montecarlo import (
    beta_marginal_gof,
    beta_marginal_tv,
    moment_bound_rows,
    variance_identity_rows,
)
from oracles import random_step, w_hat_lattice_oracle

GRID = np.linspace(-3.0, 3.0, 9)

# FROZEN regression value: exact factorization gap at n = 2^14 for the
# reference case (uniform, tau = 0, t = 0.5) computed by the exact cf
# pipeline; observed 0.00200380, pinned with a small safety margin.
FROZEN_INDEPENDENCE_GAP_N14 = 2.05e-3

U = Uniform01()


def _line(num, ok, name, detail):
    print(f"[criterion {num:2d}] {'PASS' if ok else 'FAIL'} {name}: {detail}")


def test_criterion_01_exact_cf_oracle_equivalence():
    start = time.monotonic()
    worst = 0.0
    cells = 0
    dists = [U, PolygonalF(0.25, 0.5), AtomMix(U, 0.25, 0.2)]
    for F in dists:
        for tau in (0.0, 0.25, 0.6):
            for t in (0.1, 0.5):
                for n in range(2, 13):
                    try:
                        exact = psi_n_exact(F, tau, t, n)
                    except CaseUndefinedError:
                        continue
                    oracle = psi_n_bruteforce(F, tau, t, n)
                    gap = float(
                        np.max(np.abs(exact.grid(GRID, GRID) - oracle.grid(GRID, GRID)))
                    )
                    worst = max(worst, gap)
                    cells += 1
    elapsed = time.monotonic() - start
    ok = worst <= 1e-10 and elapsed < 10.0
    _line(1, ok, "exact-cf oracle equivalence",
          f"sup gap {worst:.3e} over {cells} cells in {elapsed:.2f}s")
    assert worst <= 1e-10
    assert elapsed < 10.0


def test_criterion_02_cf_convergence_monotone():
    start = time.monotonic()
    d = one_sided_derivatives(U, 0.0)
    target = psi_limit(U, d, 0.5).grid(GRID, GRID)
    gaps = [
        float(np.max(np.abs(psi_n_exact(U, 0.0, 0.5, 2**k).grid(GRID, GRID) - target)))
        for k in range(4, 15)
    ]
    elapsed = time.monotonic() - start
    monotone = all(b < a for a, b in zip(gaps, gaps[1:]))
    ok = monotone and gaps[-1] < 1e-2 and elapsed < 5.0
    _line(2, ok, "cf convergence",
          f"final gap {gaps[-1]:.5f}, monotone={monotone}, {elapsed:.2f}s")
    assert monotone
    assert gaps[-1] < 1e-2
    assert elapsed < 5.0


def test_criterion_03_independence_gap():
    gaps = {}
    for k in range(1, 15):
        gaps[k] = factorization_gap(psi_n_exact(U, 0.0, 0.5, 2**k), GRID, GRID)
    seq = [gaps[k] for k in sorted(gaps)]
    trend = all(b <= a + 1e-3 for a, b in zip(seq, seq[1:]))
    ok = gaps[1] > 0.0 and gaps[14] < FROZEN_INDEPENDENCE_GAP_N14 and trend
    _line(3, ok, "asymptotic-independence gap",
          f"n=2: {gaps[1]:.5f} > 0, n=2^14: {gaps[14]:.6f} < "
          f"{FROZEN_INDEPENDENCE_GAP_N14} (frozen), trend={trend}")
    assert gaps[1] > 0.0
    assert gaps[14] < FROZEN_INDEPENDENCE_GAP_N14
    assert trend


def test_criterion_04_variance_identity():
    start = time.monotonic()
    bad = []
    for n in (10, 1000):
        rows = variance_identity_rows(
            U, n, [0.25, 0.5, 0.9], 100000, seed=404, exp_id=f"acc-var-{n}"
        )
        bad.extend(r for r in rows if not (r["var_ok"] and r["mean_ok"]))
    elapsed = time.monotonic() - start
    ok = not bad and elapsed < 30.0
    _line(4, ok, "exact variance identity",
          f"6 cells, 4SE bands, M=1e5, {elapsed:.1f}s (seed 404)")
    assert not bad, bad
    assert elapsed < 30.0


def test_criterion_05_beta_marginal_law():
    tv = beta_marginal_tv(1000, 1e-3, 1.0)
    seeds = (505, 1505)  # rerun-once policy: second seed documented
    pvals = []
    for seed in seeds:
        p, _ = beta_marginal_gof(U, 0.0, 1000, 1.0, 100000, seed, f"acc-gof-{seed}")
        pvals.append(p)
        if p > 0.01:
            break
    ok = tv < 2e-3 and pvals[-1] > 0.01
    _line(5, ok, "beta marginal law",
          f"TV(Bin(1000,1e-3), Poi(1)) = {tv:.6f} < 2e-3; chi2 GOF p={pvals[-1]:.4f} "
          f"(seeds tried: {seeds[:len(pvals)]})")
    assert tv < 2e-3
    assert pvals[-1] > 0.01


def test_criterion_06_deterministic_linkage():
    rng_master = 606
    total = {"pos": 0, "neg": 0}
    failures = 0
    setups = [
        (U, 0.3, "acc-link-u"),
        (AtomMix(U, 0.25, 0.25), 0.25, "acc-link-atom"),  # atom exactly at tau
    ]
    reps_per = 50000
    for F, tau, exp_id in setups:
        for r in range(reps_per):
            rng = streams.substream(rng_master, exp_id, r)
            n = int(rng.integers(1, 64))
            x = np.asarray(F.quantile(rng.random(n)), dtype=float)
            t_pos = float(rng.random() * 3.0 * n)
            t_neg = -float((0.001 + rng.random() * 3.0) * n)
            for t in (t_pos, t_neg):
                u = tau + t / n
                if t >= 0:
                    via_counts = int(np.sum((x > tau) & (x <= u)))
                    via_ecdf = int(np.sum(x <= u)) - int(np.sum(x <= tau))
                    total["pos"] += 1
                else:
                    via_counts = -int(np.sum((x > u) & (x < tau)))
                    via_ecdf = int(np.sum(x <= u)) - int(np.sum(x < tau))
                    total["neg"] += 1
                if via_counts != via_ecdf:
                    failures += 1
    ok = failures == 0 and total["pos"] >= 100000 and total["neg"] >= 100000
    _line(6, ok, "deterministic linkage",
          f"{total['pos']} cases t>=0 and {total['neg']} cases t<0, "
          f"{failures} failures (seed {rng_master})")
    assert failures == 0
    assert total["pos"] >= 100000 and total["neg"] >= 100000


def test_criterion_07_moment_bound():
    rng = np.random.default_rng(707)
    triples = []
    while len(triples) < 50:
        r, s, t = np.sort(rng.uniform(0.0, 1.0, size=3))
        if r < s < t:
            triples.append((float(r), float(s), float(t)))
    bad = []
    for n in (10, 100):
        rows = moment_bound_rows(
            U, n, triples, 100000, seed=707, exp_id=f"acc-mom-{n}"
        )
        bad.extend(r for r in rows if not r["ok"])
    ok = not bad
    _line(7, ok, "moment bound",
          f"100 (triple, n) cells, M=1e5, 4SE slack (seed 707); violations: {len(bad)}")
    assert not bad, bad[:3]


def test_criterion_08_counting_classes():
    n = 64
    tau = 0.5
    bad_beta = 0
    integer_seen = 0
    atom = AtomMix(U, 0.7, 0.5)  # ties at the atom merge into integer jumps
    from empirica.empirical import BetaProcess

    for r in range(10000):
        rng = streams.substream(808, "acc-beta-paths", r)
        F = U if r % 2 == 0 else atom
        x = np.asarray(F.quantile(rng.random(n)))
        cls = classify_counting(BetaProcess(x, tau, n).nonneg_restriction())
        if cls not in (CountingClass.UNIT_JUMPS, CountingClass.INTEGER_JUMPS):
            bad_beta += 1
        integer_seen += cls is CountingClass.INTEGER_JUMPS
    assert integer_seen > 0  # the atom route exercises merged jumps
    d = one_sided_derivatives(PolygonalF(0.25, 0.5), 0.25)
    bad_n0 = 0
    for r in range(10000):
        rng = streams.substream(808, "acc-n0-paths", r)
        path = sample_n0_path(d, 3.0, rng)
        if classify_counting(path.right_path()) is not CountingClass.UNIT_JUMPS:
            bad_n0 += 1
    ok = bad_beta == 0 and bad_n0 == 0
    _line(8, ok, "counting-process classes",
          f"1e4 beta paths ({bad_beta} bad), 1e4 two-sided-Poisson right paths "
          f"({bad_n0} bad) (seed 808)")
    assert bad_beta == 0
    assert bad_n0 == 0


def test_criterion_09_modulus_oracle():
    rng = np.random.default_rng(909)
    mismatches = 0
    for _ in range(200):
        k = int(rng.integers(1, 5))
        times = np.unique(np.round(rng.uniform(-0.9, 0.9, size=k), 3))
        sizes = rng.choice([-3.0, -2.0, -1.0, 1.0, 2.0, 3.0], size=times.size) / 4.0
        f = CadlagStep(times, sizes, 0.0)
        delta = int(rng.integers(1, 6)) * 0.1 - 1e-7
        if modulus_w_hat(f, 1, delta) != w_hat_lattice_oracle(f, 1, delta):
            mismatches += 1
    ok = mismatches == 0
    _line(9, ok, "modulus oracle",
          f"200 random <=4-jump functions, lattice 1e-3 with +/-1e-6 jump "
          f"perturbations; mismatches: {mismatches} (seed 909)")
    assert mismatches == 0


def test_criterion_10_j1_sanity():
    target = CadlagStep.indicator(0.0)
    worst = 0.0
    for k in range(2, 65):
        d = j1_local_distance(CadlagStep.indicator(1.0 / k), target, 1)
        worst = max(worst, abs(d - 1.0 / k))
    rng = np.random.default_rng(1010)
    sym_worst = 0.0
    tri_violation = 0.0
    pairs = [(random_step(rng), random_step(rng)) for _ in range(500)]
    for f, g in pairs:
        sym_worst = max(
            sym_worst, abs(j1_local_distance(f, g, 1) - j1_local_distance(g, f, 1))
        )
    for _ in range(500):
        f, g, h = random_step(rng), random_step(rng), random_step(rng)
        viol = (
            j1_local_distance(f, h, 1)
            - j1_local_distance(f, g, 1)
            - j1_local_distance(g, h, 1)
        )
        tri_violation = max(tri_violation, viol)
    ok = worst <= 1e-9 and sym_worst <= 1e-9 and tri_violation <= 1e-9
    _line(10, ok, "J1 sanity",
          f"1/k anchor error {worst:.2e}, symmetry gap {sym_worst:.2e}, "
          f"max triangle violation {tri_violation:.2e} (seed 1010)")
    assert worst <= 1e-9
    assert sym_worst <= 1e-9
    assert tri_violation <= 1e-9


def test_criterion_11_changepoint_application():
    start = time.monotonic()
    model = ChangePointModel(0.25, 0.5)
    seeds = (101, 202)  # rerun-once policy: second seed documented
    outcome = None
    for seed in seeds:
        rep = run_convergence_1d(model, [10000], 2000, seed=seed)
        crit = {c["name"]: c for c in rep.criteria}
        outcome = (seed, crit)
        if rep.passed:
            break
    elapsed = time.monotonic() - start
    seed, crit = outcome
    ok = all(c["passed"] for c in crit.values()) and elapsed < 300.0
    _line(11, ok, "change-point application",
          f"seed {seed}: KS(gamma) p={crit['ks_gamma_vs_normal']['value']:.3f}, "
          f"2-sample KS(tau) p={crit['ks_tau_vs_simulated_argmax']['value']:.3f}, "
          f"|corr|={crit['pair_correlation']['value']:.4f} "
          f"< {crit['pair_correlation']['bound']:.4f}, "
          f"hit rate {crit['horizon_hit_rate']['value']:.4f}, {elapsed:.0f}s")
    for name, c in crit.items():
        assert c["passed"], (name, c)
    assert elapsed < 300.0


def test_criterion_12_reproducibility(tmp_path):
    import json

    from empirica.cli import main

    cfg = {
        "dist": {"kind": "uniform01"},
        "tau": 0.0,
        "times": [0.5],
        "n_schedule": [16, 256, 4096],
        "replications": 5000,
        "seed": 1212,
        "tolerances": {"final_gap": 0.05},
    }
    cfg_path = tmp_path / "cfg.json"
    cfg_path.write_text(json.dumps(cfg))
    digests = {}
    for threads in (1, 4):
        for kind in ("fidi", "independence"):
            out = tmp_path / f"{kind}-t{threads}"
            code = main([kind, "--config", str(cfg_path), "--out", str(out),
                         "--threads", str(threads)])
            assert code == 0
            digests.setdefault(kind, []).append(
                (
                    (out / f"{kind}-report.json").read_bytes(),
                    (out / f"{kind}-metrics.csv").read_bytes(),
                )
            )
    same = all(d[0] == d[1] for d in digests.values())
    _line(12, same, "reproducibility",
          "fidi+independence reports byte-identical at threads {1, 4}")
    assert same
