import numpy as np
import pytest

from empirica.charfn import (
    empirical_cf,
    factorization_gap,
    psi_limit,
    psi_n_bruteforce,
    psi_n_exact,
)
from empirica.dists import (
    AtomMix,
    PolygonalF,
    Uniform01,
    one_sided_derivatives,
)
from empirica.errors import CaseUndefinedError, EmptyRunError

U = Uniform01()
GRID = np.linspace(-3.0, 3.0, 9)


def _d(F, tau):
    return one_sided_derivatives(F, tau)


# --- limit cf -----------------------------------------------------------------


def test_limit_examples():
    pl = psi_limit(U, _d(U, 0.0), 0.5)
    assert pl(0.0, 0.0) == 1.0
    assert pl(1.0, 0.0) == pytest.approx(np.exp(-0.125))
    assert pl(0.0, np.pi) == pytest.approx(np.exp(-1.0))


def test_limit_factorizes_exactly():
    for t in (0.5, -1.2):
        pl = psi_limit(U, _d(U, 0.25), t)
        assert factorization_gap(pl, GRID, GRID) == 0.0


def test_limit_conjugate_symmetry():
    pl = psi_limit(PolygonalF(0.25, 0.5), _d(PolygonalF(0.25, 0.5), 0.25), 0.7)
    for x in GRID:
        for y in GRID:
            assert pl(-x, -y) == pytest.approx(np.conj(pl(x, y)), abs=1e-14)


# --- finite-n closed form -------------------------------------------------------


def test_psi_n_origin_and_modulus():
    cf = psi_n_exact(U, 0.0, 0.5, 8)
    assert cf(0.0, 0.0) == pytest.approx(1.0, abs=1e-14)
    vals = np.abs(cf.grid(GRID, GRID))
    assert np.all(vals <= 1.0 + 1e-12)


def test_psi_n_case1_hand_value():
    cf = psi_n_exact(U, 0.0, 0.5, 2)
    assert cf(0.0, np.pi) == pytest.approx(0.25, abs=1e-12)


def test_psi_n_case2_no_phase_on_count_term():
    cf = psi_n_exact(U, 0.6, 0.5, 3)
    y = 1.3
    want = (1.0 + (U(0.6 + 0.5 / 3) - 0.6) * (np.exp(1j * y) - 1.0)) ** 3
    assert cf(0.0, y) == pytest.approx(want, abs=1e-12)


def test_psi_n_case_undefined():
    with pytest.raises(CaseUndefinedError):
        psi_n_exact(U, 0.25, 0.5, 2)
    with pytest.raises(CaseUndefinedError):
        psi_n_exact(U, 0.0, -0.5, 4)


def test_psi_n_conjugate_symmetry():
    cf = psi_n_exact(U, 0.0, 0.5, 16)
    for x in (-2.0, 0.7):
        for y in (-1.0, 2.5):
            assert cf(-x, -y) == pytest.approx(np.conj(cf(x, y)), abs=1e-13)


# --- brute-force oracle -----------------------------------------------------------


def test_bruteforce_t_negative_hand_value():
    cf = psi_n_bruteforce(U, 0.5, -1.0, 4)
    y = 0.9
    want = (1.0 + 0.25 * (np.exp(-1j * y) - 1.0)) ** 4
    assert cf(0.0, y) == pytest.approx(want, abs=1e-12)


def test_bruteforce_origin():
    cf = psi_n_bruteforce(AtomMix(U, 0.25, 0.2), 0.25, -0.7, 6)
    assert cf(0.0, 0.0) == pytest.approx(1.0, abs=1e-13)


def test_bruteforce_refine_is_noop():
    cf1 = psi_n_bruteforce(PolygonalF(0.3, 0.6), 0.3, 0.4, 5, refine=1)
    cf3 = psi_n_bruteforce(PolygonalF(0.3, 0.6), 0.3, 0.4, 5, refine=3)
    a, b = cf1.grid(GRID, GRID), cf3.grid(GRID, GRID)
    assert np.max(np.abs(a - b)) < 1e-12


@pytest.mark.parametrize(
    "F",
    [U, PolygonalF(0.25, 0.5), AtomMix(U, 0.25, 0.2)],
    ids=["uniform", "polygonal", "atom_mix"],
)
@pytest.mark.parametrize("tau", [0.0, 0.25, 0.6])
@pytest.mark.parametrize("t", [0.1, 0.5])
def test_closed_form_matches_oracle(F, tau, t):
    for n in range(2, 13):
        try:
            exact = psi_n_exact(F, tau, t, n)
        except CaseUndefinedError:
            continue
        oracle = psi_n_bruteforce(F, tau, t, n)
        gap = np.max(np.abs(exact.grid(GRID, GRID) - oracle.grid(GRID, GRID)))
        assert gap <= 1e-10


def test_single_observation_case_matches_oracle():
    # n = 1 edges: both case splits degenerate to the one-draw expectation
    for tau, t in [(-0.5, 0.5), (0.6, 0.5)]:
        exact = psi_n_exact(U, tau, t, 1)
        oracle = psi_n_bruteforce(U, tau, t, 1)
        gap = np.max(np.abs(exact.grid(GRID, GRID) - oracle.grid(GRID, GRID)))
        assert gap <= 1e-13


def test_negative_t_limit_form_confirmed_by_oracle():
    # the reflected-side limit uses exp(-iy); the oracle must converge to it
    d = _d(U, 0.5)
    target = psi_limit(U, d, -1.0).grid(GRID, GRID)
    gaps = []
    for k in (6, 9, 12):
        n = 2**k
        gaps.append(
            float(np.max(np.abs(psi_n_bruteforce(U, 0.5, -1.0, n).grid(GRID, GRID) - target)))
        )
    assert gaps[-1] < 2e-4
    assert gaps[0] > gaps[1] > gaps[2]


def test_convergence_trend_to_limit():
    d = _d(U, 0.0)
    target = psi_limit(U, d, 0.5).grid(GRID, GRID)
    gaps = [
        float(np.max(np.abs(psi_n_exact(U, 0.0, 0.5, 2**k).grid(GRID, GRID) - target)))
        for k in range(4, 15)
    ]
    assert all(b < a for a, b in zip(gaps, gaps[1:]))
    assert gaps[-1] < 1e-2


# --- empirical cf -------------------------------------------------------------------


def test_empirical_cf_constant_pairs():
    cf = empirical_cf(np.zeros(100), np.zeros(100))
    assert cf(0.0, 0.0) == pytest.approx(1.0, abs=0)
    assert cf(1.3, -0.4) == pytest.approx(1.0, abs=1e-15)


def test_empirical_cf_origin_exact():
    rng = np.random.default_rng(0)
    cf = empirical_cf(rng.normal(size=500), rng.poisson(1.0, size=500))
    assert cf(0.0, 0.0) == pytest.approx(1.0, abs=0)
    assert cf.se == pytest.approx(1.0 / np.sqrt(500))


def test_empirical_cf_needs_two_reps():
    with pytest.raises(EmptyRunError):
        empirical_cf(np.array([1.0]), np.array([2.0]))


def test_empirical_cf_close_to_exact():
    from empirica.montecarlo import joint_pair_values

    n, reps = 64, 40000
    a, b = joint_pair_values(U, 0.0, n, 0.5, reps, 99, "charfn-emp")
    emp = empirical_cf(a, b)
    exact = psi_n_exact(U, 0.0, 0.5, n)
    gap = np.max(np.abs(emp.grid(GRID, GRID) - exact.grid(GRID, GRID)))
    assert gap <= 4.0 / np.sqrt(reps)


def test_self_comparison_gap_zero():
    # harness sanity: an empirical cf compared against itself has gap 0
    rng = np.random.default_rng(1)
    cf = empirical_cf(rng.normal(size=300), rng.integers(0, 4, size=300).astype(float))
    grid_vals = cf.grid(GRID, GRID)
    assert np.max(np.abs(grid_vals - grid_vals)) == 0.0
