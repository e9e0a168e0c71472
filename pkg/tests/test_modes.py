"""Mode-space detection probabilities against independent Fock-basis oracles."""
import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biphoton.errors import ConfigurationError
from biphoton.modes import (
    AuditReport,
    FinalMode,
    MixtureWeights,
    TwoPhotonCoeff,
    forward_prob_general,
    forward_prob_single,
    mixed_reconstruction,
    norm_factor,
    random_coeff,
    random_mode,
    reversed_intensity_conditional,
    reversed_intensity_single,
    time_reversal_audit,
)


def fock_vector(c):
    """Amplitudes of sum_ab c_ab a+(a) a+(b) |0> on the a<=b occupation basis.

    A doubly occupied mode picks up the bosonic sqrt(2); distinct modes add
    the two orderings.
    """
    n = c.shape[0]
    out = []
    for a in range(n):
        for b in range(a, n):
            out.append(np.sqrt(2) * c[a, a] if a == b else c[a, b] + c[b, a])
    return np.array(out)


def basis_mode(n, s):
    e = np.zeros(n)
    e[s] = 1.0
    return FinalMode(e)


def projection_prob(fc, c_final):
    """|<final|pair state>|^2 by direct overlap in the physical basis."""
    v_pair = fock_vector(fc.f)
    assert np.linalg.norm(v_pair) == pytest.approx(1.0, abs=1e-12)
    return np.abs(np.vdot(fock_vector(c_final), v_pair)) ** 2


# ------------------------------------------------------------- constructors


def test_random_coeff_deterministic_per_seed():
    a = random_coeff(6, seed=123)
    b = random_coeff(6, seed=123)
    assert np.array_equal(a.f, b.f)
    assert not np.array_equal(a.f, random_coeff(6, seed=124).f)


def test_random_coeff_invariants_many_seeds():
    for seed in range(100):
        fc = random_coeff(5, seed)
        assert np.array_equal(fc.f, fc.f.T)
        assert 2 * np.sum(np.abs(fc.f) ** 2) == pytest.approx(1.0, abs=1e-12)


def test_random_coeff_single_mode():
    fc = random_coeff(1, seed=0)
    assert 2 * abs(fc.f[0, 0]) ** 2 == pytest.approx(1.0, abs=1e-12)


def test_random_coeff_rejects_zero_modes():
    with pytest.raises(ConfigurationError):
        random_coeff(0, seed=1)


def test_coeff_rejects_asymmetric():
    f = np.array([[0, 0.5], [0.5j, 0]])
    with pytest.raises(ValueError, match="symmetric"):
        TwoPhotonCoeff(f)


def test_coeff_rejects_wrong_normalization():
    with pytest.raises(ValueError, match="expected 1"):
        TwoPhotonCoeff(np.eye(2))


def test_coeff_rejects_nonsquare():
    with pytest.raises(ValueError):
        TwoPhotonCoeff(np.zeros((2, 3)))


def test_final_mode_must_be_unit():
    with pytest.raises(ValueError, match="norm"):
        FinalMode(np.array([1.0, 1.0]))
    FinalMode(np.array([1.0, 1.0]) / np.sqrt(2))


# -------------------------------------------------------- single-mode pair


def off_diagonal_coeff():
    # All weight on (0,1)+(1,0): 2 * (2 * 0.25) = 1.
    return TwoPhotonCoeff(np.array([[0, 0.5], [0.5, 0]], dtype=complex))


def test_single_prob_zero_for_zero_diagonal():
    fc = off_diagonal_coeff()
    assert forward_prob_single(fc, 0) == 0.0
    assert forward_prob_single(fc, 1) == 0.0


def test_single_prob_is_one_for_one_mode():
    assert forward_prob_single(random_coeff(1, 5), 0) == pytest.approx(1.0, abs=1e-12)


def test_single_prob_index_checked():
    fc = random_coeff(3, 0)
    with pytest.raises(IndexError):
        forward_prob_single(fc, 3)
    with pytest.raises(IndexError):
        reversed_intensity_single(fc, -1)


def test_single_prob_matches_projection_oracle():
    for seed in range(12):
        fc = random_coeff(4, seed)
        s = seed % 4
        want = projection_prob(fc, np.outer(*2 * [np.eye(4)[s]]) / np.sqrt(2))
        assert forward_prob_single(fc, s) == pytest.approx(want, rel=1e-12)


# -------------------------------------------------------- two-mode general


def test_general_reduces_to_single_for_equal_basis_modes():
    fc = random_coeff(5, seed=9)
    for s in range(5):
        e = basis_mode(5, s)
        assert forward_prob_general(fc, e, e) == pytest.approx(
            forward_prob_single(fc, s), rel=1e-14)


def test_norm_factor_is_one_for_orthogonal_modes():
    assert norm_factor(basis_mode(3, 0), basis_mode(3, 2)) == 1.0


def test_general_prob_matches_projection_oracle():
    for seed in range(12):
        fc = random_coeff(4, seed)
        f1 = random_mode(4, 100 + seed)
        f2 = random_mode(4, 200 + seed)
        k = norm_factor(f1, f2)
        c_final = k * np.outer(f1.psi, f2.psi)
        # The physical final state really is normalized; this pins down k.
        assert np.linalg.norm(fock_vector(c_final)) == pytest.approx(1.0, abs=1e-12)
        want = projection_prob(fc, c_final)
        assert forward_prob_general(fc, f1, f2) == pytest.approx(want, rel=1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(1, 12))
def test_probabilities_stay_in_unit_interval(seed, n):
    fc = random_coeff(n, seed)
    singles = [forward_prob_single(fc, s) for s in range(n)]
    assert all(0 <= p <= 1 + 1e-12 for p in singles)
    assert sum(singles) <= 1 + 1e-12
    rng = np.random.default_rng(seed)
    f1 = FinalMode((lambda v: v / np.linalg.norm(v))(
        rng.normal(size=n) + 1j * rng.normal(size=n)))
    f2 = FinalMode((lambda v: v / np.linalg.norm(v))(
        rng.normal(size=n) + 1j * rng.normal(size=n)))
    assert 0 <= forward_prob_general(fc, f1, f2) <= 1 + 1e-12


# ------------------------------------------------------- reversed readouts


def test_reversed_single_is_half_forward():
    fc = random_coeff(3, seed=7)
    ratios = []
    for s in range(3):
        rev = reversed_intensity_single(fc, s)
        assert rev > 0
        ratios.append(forward_prob_single(fc, s) / rev)
    assert ratios == [2.0, 2.0, 2.0]


def test_reversed_single_zero_diagonal():
    assert reversed_intensity_single(off_diagonal_coeff(), 1) == 0.0


def test_reversed_conditional_basis_reduction():
    fc = random_coeff(4, seed=2)
    got = reversed_intensity_conditional(fc, basis_mode(4, 1), basis_mode(4, 1))
    assert got == pytest.approx(abs(fc.f[1, 1]) ** 2, rel=1e-14)


def test_reversed_conditional_matches_loop_oracle():
    fc = random_coeff(5, seed=31)
    f1 = random_mode(5, 41)
    f2 = random_mode(5, 43)
    acc = 0.0
    for s1 in reversed(range(5)):  # summation order deliberately different
        for s2 in reversed(range(5)):
            acc += np.conj(fc.f[s1, s2]) * f1.psi[s1] * f2.psi[s2]
    assert reversed_intensity_conditional(fc, f1, f2) == pytest.approx(
        abs(acc) ** 2, rel=1e-14)


def test_forward_is_4k2_times_reversed_across_sweep():
    fc = random_coeff(6, seed=77)
    f1 = random_mode(6, 78)
    for seed in range(79, 99):
        f2 = random_mode(6, seed)
        fwd = forward_prob_general(fc, f1, f2)
        rev = reversed_intensity_conditional(fc, f1, f2)
        assert fwd == pytest.approx(4 * norm_factor(f1, f2) ** 2 * rev, rel=1e-10)


# --------------------------------------------------------------- mixtures


def test_mixture_single_case_is_identity():
    w = MixtureWeights(((1.0, "case"),))
    assert mixed_reconstruction(w, lambda c: 0.625) == 0.625


def test_mixture_equal_weights_average():
    w = MixtureWeights(((0.5, 1.0), (0.5, 3.0)))
    assert mixed_reconstruction(w, lambda c: c) == 2.0


@pytest.mark.parametrize("cases", [
    (),
    ((0.7, "a"), (0.7, "b")),
    ((-0.2, "a"), (1.2, "b")),
])
def test_mixture_rejects_invalid_weights(cases):
    with pytest.raises(ConfigurationError):
        MixtureWeights(cases)


def test_mixture_matches_density_matrix_oracle():
    # Tr[rho_final rho_pair] with rho_final the weighted final-state mixture.
    for seed in range(8):
        rng = np.random.default_rng(seed)
        n = 4
        fc = random_coeff(n, 1000 + seed)
        w = rng.random(3)
        w /= w.sum()
        cases = []
        rho_final = np.zeros((n * (n + 1) // 2,) * 2, dtype=complex)
        for i in range(3):
            f1 = random_mode(n, rng.integers(2**32))
            f2 = random_mode(n, rng.integers(2**32))
            cases.append((w[i], (f1, f2)))
            v = fock_vector(norm_factor(f1, f2) * np.outer(f1.psi, f2.psi))
            rho_final += w[i] * np.outer(v, v.conj())
        v_pair = fock_vector(fc.f)
        rho_pair = np.outer(v_pair, v_pair.conj())
        want = np.trace(rho_final @ rho_pair).real
        got = mixed_reconstruction(
            MixtureWeights(tuple(cases)),
            lambda case: forward_prob_general(fc, case[0], case[1]))
        assert got == pytest.approx(want, rel=1e-12)


# ------------------------------------------------------------------ audit


def test_audit_small():
    report = time_reversal_audit(2, trials=100, seed=11)
    assert report.max_ratio_dev <= 1e-10


def test_audit_at_scale():
    report = time_reversal_audit(16, trials=1000, seed=42)
    assert report.max_ratio_dev <= 1e-9
    assert report.passed


def test_audit_rejects_bad_counts():
    with pytest.raises(ConfigurationError):
        time_reversal_audit(4, trials=0, seed=1)
    with pytest.raises(ConfigurationError):
        time_reversal_audit(0, trials=10, seed=1)


def test_audit_deterministic_and_serializable():
    a = time_reversal_audit(3, trials=50, seed=5)
    b = time_reversal_audit(3, trials=50, seed=5)
    assert a.max_ratio_dev == b.max_ratio_dev
    d = json.loads(a.to_json())
    assert d["n_modes"] == 3 and d["trials"] == 50 and d["seed"] == 5
    assert d["passed"] is True and isinstance(d["max_ratio_dev"], float)
    assert AuditReport(**{k: d[k] for k in
                          ("n_modes", "trials", "seed", "max_ratio_dev", "tolerance")
                          }).passed == d["passed"]
