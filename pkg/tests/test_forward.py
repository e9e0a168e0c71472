"""Two-photon forward evolution and its agreement with the classical trains."""
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from biphoton.analytic import YoungParams, young_two_photon
from biphoton.elements import (
    CircularAperture,
    DoubleSlit,
    FourierLens,
    FreeSpaceFourier,
    Magnifier,
    PinholeSample,
    SHG,
    TwoFWithOffset,
    apply_fourier_lens,
    free_space_fourier,
    magnify,
    two_f_with_offset,
)
from biphoton.errors import GridMismatchError, SamplingError, UnsupportedElementError
from biphoton.forward import (
    SingleParticleKernel,
    TwoPhotonAmplitude,
    coincidence_diagonal,
    evolve,
    forward_vs_reversed_young,
    forward_young,
    kernel_of,
    spdc_initial,
)
from biphoton.grid import Grid1D, SampledField

WL = 780e-9
F = 50e-3


def random_field(grid, wl, seed):
    rng = np.random.default_rng(seed)
    amp = rng.normal(size=grid.n) + 1j * rng.normal(size=grid.n)
    return SampledField(grid, wl, amp)


def random_symmetric_state(grid, seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=(grid.n, grid.n)) + 1j * rng.normal(size=(grid.n, grid.n))
    return TwoPhotonAmplitude(grid, (a + a.T) / 2)


def pair_norm(state):
    return np.sum(np.abs(state.psi) ** 2) * state.grid.dx**2


# ---------------------------------------------------------------- state type


def test_spdc_is_scaled_identity():
    g = Grid1D(4, 0.5)
    psi = spdc_initial(g).psi
    assert np.array_equal(psi, np.eye(4) * 2.0)


def test_spdc_marginal_is_uniform():
    g = Grid1D(9, 0.3)
    psi = spdc_initial(g).psi
    marginal = np.sum(np.abs(psi) ** 2, axis=1) * g.dx
    assert np.allclose(marginal, 1 / g.dx, rtol=1e-15)


def test_asymmetric_amplitude_rejected():
    g = Grid1D(3, 1.0)
    psi = np.zeros((3, 3), dtype=complex)
    psi[0, 1] = 1.0
    with pytest.raises(ValueError, match="symmetric"):
        TwoPhotonAmplitude(g, psi)


def test_amplitude_shape_must_match_grid():
    with pytest.raises(GridMismatchError):
        TwoPhotonAmplitude(Grid1D(4, 1.0), np.zeros((3, 3)))


def test_nonfinite_amplitude_rejected():
    psi = np.full((3, 3), np.nan)
    with pytest.raises(ValueError, match="finite"):
        TwoPhotonAmplitude(Grid1D(3, 1.0), psi)


def test_kernel_shape_must_match_grids():
    g = Grid1D(4, 1.0)
    with pytest.raises(GridMismatchError):
        SingleParticleKernel(g, g, np.zeros((4, 5)))


# ------------------------------------------------------------------ kernels


@pytest.mark.parametrize("element,op", [
    (FourierLens(F), lambda fld: apply_fourier_lens(fld, F)),
    (FreeSpaceFourier(0.35), lambda fld: free_space_fourier(fld, 0.35)),
    (TwoFWithOffset(F, 2e-4), lambda fld: two_f_with_offset(fld, F, 2e-4)),
    (TwoFWithOffset(F, -2e-4, transpose=True),
     lambda fld: two_f_with_offset(fld, F, -2e-4, transpose=True)),
])
def test_kernel_matrix_reproduces_field_operation(element, op):
    g = Grid1D(128, 5e-6)
    fld = random_field(g, WL, seed=7)
    k = kernel_of(element, g, WL)
    want = op(fld)
    assert k.grid_out == want.grid
    assert np.allclose(k.K @ fld.amp, want.amp, atol=1e-12 * np.abs(want.amp).max())


def test_lens_kernel_unitary_up_to_cell_ratio():
    # K^dagger K = (dx_in / dx_out) * I for a lossless relay.
    g = Grid1D(64, 4e-6)
    k = kernel_of(FourierLens(F), g, WL)
    gram = k.K.conj().T @ k.K
    expect = (g.dx / k.grid_out.dx) * np.eye(g.n)
    assert np.allclose(gram, expect, atol=1e-10 * g.dx / k.grid_out.dx)


def test_slit_kernel_is_diagonal_mask():
    g = Grid1D(64, 1e-4)
    x1 = 16 * g.dx
    k = kernel_of(DoubleSlit(x1), g, WL)
    assert k.grid_out == g
    mask = np.diagonal(k.K).real
    assert mask.sum() == 2.0
    assert np.array_equal(k.K, np.diag(mask).astype(complex))
    assert mask[g.index_of(x1)] == 1.0 and mask[g.index_of(-x1)] == 1.0


def test_magnifier_kernel_matches_field_operation():
    g = Grid1D(32, 2e-6, center=1e-5)
    fld = random_field(g, WL, seed=3)
    k = kernel_of(Magnifier(-0.5), g, WL)
    want = magnify(fld, -0.5)
    assert k.grid_out == want.grid
    assert np.allclose(k.K @ fld.amp, want.amp, rtol=1e-14)


def test_two_f_kernel_shares_chirp_guard():
    g = Grid1D(64, 2e-4)  # coarse enough to alias the quadratic phase
    with pytest.raises(SamplingError):
        kernel_of(TwoFWithOffset(F, 5e-3), g, WL)


@pytest.mark.parametrize("element", [SHG(), PinholeSample(0.0), CircularAperture(0.01)])
def test_kernel_of_rejects_nonmatrix_elements(element):
    with pytest.raises(UnsupportedElementError):
        kernel_of(element, Grid1D(16, 1e-5), WL)


# ------------------------------------------------------------------- evolve


def test_evolve_requires_matching_grid():
    k = kernel_of(FourierLens(F), Grid1D(16, 1e-5), WL)
    state = spdc_initial(Grid1D(16, 2e-5))
    with pytest.raises(GridMismatchError):
        evolve(state, k)


def test_evolve_keeps_exact_exchange_symmetry():
    g = Grid1D(48, 3e-6)
    state = random_symmetric_state(g, seed=11)
    out = evolve(state, kernel_of(FourierLens(F), g, WL))
    assert np.array_equal(out.psi, out.psi.T)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), n=st.integers(4, 24))
def test_evolve_preserves_norm_under_lossless_kernel(seed, n):
    g = Grid1D(n, 2.5e-6)
    state = random_symmetric_state(g, seed)
    out = evolve(state, kernel_of(FourierLens(F), g, WL))
    assert pair_norm(out) == pytest.approx(pair_norm(state), rel=1e-10)


def test_evolve_slit_then_lens_gives_joint_cosine():
    # Correlated pairs restricted to +-x1 then Fourier-imaged: the full
    # amplitude matrix is cos(2 pi x1 (x' + x'') / (f lambda)).
    g = Grid1D(128, 2e-5)
    x1 = 16 * g.dx
    state = spdc_initial(g)
    state = evolve(state, kernel_of(DoubleSlit(x1), g, WL))
    state = evolve(state, kernel_of(FourierLens(F), g, WL))
    x = state.grid.coords
    want = np.cos(2 * np.pi * x1 * np.add.outer(x, x) / (F * WL))
    got = state.psi
    assert np.abs(got.imag).max() <= 1e-12 * np.abs(got.real).max()
    got = got.real / np.abs(got.real).max()
    assert np.allclose(got, want / np.abs(want).max(), atol=1e-10)


def test_coincidence_diagonal_of_spdc_is_flat():
    g = Grid1D(10, 0.2)
    rate = coincidence_diagonal(spdc_initial(g))
    assert np.allclose(rate, 2 / g.dx**2, rtol=1e-15)


# ------------------------------------------------------------- young fringe


def young_setup(n=512, x1_cells=16):
    dx = 1e-5
    g = Grid1D(n, dx)
    p = YoungParams(x1=x1_cells * dx, f=F, wavelength=WL)
    return p, g


def measured_period(grid, curve):
    inner = curve[1:-1]
    peaks = np.flatnonzero((inner >= curve[:-2]) & (inner >= curve[2:])) + 1
    return float(np.mean(np.diff(peaks))) * grid.dx


def test_forward_young_matches_cosine_formula():
    p, g = young_setup()
    det, curve = forward_young(p, g)
    assert np.allclose(curve, young_two_photon(det.coords, p), atol=1e-10)


def test_forward_young_full_visibility_for_delta_slits():
    p, g = young_setup()
    _, curve = forward_young(p, g)
    vis = (curve.max() - curve.min()) / (curve.max() + curve.min())
    assert vis == pytest.approx(1.0, abs=1e-6)


def test_forward_young_period_within_one_cell():
    p, g = young_setup()
    det, curve = forward_young(p, g)
    expect = p.f * p.wavelength / (4 * p.x1)
    assert abs(measured_period(det, curve) - expect) < det.dx


def test_forward_young_doubling_x1_halves_period():
    p1, g = young_setup(x1_cells=8)
    p2, _ = young_setup(x1_cells=16)
    det1, c1 = forward_young(p1, g)
    det2, c2 = forward_young(p2, g)
    t1 = measured_period(det1, c1)
    t2 = measured_period(det2, c2)
    assert abs(t1 - 2 * t2) < det1.dx


def test_forward_young_rejects_unresolved_fringe():
    dx = 1e-5
    g = Grid1D(256, dx)
    p = YoungParams(x1=40 * dx, f=F, wavelength=WL)  # 1.6 samples per period
    with pytest.raises(SamplingError):
        forward_young(p, g)


def test_forward_young_finite_slits_keep_dark_fringes():
    # The slit envelope multiplies the cosine; zeros stay exact zeros.
    p, g = young_setup()
    _, curve = forward_young(p, g, slit_width=4 * g.dx)
    assert curve.max() == 1.0
    vis = (curve.max() - curve.min()) / (curve.max() + curve.min())
    assert vis == pytest.approx(1.0, abs=1e-6)


# --------------------------------------------- forward vs reversed readout


def test_forward_equals_reversed_delta_slits():
    p, g = young_setup()
    report = forward_vs_reversed_young(p, g)
    assert report.n_points == g.n
    assert report.max_rel_err <= 1e-10


def test_forward_equals_reversed_finite_slits():
    p, g = young_setup()
    report = forward_vs_reversed_young(p, g, slit_width=4 * g.dx)
    assert report.max_rel_err <= 1e-10


def test_equivalence_does_not_depend_on_relay_lengths():
    p, g = young_setup(n=256, x1_cells=8)
    a = forward_vs_reversed_young(p, g, L1=0.1, L2=0.9)
    b = forward_vs_reversed_young(p, g, L1=0.8, L2=0.15)
    assert a.max_rel_err <= 1e-10 and b.max_rel_err <= 1e-10


def test_unnormalized_curves_match_up_to_single_constant():
    # Least-squares constant between raw coincidence rate and raw pinhole
    # intensity, over random slit separations and two unrelated grids.
    from biphoton.elements import reversed_young_train, run_train
    from biphoton.grid import point_source

    rng = np.random.default_rng(20240817)
    for n, dx in [(256, 1.1e-5), (384, 0.7e-5)]:
        g = Grid1D(n, dx)
        for m in rng.choice(np.arange(3, n // 32 + 1), size=3, replace=False):
            p = YoungParams(x1=int(m) * dx, f=F, wavelength=WL)
            state = spdc_initial(g)
            state = evolve(state, kernel_of(DoubleSlit(p.x1), g, WL))
            state = evolve(state, kernel_of(FourierLens(p.f), g, WL))
            rate = coincidence_diagonal(state)
            det = state.grid
            train = reversed_young_train(p.f, p.x1, 0.25, 0.5)
            inten = np.array([
                run_train(point_source(det, x0, 1.0, WL), train)
                for x0 in det.coords])
            c = np.dot(rate, inten) / np.dot(rate, rate)
            assert np.abs(inten - c * rate).max() <= 1e-6 * inten.max()
