import numpy as np
import pytest

from critspec.covering import (build_covering, empirical_estimate_constant,
                               poly_space_dim, rho, solve_t)
from critspec.errors import InvalidArgumentError, OutOfRangeError
from critspec.geometry import (make_cantor_measure,
                               make_uniform_square_measure)
from critspec.orlicz import Cube, j_functional, surface_norm
from critspec.spectra import Spectrum

from oracles import t_star

T_STAR = t_star()


@pytest.fixture(scope="module")
def uniform16():
    return make_uniform_square_measure(16)


@pytest.fixture(scope="module")
def ones16(uniform16):
    return np.ones(uniform16.n_atoms)


# ---------------------------------------------------------------------------
# rho and the crossing solver
# ---------------------------------------------------------------------------

def test_rho_vanishes_below_nearest_atom(uniform16, ones16):
    # center off the support: a tiny cube holds no atoms
    assert rho(uniform16, ones16, (0.501, 0.501), 0.01) == 0.0


def test_rho_stabilizes_at_global_value(uniform16, ones16):
    global_j = surface_norm(ones16, uniform16)
    assert rho(uniform16, ones16, (0.2, 0.7), 5.0) == pytest.approx(
        global_j, rel=1e-12)
    assert rho(uniform16, ones16, (0.2, 0.7), 50.0) == pytest.approx(
        global_j, rel=1e-12)


def test_rho_half_mass_cube():
    # cube holding exactly half the atoms of a unit-mass uniform segment
    n = 64
    atoms = np.stack([(np.arange(n) + 0.5) / n, np.zeros(n)], axis=1)
    from critspec.geometry import SingularMeasure
    seg = SingularMeasure(ambient_dim=2, atoms=atoms,
                          masses=np.full(n, 1.0 / n), cell_size=1.0 / n,
                          alpha_nominal=1.0)
    val = rho(seg, np.ones(n), (0.25, 0.0), 0.51)
    captured = np.sum(np.abs(atoms[:, 0] - 0.25) <= 0.255) / n
    assert captured == 0.5
    assert val == pytest.approx(0.5 * T_STAR, rel=1e-10)


def test_rho_monotone_in_side(uniform16, ones16):
    vals = [rho(uniform16, ones16, (0.5, 0.5), s)
            for s in np.linspace(0.05, 1.2, 24)]
    assert np.all(np.diff(vals) >= -1e-12)


def test_solve_t_linear_scaling_on_uniform_segment():
    # J linear in captured mass: crossing sides scale linearly with the
    # target; oracle is a direct scan over cube sides
    n = 64
    atoms = np.stack([(np.arange(n) + 0.5) / n, np.zeros(n)], axis=1)
    from critspec.geometry import SingularMeasure
    seg = SingularMeasure(ambient_dim=2, atoms=atoms,
                          masses=np.full(n, 1.0 / n), cell_size=1.0 / n,
                          alpha_nominal=1.0)
    ones = np.ones(n)
    center = atoms[n // 2]
    total = surface_norm(ones, seg)
    for frac in (0.125, 0.25, 0.5):
        t = solve_t(seg, ones, center, frac * total)
        scan = None
        for side in np.linspace(1e-3, 1.2, 2400):
            if rho(seg, ones, center, side) >= frac * total * (1 - 1e-12):
                scan = side
                break
        assert t <= scan + 1e-9
        assert rho(seg, ones, center, max(t, 1e-12)) >= frac * total * (1 - 1e-9)
        # linear scaling: t(frac) ~ frac * diameter
        assert t == pytest.approx(frac, abs=2.5 / n)


def test_solve_t_half_mass_at_barycenter(uniform16, ones16):
    target = 0.5 * surface_norm(ones16, uniform16)
    t = solve_t(uniform16, ones16, (0.5, 0.5), target)
    captured = np.sum(np.all(np.abs(uniform16.atoms - [0.5, 0.5]) <= t / 2,
                             axis=1)) / 256.0
    assert captured >= 0.5
    assert captured <= 0.5 + 4 * 16 / 256.0  # at most one extra atom ring


def test_solve_t_out_of_range(uniform16, ones16):
    total = surface_norm(ones16, uniform16)
    with pytest.raises(OutOfRangeError):
        solve_t(uniform16, ones16, (0.5, 0.5), 2.0 * total)


# ---------------------------------------------------------------------------
# covering construction
# ---------------------------------------------------------------------------

def test_large_lambda_single_cube(uniform16, ones16):
    total = surface_norm(ones16, uniform16)
    rep = build_covering(uniform16, ones16, lam=8.0 * total, kappa_config=4)
    assert rep.cube_count == 1
    assert rep.covered_per_cube[0] == uniform16.n_atoms
    assert rep.multiplicity_observed == 1


def test_dyadic_quartering_gives_four_cubes(uniform16, ones16):
    total = surface_norm(ones16, uniform16)
    kappa = 4
    rep = build_covering(uniform16, ones16, lam=kappa * total / 4.0,
                         kappa_config=kappa)
    assert rep.cube_count == 4
    # the quartering is exact: every cube holds one quarter of the atoms
    assert set(rep.covered_per_cube) == {64}
    assert rep.multiplicity_observed == 1
    # defining inequality attains the target exactly on the dyadic split
    assert rep.max_j <= rep.target + 1e-9
    assert rep.bound_value == rep.cube_count * poly_space_dim(2, 1.0)


def test_every_atom_covered(uniform16, ones16):
    total = surface_norm(ones16, uniform16)
    for lam_frac in (0.5, 0.21, 0.11, 0.05):
        rep = build_covering(uniform16, ones16, lam=4 * total * lam_frac,
                             kappa_config=4)
        membership = np.zeros(uniform16.n_atoms, dtype=int)
        for cube in rep.cubes:
            membership += cube.contains(uniform16.atoms)
        assert np.all(membership >= 1)
        assert rep.multiplicity_observed == membership.max()
        assert rep.multiplicity_observed <= 16  # plane multiplicity cap


def test_cube_count_law_under_halving_uniform_segment():
    # the strict halving law holds where intervals tile the captured mass;
    # the 2-D grid is checked in its decade-bounded form below
    n = 128
    atoms = np.stack([(np.arange(n) + 0.5) / n, np.zeros(n)], axis=1)
    from critspec.geometry import SingularMeasure
    seg = SingularMeasure(ambient_dim=2, atoms=atoms,
                          masses=np.full(n, 1.0 / n), cell_size=1.0 / n,
                          alpha_nominal=1.0)
    ones = np.ones(n)
    total = surface_norm(ones, seg)
    for frac in (0.4, 0.3, 0.25, 0.21):
        lam = 4 * total * frac
        counts = []
        for _ in range(4):
            counts.append(build_covering(seg, ones, lam,
                                         kappa_config=4).cube_count)
            lam /= 2.0
        for coarse, fine in zip(counts, counts[1:]):
            assert fine <= 2 * coarse + 2


def test_cube_count_decade_law_uniform_square(uniform16, ones16):
    total = surface_norm(ones16, uniform16)
    products = []
    for lam in 4 * total / 4.0 / (10.0 ** np.linspace(0.0, 1.0, 8)):
        rep = build_covering(uniform16, ones16, float(lam), kappa_config=4)
        products.append(rep.cube_count * lam)
    assert max(products) / min(products) <= 2.0


def test_covering_cantor_count_scaling():
    measure = make_cantor_measure(8)
    ones = np.ones(measure.n_atoms)
    total = surface_norm(ones, measure)
    products = []
    for lam in 4 * total / 2.0 / (10.0 ** np.linspace(0.0, 1.0, 6)):
        rep = build_covering(measure, ones, float(lam), kappa_config=4)
        products.append(rep.cube_count * lam)
        # honest overshoot bound: one atom can overshoot the target by at
        # most its own single-atom functional value
        max_jump = T_STAR * measure.masses.max()
        assert rep.max_j <= rep.target + max_jump + 1e-9
    assert max(products) / min(products) <= 2.0


def test_multiplicity_above_cap_is_reported(uniform16, ones16):
    total = surface_norm(ones16, uniform16)
    # overlapping regime; a cap of 1 must trigger the report
    with pytest.warns(RuntimeWarning):
        rep = build_covering(uniform16, ones16, 4 * total / 8.0,
                             kappa_config=4, multiplicity_cap=1)
    assert rep.multiplicity_observed > 1


def test_report_serialization(uniform16, ones16):
    total = surface_norm(ones16, uniform16)
    rep = build_covering(uniform16, ones16, 4 * total / 4.0, kappa_config=4)
    text = rep.to_text()
    lines = text.strip().split("\n")
    assert lines[0].startswith("# covering")
    assert len(lines) == 1 + rep.cube_count
    assert rep.family_count >= 1


def test_poly_space_dim_values():
    assert poly_space_dim(2, 1.0) == 1    # constants in the plane
    assert poly_space_dim(4, 2.0) == 5    # affine functions in R^4
    assert poly_space_dim(3, 1.5) == 4    # affine functions in R^3


# ---------------------------------------------------------------------------
# empirical estimate constant
# ---------------------------------------------------------------------------

def test_estimate_constant_exact_harmonic():
    sp = Spectrum.from_eigenvalues([1.0 / k for k in range(1, 200)])
    grid = np.array([1.0 / k for k in range(1, 200)])
    assert empirical_estimate_constant(sp, 2.0, grid) == pytest.approx(
        0.5, rel=1e-12)


def test_estimate_constant_rejects_bad_input():
    sp = Spectrum.from_eigenvalues([1.0])
    with pytest.raises(InvalidArgumentError):
        empirical_estimate_constant(sp, 0.0, [0.5])
    with pytest.raises(InvalidArgumentError):
        empirical_estimate_constant(sp, 1.0, [])


def test_estimate_constant_circle_window(circle_spectrum_256):
    # true n_+(lambda) ~ 1/lambda on the unit circle, so the measured
    # constant times the norm lands near 1
    norm = surface_norm(np.ones(256), _circle_mesh_256())
    pos = circle_spectrum_256.side("+")
    hi = min(circle_spectrum_256.trusted_k_max, len(pos))
    const = empirical_estimate_constant(circle_spectrum_256, norm, pos[4:hi])
    assert 0.9 <= const * norm <= 1.5


def _circle_mesh_256():
    from critspec.geometry import Circle, make_smooth_curve
    return make_smooth_curve(Circle(radius=1.0), 256)


def test_estimate_constant_stable_under_weight_doubling(circle_spectrum_256):
    from critspec.assemble import WeightFn, assemble_curve_operator
    from critspec.kernels import reference_kernel
    from critspec.spectra import eigensolve

    mesh = _circle_mesh_256()
    norm1 = surface_norm(np.ones(256), mesh)
    pos = circle_spectrum_256.side("+")
    hi = min(circle_spectrum_256.trusted_k_max, len(pos))
    c1 = empirical_estimate_constant(circle_spectrum_256, norm1, pos[4:hi])

    doubled = eigensolve(assemble_curve_operator(
        mesh, WeightFn.constant(2.0), reference_kernel()))
    norm2 = surface_norm(2.0 * np.ones(256), mesh)
    pos2 = doubled.side("+")
    c2 = empirical_estimate_constant(doubled, norm2, pos2[4:hi])
    assert abs(c2 / c1 - 1.0) <= 0.10
