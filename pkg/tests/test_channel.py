import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from heatline.channel import (
    ModeSet,
    assemble_channel,
    combine_spectra,
    concentration_metric,
    first_mode,
    heat_series,
)
from heatline.glsolve import PotentialSamples, make_uniform_grid

PI = math.pi


def zero_potential(intervals: int = 20) -> PotentialSamples:
    grid = make_uniform_grid(intervals)
    return PotentialSamples(grid=grid, values=np.zeros(len(grid)))


def synthetic_modes(radial_coeffs: np.ndarray) -> ModeSet:
    """ModeSet with hand-built sine coefficients for the radial family."""
    n = len(radial_coeffs)
    coeffs = np.zeros((n, 1))
    coeffs[:, 0] = radial_coeffs
    return ModeSet(
        axial_eigenvalues=np.array([0.0]),
        axial_coefficients=coeffs.copy(),
        radial_eigenvalues=np.array([0.0]),
        radial_coefficients=coeffs,
        combined=combine_spectra([0.0], [0.0], 1),
    )


class TestChannelPotential:
    def test_zero_potential_is_pure_centrifugal(self):
        channel = assemble_channel(zero_potential())
        for rho in (0.3, 1.0, 2.5):
            assert channel.evaluate(1.0, rho) == pytest.approx(0.25 / rho**2)

    def test_separability(self, pot300):
        channel = assemble_channel(pot300)
        q = lambda s, rho: channel.evaluate(s, rho)
        for rho in (0.4, 1.7):
            lhs = q(1.0, rho) - q(2.0, rho)
            expected = np.interp(1.0, pot300.grid.points, pot300.values) - np.interp(
                2.0, pot300.grid.points, pot300.values
            )
            assert lhs == pytest.approx(expected, abs=1e-12)

    def test_assembly_arithmetic(self, pot300):
        # grid contains pi/2 (index 150), so interpolation is exact there
        channel = assemble_channel(pot300)
        q_half = pot300.values[150]
        assert channel.evaluate(PI / 2, PI / 2) == pytest.approx(2.0 * q_half + 1.0 / PI**2)

    def test_rejects_nonpositive_radius(self, pot300):
        channel = assemble_channel(pot300)
        with pytest.raises(ValueError):
            channel.evaluate(1.0, 0.0)
        with pytest.raises(ValueError):
            channel.evaluate(1.0, -0.5)


class TestCombineSpectra:
    def test_default_sums(self):
        levels = combine_spectra([0.0, 11.0, 14.0], [0.0, 11.0, 14.0], 9)
        values = [lv.value for lv in levels]
        assert values == [0.0, 11.0, 11.0, 14.0, 14.0, 22.0, 25.0, 25.0, 28.0]

    def test_lambda_two_is_eleven(self):
        levels = combine_spectra([0.0, 11.0, 14.0], [0.0, 11.0, 14.0], 2)
        assert levels[0].value == 0.0
        assert levels[1].value == 11.0

    def test_short_inputs(self):
        levels = combine_spectra([0.0, 11.0], [0.0], 2)
        assert [lv.value for lv in levels] == [0.0, 11.0]

    def test_tie_breaking_is_stable(self):
        levels = combine_spectra([0.0, 1.0], [0.0, 1.0], 4)
        assert [(lv.radial_index, lv.axial_index) for lv in levels] == [
            (1, 1), (1, 2), (2, 1), (2, 2),
        ]

    def test_rejects_descending(self):
        with pytest.raises(ValueError, match="ascending"):
            combine_spectra([1.0, 0.0], [0.0], 2)

    @given(
        seed=st.integers(min_value=0, max_value=2**32 - 1),
        count=st.integers(min_value=1, max_value=12),
    )
    @settings(max_examples=30, deadline=None)
    def test_matches_brute_force(self, seed, count):
        rng = np.random.default_rng(seed)
        axial = np.sort(rng.uniform(0.0, 30.0, size=4))
        radial = np.sort(rng.uniform(0.0, 30.0, size=3))
        levels = combine_spectra(axial, radial, count)
        brute = sorted(mu + nu for mu in radial for nu in axial)
        assert np.allclose([lv.value for lv in levels], brute[:count])


class TestModeSet:
    def test_radial_defaults_to_axial(self, report300):
        modes = ModeSet.from_reports(report300)
        assert np.array_equal(modes.radial_eigenvalues, modes.axial_eigenvalues)

    def test_identical_reports_give_identical_spectra(self, pot300, spectrum, report300):
        from heatline.ritz import verify_potential

        radial = verify_potential(pot300, spectrum)
        modes = ModeSet.from_reports(report300, radial=radial)
        assert np.max(np.abs(modes.radial_eigenvalues - modes.axial_eigenvalues)) <= 1e-12

    def test_combined_head(self, modes300):
        lam = modes300.combined
        assert abs(lam[0].value) < 1e-5
        assert lam[1].value == pytest.approx(11.0, rel=1e-3)


class TestFirstMode:
    def test_vanishes_on_axial_boundary(self, modes300):
        for rho in (0.3, 1.2, 3.0):
            assert first_mode(modes300, 0.0, rho) == pytest.approx(0.0, abs=1e-12)

    def test_vanishes_at_outer_radius(self, modes300):
        scale = abs(first_mode(modes300, PI / 2, 1.0))
        for s in (0.5, 1.5, 2.5):
            assert abs(first_mode(modes300, s, PI)) <= 1e-10 * scale

    def test_small_radius_square_root_behavior(self, modes300):
        # psi_1 ~ c rho near 0, so v_1 = psi_1 / sqrt(rho) ~ c sqrt(rho)
        coeffs = modes300.radial_coefficients[:, 0]
        n = np.arange(1, len(coeffs) + 1)
        slope = math.sqrt(2.0 / PI) * float(coeffs @ n)
        rho = 1e-6
        v = modes300.radial_mode(1, rho)[0]
        assert v == pytest.approx(slope * math.sqrt(rho), rel=1e-4)

    def test_near_axis_branch_is_consistent(self, modes300):
        # the slope limit and the direct series evaluation agree at the switch radius
        rho = 1.0e-8
        coeffs = modes300.radial_coefficients[:, 0]
        n = np.arange(1, len(coeffs) + 1)
        series = math.sqrt(2.0 / PI) * float(coeffs @ np.sin(n * rho)) / math.sqrt(rho)
        limit = math.sqrt(rho) * math.sqrt(2.0 / PI) * float(coeffs @ n)
        assert series == pytest.approx(limit, rel=1e-9)

    def test_rejects_bad_coordinates(self, modes300):
        with pytest.raises(ValueError):
            first_mode(modes300, 1.0, 0.0)
        with pytest.raises(ValueError):
            first_mode(modes300, -0.1, 1.0)
        with pytest.raises(ValueError):
            first_mode(modes300, 1.0, 3.5)


class TestConcentration:
    def test_sine_mode_is_balanced(self):
        # psi = sin(rho): int_0^{pi/2} sin^2 = int_{pi/2}^pi sin^2 = pi/4
        coeffs = np.zeros(8)
        coeffs[0] = 1.0
        modes = synthetic_modes(coeffs)
        assert concentration_metric(modes) == pytest.approx(0.5, abs=1e-9)

    def test_left_heavy_mode(self):
        # psi = (sin(rho) + sin(2 rho)) / sqrt(2) leans into [0, pi/2]:
        # inside = (pi/4 + 2/3), total = pi/2, fraction = 1/2 + 4/(3 pi)
        coeffs = np.zeros(8)
        coeffs[0] = coeffs[1] = 1.0 / math.sqrt(2.0)
        modes = synthetic_modes(coeffs)
        assert concentration_metric(modes) == pytest.approx(0.5 + 4.0 / (3.0 * PI), abs=1e-6)

    def test_constructed_mode_concentrates_in_core(self, modes300):
        assert concentration_metric(modes300) > 0.5

    def test_rejects_bad_split(self, modes300):
        with pytest.raises(ValueError):
            concentration_metric(modes300, split=0.0)
        with pytest.raises(ValueError):
            concentration_metric(modes300, split=PI)


class TestHeatSeries:
    def test_first_mode_initial_data_is_invariant(self, modes300):
        series = heat_series(
            modes300,
            axial_profile=lambda s: modes300.axial_mode(1, s),
            radial_profile=lambda rho: np.where(
                rho > 0.0, modes300.radial_mode(1, np.maximum(rho, 1e-12)), 0.0
            ),
            truncation=16,
        )
        assert series.coefficients[0] == pytest.approx(1.0, abs=1e-4)
        assert np.max(np.abs(series.coefficients[1:])) <= 1e-5
        s, rho = 1.1, 0.8
        u0 = series.evaluate(s, rho, 0.0)
        u2 = series.evaluate(s, rho, 2.0)
        assert u2 == pytest.approx(u0, abs=1e-5 * abs(u0) + 1e-8)

    def test_residual_decay_bound(self, modes300):
        series = heat_series(
            modes300,
            axial_profile=lambda s: np.sin(s),
            radial_profile=lambda rho: np.exp(-2.0 * rho),
            truncation=25,
        )
        lam2 = series.levels[1].value
        tail = series.tail_norm()
        for t in (0.5, 1.0, 2.0):
            bound = tail * math.exp(-lam2 * t) * (1.0 + 1e-9)
            assert series.residual_after_first(t) <= bound

    def test_truncation_refines_initial_field(self, modes300):
        s = np.linspace(0.0, PI, 101)
        rho = np.linspace(1e-6, PI, 101)
        ss, rr = np.meshgrid(s, rho, indexing="ij")
        f = np.sin(ss) * np.exp(-2.0 * rr)
        weights = np.full(101, PI / 100)
        weights[0] = weights[-1] = PI / 200
        w2 = np.outer(weights, weights * rho)
        residuals = []
        for truncation in (1, 4, 9, 16, 25):
            series = heat_series(
                modes300,
                axial_profile=lambda x: np.sin(x),
                radial_profile=lambda r: np.exp(-2.0 * r),
                truncation=truncation,
            )
            u0 = series.evaluate(ss, rr, 0.0)
            residuals.append(math.sqrt(float(np.sum((u0 - f) ** 2 * w2))))
        assert all(b <= a + 1e-12 for a, b in zip(residuals, residuals[1:]))
        assert residuals[-1] < residuals[0]

    def test_rejects_bad_truncation(self, modes300):
        with pytest.raises(ValueError):
            heat_series(modes300, np.sin, np.cos, truncation=0)

    def test_rejects_negative_time(self, modes300):
        series = heat_series(modes300, np.sin, np.cos, truncation=2)
        with pytest.raises(ValueError):
            series.evaluate(1.0, 1.0, -0.1)
