import math

import numpy as np
import pytest

from cpvortex.errors import DomainError, SingularityError
from cpvortex.greens import (
    CrossSpaceSpec,
    greens_cpn,
    greens_cpn_derivative,
    greens_ode_oracle,
    greens_plane,
    greens_radial_part,
    greens_sphere,
    volume_density_cpn,
)


class TestCrossSpaceSpec:
    def test_constants(self):
        spec = CrossSpaceSpec(2)
        assert spec.volume == pytest.approx(math.pi**2 / 2)
        assert spec.diameter == math.pi / 2

    def test_bad_n(self):
        with pytest.raises(DomainError):
            CrossSpaceSpec(0)


class TestVolumeDensity:
    def test_n1_quarter_pi(self):
        # 2 sin(pi/4) cos(pi/4) = sin(pi/2) = 1
        assert volume_density_cpn(1, math.pi / 4) == pytest.approx(1.0, rel=1e-14)

    def test_vanishes_at_diameter(self):
        assert volume_density_cpn(1, math.pi / 2 - 1e-8) < 1e-7

    def test_n2_quarter_pi(self):
        assert volume_density_cpn(2, math.pi / 4) == pytest.approx(8.0 / math.pi, rel=1e-14)

    def test_positive_on_open_interval(self):
        for n in (1, 2, 3):
            for r in np.linspace(0.01, math.pi / 2 - 0.01, 50):
                assert volume_density_cpn(n, r) > 0

    @pytest.mark.parametrize("r", [0.0, -0.1, math.pi / 2, 2.0])
    def test_domain(self, r):
        with pytest.raises(DomainError):
            volume_density_cpn(2, r)


class TestGreensCpn:
    def test_n1_at_diameter(self):
        assert greens_cpn(1, math.pi / 2) == 0.0

    def test_n2_at_diameter(self):
        assert greens_cpn(2, math.pi / 2) == pytest.approx(1.0 / (4.0 * math.pi**2), rel=1e-14)

    def test_n1_quarter_pi(self):
        assert greens_cpn(1, math.pi / 4) == pytest.approx(math.log(2.0) / (4.0 * math.pi), rel=1e-14)

    def test_singularity(self):
        with pytest.raises(SingularityError):
            greens_cpn(2, 0.0)

    def test_beyond_diameter(self):
        with pytest.raises(DomainError):
            greens_cpn(2, 1.6)

    def test_blows_up_towards_zero(self):
        for n in (1, 2, 3, 4):
            assert greens_cpn(n, 1e-6) > greens_cpn(n, 1e-3) > greens_cpn(n, 0.1)

    def test_strictly_decreasing(self):
        for n in (1, 2, 3, 4):
            vals = [greens_cpn(n, r) for r in np.linspace(0.02, math.pi / 2, 300)]
            assert np.all(np.diff(vals) < 0)


class TestOdeOracle:
    def test_degenerate_interval(self):
        assert greens_ode_oracle(3, 0.7, 0.7) == 0.0

    def test_n1_quarter_to_half_pi(self):
        val = greens_ode_oracle(1, math.pi / 4, math.pi / 2 - 1e-12)
        assert val == pytest.approx(-math.log(2.0) / (4.0 * math.pi), abs=1e-9)

    def test_matches_closed_form_differences(self):
        rng = np.random.default_rng(0)
        for n in (1, 2, 3, 4):
            for _ in range(10):
                a, b = np.sort(rng.uniform(0.05, math.pi / 2 - 0.05, 2))
                if b - a < 1e-4:
                    continue
                closed = greens_cpn(n, b) - greens_cpn(n, a)
                assert greens_ode_oracle(n, a, b) == pytest.approx(closed, abs=1e-8)

    def test_bad_interval(self):
        with pytest.raises(DomainError):
            greens_ode_oracle(2, 0.9, 0.2)


class TestDerivative:
    def test_antiderivative_relation(self):
        # numeric derivative of the radial profile matches its integrand
        h = 1e-6
        for n in (1, 2, 3, 4):
            for r in np.linspace(0.1, 1.4, 20):
                fd = (greens_radial_part(n, r + h) - greens_radial_part(n, r - h)) / (2 * h)
                s, c = math.sin(r), math.cos(r)
                integrand = (1 - s ** (2 * n)) / (s ** (2 * n - 1) * c)
                assert fd == pytest.approx(integrand, rel=1e-6)

    def test_negative_everywhere(self):
        for n in (1, 2, 3):
            for r in np.linspace(0.05, math.pi / 2 - 0.05, 40):
                assert greens_cpn_derivative(n, r) < 0

    def test_zero_limit_at_diameter(self):
        assert abs(greens_cpn_derivative(2, math.pi / 2)) < 1e-12


class TestPlane:
    def test_unit_distance(self):
        assert greens_plane([0.0, 0.0], [1.0, 0.0]) == 0.0

    def test_distance_e(self):
        assert greens_plane([0.0, 0.0], [math.e, 0.0]) == pytest.approx(-1.0 / (2.0 * math.pi), rel=1e-14)

    def test_symmetry(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            x, y = rng.standard_normal(2), rng.standard_normal(2)
            assert greens_plane(x, y) == greens_plane(y, x)

    def test_coincident(self):
        with pytest.raises(SingularityError):
            greens_plane([1.0, 2.0], [1.0, 2.0])


class TestSphere:
    def test_equator(self):
        assert greens_sphere(math.pi / 2) == pytest.approx(0.0, abs=1e-16)

    def test_antipodal(self):
        assert greens_sphere(math.pi) == pytest.approx(math.log(2.0) / (2.0 * math.pi), rel=1e-14)

    def test_sixty_degrees(self):
        assert greens_sphere(math.pi / 3) == pytest.approx(-math.log(2.0) / (2.0 * math.pi), rel=1e-14)

    def test_singularity(self):
        with pytest.raises(SingularityError):
            greens_sphere(0.0)

    def test_beyond_pi(self):
        with pytest.raises(DomainError):
            greens_sphere(3.5)
