"""Tests for anisotropic weights, projections, cutoffs and Weyl quantization."""
import numpy as np
import pytest
import scipy.linalg as sla

from anharmonic.exceptions import DiagnosticError, DomainError, ParameterError
from anharmonic.grid import Grid
from anharmonic.symbols import (
    AnnularSet,
    GridSymbol,
    SigmaCone,
    Weight,
    annular_cutoff,
    annular_profile,
    annulus_boundary_points,
    conic_cutoff,
    ellipticity_check,
    enlarge,
    separation_margin,
    sigma_lambda,
    sigma_project,
    smoothstep,
    symbol_class_estimate,
    theta,
    weyl_hermiticity_defect,
    weyl_quantize,
)


class TestTheta:
    def test_values(self):
        assert theta(Weight(1.0), 0.0, 0.0) == 1.0
        assert theta(Weight(1.0), 3.0, 4.0) == 8.0
        assert theta(Weight(2.0), 0.0, 16.0) == 5.0

    @pytest.mark.parametrize("sigma", [1 / 3, 1 / 2, 1.0, 2.0, 3.0])
    def test_sandwich_bounds(self, sigma):
        # <z>^min(1,1/s) <= C theta and theta <= 3 <z>^max(1,1/s)
        rng = np.random.default_rng(3)
        w = Weight(sigma)
        z = rng.uniform(-50, 50, size=(10_000, 2))
        jap = np.sqrt(1.0 + z[:, 0] ** 2 + z[:, 1] ** 2)
        th = theta(w, z[:, 0], z[:, 1])
        lo = (jap / 3.0) ** min(1.0, 1.0 / sigma)
        hi = 3.0 * jap ** max(1.0, 1.0 / sigma)
        assert np.all(th >= lo) and np.all(th <= hi)


class TestSigmaProjection:
    def test_on_sphere_identity(self):
        w = Weight(1.7)
        z = (np.cos(0.3), np.sin(0.3))
        (p, lam) = sigma_project(w, *z)
        assert lam == pytest.approx(1.0, abs=1e-12)
        assert p[0] == pytest.approx(z[0], abs=1e-12)

    def test_euclidean_case(self):
        assert sigma_lambda(Weight(1.0), 3.0, 4.0) == pytest.approx(5.0, abs=1e-12)

    @pytest.mark.parametrize("lam", [0.5, 2.0, 8.0])
    def test_scale_invariance(self, lam):
        w = Weight(2.0)
        (p0, _) = sigma_project(w, 1.3, -0.7)
        (p1, _) = sigma_project(w, lam * 1.3, -(lam**2.0) * 0.7)
        assert np.hypot(p0[0] - p1[0], p0[1] - p1[1]) <= 1e-12

    def test_idempotence(self):
        w = Weight(0.5)
        (p, _) = sigma_project(w, -2.0, 1.1)
        for lam in (0.25, 4.0):
            (p2, _) = sigma_project(w, lam * p[0], lam**0.5 * p[1])
            assert np.hypot(p[0] - p2[0], p[1] - p2[1]) <= 1e-12

    def test_origin_rejected(self):
        with pytest.raises(DomainError):
            sigma_lambda(Weight(1.0), 0.0, 0.0)


class TestSmoothstep:
    def test_endpoints_and_monotone(self):
        s = np.linspace(-1, 2, 301)
        v = smoothstep(s)
        assert np.all(v[s <= 0] == 0) and np.all(v[s >= 1] == 1)
        assert np.all(np.diff(v) >= -1e-15)


class TestConicCutoff:
    def setup_method(self):
        self.grid = Grid(16.0, 1024)
        self.w = Weight(0.5)
        self.z0 = (np.cos(0.7), np.sin(0.7))
        self.q = conic_cutoff(self.w, self.z0, 0.25, 0.6, 2.0, self.grid)

    def test_one_inside_own_cone(self):
        for lam in (6.0, 12.0):
            pt = (lam * self.z0[0], lam**0.5 * self.z0[1])
            assert self.q.fn(pt[0], pt[1]) == pytest.approx(1.0, abs=1e-12)

    def test_zero_outside(self):
        assert self.q.fn(-8.0, 3.0) == 0.0
        assert self.q.fn(0.3, 0.1) == 0.0  # inside B_{r/2}

    def test_range_and_partition(self):
        assert self.q.values.min() >= 0.0 and self.q.values.max() <= 1.0
        comp = self.q.complement_to_one()
        assert np.max(np.abs(self.q.values + comp.values - 1.0)) == 0.0

    def test_class_membership(self):
        rep = symbol_class_estimate(self.q)
        assert rep.passed, rep.fitted

    def test_parameter_validation(self):
        with pytest.raises(ParameterError):
            conic_cutoff(self.w, self.z0, 0.6, 0.25, 2.0, self.grid)


class TestAnnularProfile:
    def test_interior_exterior(self):
        ann = AnnularSet(((4.0, 9.0),), 1, 1)
        g = annular_profile(ann, 0.05, 0.3)
        assert g(6.0) == pytest.approx(1.0, abs=1e-12)
        assert g(100.0) == 0.0
        assert g(0.5) == 0.0
        s = np.linspace(0.1, 20, 200)
        v = g(s)
        assert np.all((0 <= v) & (v <= 1))

    @pytest.mark.parametrize("n", [1, 2, 3])
    def test_derivative_decay(self, n):
        # |g^(n)(s)| <= c_n (1+s)^(-n): shellwise maxima must decay like s^-n
        ann = AnnularSet(
            ((16.0, 36.0), (256.0, 576.0), (4096.0, 9216.0)), 1, 1
        )
        g = annular_profile(ann, 0.1, 0.5)
        step = {1: 1e-4, 2: 1e-3, 3: 4e-3}[n]
        maxima = []
        centers = []
        for a, b in ann.intervals:
            s = np.linspace(0.4 * a, 2.2 * b, 4000)
            h = step * a
            if n == 1:
                d = (g(s + h) - g(s - h)) / (2 * h)
            elif n == 2:
                d = (g(s + h) - 2 * g(s) + g(s - h)) / h**2
            else:
                d = (g(s + 2 * h) - 2 * g(s + h) + 2 * g(s - h) - g(s - 2 * h)) / (2 * h**3)
            maxima.append(np.max(np.abs(d)))
            centers.append(a)
        slope = np.polyfit(np.log(centers), np.log(maxima), 1)[0]
        assert slope <= -n + 0.2, (n, maxima)

    def test_base_condition(self):
        with pytest.raises(ParameterError):
            annular_profile(AnnularSet(((0.5, 2.0),), 1, 1), 0.1, 0.5)


class TestAnnularCutoff:
    def test_grid_values(self):
        grid = Grid(12.0, 512)
        ann = AnnularSet(((4.0, 9.0),), 1, 1)
        q = annular_cutoff(ann, 0.05, 0.3, grid)
        assert q.fn(np.sqrt(6.0), 0.0) == pytest.approx(1.0, abs=1e-12)
        assert q.fn(10.0, 0.0) == 0.0  # level 100, outside Sigma_delta

    def test_first_order_class_membership(self):
        grid = Grid(64.0, 2048)
        ann = AnnularSet(((16.0, 36.0), (144.0, 225.0), (576.0, 784.0)), 1, 1)
        q = annular_cutoff(ann, 0.1, 0.5, grid)
        rep = symbol_class_estimate(q, max_order=1)
        assert rep.passed, rep.fitted


class TestEnlarge:
    def test_point_mass(self):
        ann = AnnularSet(((1.0, 1.0),), 1, 1)
        out = enlarge(ann, 0.5)
        assert out.intervals == ((0.5, 1.5),)

    def test_two_intervals_stay_disjoint(self):
        ann = AnnularSet(((2.0, 3.0), (10.0, 11.0)), 1, 1)
        out = enlarge(ann, 0.05)
        assert len(out.intervals) == 2

    def test_merge(self):
        ann = AnnularSet(((2.0, 3.0), (3.5, 4.0)), 1, 1)
        out = enlarge(ann, 0.2)
        assert len(out.intervals) == 1

    def test_separation_margin(self):
        # mu > 0 guarantees (R \ Sigma_delta)_mu and (Sigma_eps)_mu disjoint:
        # check on a sample set by direct interval arithmetic
        eps, delta = 0.1, 0.4
        mu = separation_margin(eps, delta)
        assert mu > 0
        sig = AnnularSet(((4.0, 9.0),), 1, 1)
        inner = enlarge(enlarge(sig, eps), mu)
        outer_compl = enlarge(sig, delta)  # complement of this is R \ Sigma_delta
        # (R \ Sigma_delta)_mu: points within relative mu of the complement
        a, b = outer_compl.intervals[0]
        shrunk = (a / (1 - mu), b / (1 + mu))  # complement enlarged = interval shrunk
        ia, ib = inner.intervals[0]
        assert shrunk[0] > ia and shrunk[1] > ib  # no overlap of the guard zones

    def test_annular_set_algebra(self):
        s1 = AnnularSet(((4.0, 9.0), (16.0, 25.0)), 1, 1)
        s2 = AnnularSet(((6.0, 20.0),), 1, 1)
        inter = s1.intersect(s2)
        assert inter.intervals == ((6.0, 9.0), (16.0, 20.0))
        comp = s1.complement_within(1.0, 30.0)
        assert comp.intervals == ((1.0, 4.0), (9.0, 16.0), (25.0, 30.0))
        assert inter.is_subset_of(s1)
        uni = s1.union(s2)
        assert uni.intervals == ((4.0, 25.0),)


class TestSymbolClassEstimate:
    def setup_method(self):
        self.grid = Grid(12.0, 512)

    def test_constant_passes(self):
        one = GridSymbol.from_function(
            lambda x, xi: np.ones(np.broadcast_shapes(np.shape(x), np.shape(xi))),
            self.grid, 0.0, 1.0,
        )
        rep = symbol_class_estimate(one)
        assert rep.passed

    def test_anharmonic_symbol_passes(self):
        # x^(2K) + xi^(2M) with claimed order 2K, sigma = K/M
        sym = GridSymbol.from_function(lambda x, xi: x**4 + xi**2, self.grid, 4.0, 2.0)
        assert symbol_class_estimate(sym).passed

    def test_cutoff_power_passes(self):
        def fn(x, xi):
            psi = smoothstep((np.hypot(x, xi) - 0.25) / 0.25)
            return psi * (x**2 + xi**4) ** 0.5

        sym = GridSymbol.from_function(fn, self.grid, 1.0, 0.5)
        assert symbol_class_estimate(sym).passed

    def test_aliasing_detected(self):
        n = self.grid.n

        def fn(x, xi):
            # oscillation at the grid Nyquist frequency
            return np.cos(np.pi / self.grid.dx * x) * np.exp(-(xi * 0) ** 2)

        sym = GridSymbol.from_function(fn, self.grid, 0.0, 1.0)
        with pytest.raises(DiagnosticError):
            symbol_class_estimate(sym)


class TestEllipticity:
    def test_anharmonic_elliptic(self):
        region = AnnularSet(((16.0, 4096.0),), 2, 1)
        rep = ellipticity_check(lambda x, xi: x**4 + xi**2, region, r=4.0, sigma=2.0)
        assert rep.passed and rep.margin > 0.02

    def test_degenerate_fails(self):
        region = AnnularSet(((16.0, 4096.0),), 2, 2)
        rep = ellipticity_check(lambda x, xi: x**2 * xi**2, region, r=4.0, sigma=1.0)
        assert not rep.passed
        # the vanishing direction is on a coordinate axis
        assert min(abs(rep.worst_point[0]), abs(rep.worst_point[1])) <= 1e-6

    def test_enlargement_stability(self):
        ann = AnnularSet(((25.0, 100.0),), 1, 1)
        rep0 = ellipticity_check(lambda x, xi: x**2 + xi**2, ann, r=2.0, sigma=1.0)
        rep1 = ellipticity_check(
            lambda x, xi: x**2 + xi**2, enlarge(ann, 0.2), r=2.0, sigma=1.0
        )
        assert rep0.passed and rep1.passed

    def test_cone_region(self):
        cone = SigmaCone((1.0, 0.0), 0.2)
        rep = ellipticity_check(lambda x, xi: x**2 + xi**2, cone, r=2.0, sigma=1.0)
        assert rep.passed

    def test_empty_region(self):
        with pytest.raises(ParameterError):
            ellipticity_check(
                lambda x, xi: x, np.zeros((0, 2)), r=1.0, sigma=1.0
            )


class TestAnnulusBoundaryPoints:
    def test_points_on_level_set(self):
        pts = annulus_boundary_points(2, 1, [5.0], n_angles=32)
        levels = pts[:, 0] ** 4 + pts[:, 1] ** 2
        assert np.max(np.abs(levels - 5.0)) <= 1e-10


class TestWeylQuantize:
    def setup_method(self):
        self.grid = Grid(12.0, 512)

    def sym(self, fn, order, sigma=1.0):
        return GridSymbol.from_function(fn, self.grid, order, sigma)

    def test_identity(self):
        one = self.sym(lambda x, xi: 1.0 + 0 * x + 0 * xi, 0.0)
        Q = weyl_quantize(one)
        assert np.max(np.abs(Q - np.eye(self.grid.n))) <= 1e-10

    def test_xi_is_spectral_derivative(self):
        Q = weyl_quantize(self.sym(lambda x, xi: xi + 0 * x, 1.0), taper="none")
        rng = np.random.default_rng(5)
        for _ in range(3):
            u = np.exp(-self.grid.x**2 / 2) * rng.normal(size=self.grid.n)
            spec = np.fft.ifft(self.grid.xi_fft * np.fft.fft(u))  # -i d/dx
            assert np.max(np.abs(Q @ u - spec)) <= 1e-8

    def test_harmonic_spectrum(self):
        Q = weyl_quantize(self.sym(lambda x, xi: x**2 + xi**2, 2.0), taper="none")
        evals = sla.eigvalsh(Q)[:10]
        assert np.max(np.abs(evals - np.arange(1, 20, 2))) <= 1e-6

    def test_linearity(self):
        a = self.sym(lambda x, xi: x**2 + 0 * xi, 2.0)
        b = self.sym(lambda x, xi: xi**2 + 0 * x, 2.0)
        ab = self.sym(lambda x, xi: x**2 + xi**2, 2.0)
        Qa, Qb, Qab = (weyl_quantize(s, taper="none") for s in (a, b, ab))
        assert np.max(np.abs(Qa + Qb - Qab)) <= 1e-12 * max(1, np.max(np.abs(Qab)))

    def test_hermitian(self):
        a = self.sym(lambda x, xi: x**2 + xi**2, 2.0)
        Q = weyl_quantize(a, taper="none")
        assert np.max(np.abs(Q - Q.conj().T)) == 0.0
        assert weyl_hermiticity_defect(a, taper="none") <= 1e-8

    def test_support_discipline(self):
        # annular cutoff operator annihilates a state localized far away
        ann = AnnularSet(((196.0, 256.0),), 1, 1)
        q = annular_cutoff(ann, 0.1, 0.5, self.grid)
        Q = weyl_quantize(q)
        u = np.exp(-((self.grid.x - 2.0) ** 2) / 2)  # coherent state at level ~4
        ratio = np.linalg.norm(Q @ u) / np.linalg.norm(u)
        assert ratio <= 1e-6

    def test_complex_symbol_rejected(self):
        a = self.sym(lambda x, xi: x + 1j * xi, 1.0)
        with pytest.raises(ParameterError):
            weyl_quantize(a)

    def test_grid_validation(self):
        with pytest.raises(ParameterError):
            GridSymbol(np.zeros((100, 100)), self.grid, 0.0, 1.0)
