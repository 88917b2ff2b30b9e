"""Seeded verification suites: every closed form against an independent oracle.

Each suite returns a list of CheckResult; a check passes when its defect is
within tolerance.  Non-gating checks (gating=False) are informational
reports that never fail a suite: they quantify the two known normalization
question marks (the inverse-metric table factor and the Laplacian
coefficient table) and the deviation of the alternative momentum entry
tables from the defining-equation solution.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import expm

from . import dynamics, geom, greens, momentum, su3flag
from .su3flag import FlagCoords

__all__ = ["CheckResult", "SUITES", "run_suite"]


@dataclass
class CheckResult:
    name: str
    defect: float
    tolerance: float
    passed: bool = field(init=False)
    gating: bool = True
    note: str = ""
    worst_at: str = ""  # where the max defect occurred; printed on failure

    def __post_init__(self):
        self.passed = bool(self.defect <= self.tolerance) or not self.gating

    def line(self) -> str:
        status = "PASS" if self.defect <= self.tolerance else ("INFO" if not self.gating else "FAIL")
        out = f"{status}  {self.name}: defect {self.defect:.3e} (tolerance {self.tolerance:.1e})"
        if status == "FAIL" and self.worst_at:
            out += f"  at {self.worst_at}"
        if self.note:
            out += f"  [{self.note}]"
        return out


def _disk(rng: np.random.Generator, radius: float = 1.5) -> complex:
    r = radius * math.sqrt(rng.uniform())
    t = rng.uniform(0.0, 2.0 * math.pi)
    return r * complex(math.cos(t), math.sin(t))


def _random_flag(rng: np.random.Generator, radius: float = 1.5) -> FlagCoords:
    return FlagCoords(_disk(rng, radius), _disk(rng, radius), _disk(rng, radius))


def _product_unitary(rng: np.random.Generator, factors: int = 5) -> np.ndarray:
    u = np.eye(3, dtype=complex)
    for _ in range(factors):
        k = int(rng.integers(1, 9))
        u = u @ su3flag.exp_su3(k, float(rng.uniform(-2.0, 2.0))).entries
    return u


def wirtinger_hessian(f, z: np.ndarray, h: float = 1e-4) -> np.ndarray:
    """Mixed second derivatives d_{z_i} d_{zbar_j} f by nested central differences."""
    m = z.size

    def dbar(j, zz):
        ex = np.zeros(m, complex)
        ex[j] = h
        ey = np.zeros(m, complex)
        ey[j] = 1j * h
        dx = (f(zz + ex) - f(zz - ex)) / (2.0 * h)
        dy = (f(zz + ey) - f(zz - ey)) / (2.0 * h)
        return 0.5 * (dx + 1j * dy)

    out = np.zeros((m, m), dtype=complex)
    for i in range(m):
        ex = np.zeros(m, complex)
        ex[i] = h
        ey = np.zeros(m, complex)
        ey[i] = 1j * h
        for j in range(m):
            dx = (dbar(j, z + ex) - dbar(j, z - ex)) / (2.0 * h)
            dy = (dbar(j, z + ey) - dbar(j, z - ey)) / (2.0 * h)
            out[i, j] = 0.5 * (dx - 1j * dy)
    return out


def vf_finite_difference(k: int, z: FlagCoords, h: float = 1e-5) -> np.ndarray:
    """Group-action oracle for the generator fields: LU-normalize exp(+-h lambda_k) Z."""
    zmat = z.matrix().entries
    plus = su3flag.bruhat_normalize(su3flag.exp_su3(k, h).entries @ zmat).as_vector()
    minus = su3flag.bruhat_normalize(su3flag.exp_su3(k, -h).entries @ zmat).as_vector()
    return (plus - minus) / (2.0 * h)


# ---------------------------------------------------------------------------
# Green's function suite


def verify_greens(seed: int = 0, tol_scale: float = 1.0) -> list:
    rng = np.random.default_rng(seed)
    checks = []

    worst = 0.0
    lo, hi = 0.05, math.pi / 2.0 - 0.05
    for n in (1, 2, 3, 4):
        for _ in range(100):
            a, b = np.sort(rng.uniform(lo, hi, size=2))
            if b - a < 1e-6:
                b = min(hi, a + 1e-3)
            closed = greens.greens_cpn(n, b) - greens.greens_cpn(n, a)
            worst = max(worst, abs(greens.greens_ode_oracle(n, a, b) - closed))
    checks.append(CheckResult("greens quadrature oracle vs closed form (n=1..4)", worst, 1e-8 * tol_scale))

    worst = 0.0
    h = 1e-6
    for n in (1, 2, 3, 4):
        for _ in range(100):
            r = rng.uniform(lo, hi)
            fd = (greens.greens_radial_part(n, r + h) - greens.greens_radial_part(n, r - h)) / (2.0 * h)
            s, c = math.sin(r), math.cos(r)
            integrand = (1.0 - s ** (2 * n)) / (s ** (2 * n - 1) * c)
            worst = max(worst, abs(fd - integrand) / abs(integrand))
    checks.append(CheckResult("radial antiderivative vs integrand (relative)", worst, 1e-6 * tol_scale))

    worst = -math.inf
    for n in (1, 2, 3, 4):
        grid = np.linspace(0.01, math.pi / 2.0, 400)
        vals = [greens.greens_cpn(n, r) for r in grid]
        worst = max(worst, float(np.max(np.diff(vals))))
    checks.append(
        CheckResult("monotonicity: max increment of G along r (must be < 0)", worst, 0.0)
    )
    return checks


# ---------------------------------------------------------------------------
# momentum suite


def verify_momentum(seed: int = 0, tol_scale: float = 1.0) -> list:
    rng = np.random.default_rng(seed)
    checks = []

    target = np.array([-1.0 / 3.0, -1.0 / 3.0, 2.0 / 3.0])
    worst = 0.0
    for _ in range(1000):
        p = geom.random_point(2, rng)
        ev = np.linalg.eigvalsh(momentum.momentum_cp2(p).matrix)
        worst = max(worst, float(np.max(np.abs(np.sort(ev) - target))))
    checks.append(CheckResult("cp2 momentum spectrum {-1/3,-1/3,2/3} (1000 points)", worst, 1e-10 * tol_scale))

    worst = 0.0
    for _ in range(100):
        p = geom.random_point(2, rng)
        worst = max(worst, momentum.momentum_cp2_equivariance_check(p, _product_unitary(rng)))
    checks.append(CheckResult("cp2 momentum equivariance (100 pairs)", worst, 1e-10 * tol_scale))

    worst, worst_at = 0.0, ""
    for _ in range(100):
        z = _random_flag(rng)
        for k in range(1, 9):
            d = momentum.defining_equation_defect(k, z)
            if d > worst:
                worst, worst_at = d, f"k={k}, z=({z.z1:.4f}, {z.z2:.4f}, {z.z3:.4f})"
    checks.append(
        CheckResult("flag momentum defining equation, k=1..8 (100 points)", worst, 1e-6 * tol_scale, worst_at=worst_at)
    )

    worst = 0.0
    for _ in range(20):
        sys_pts = [geom.random_point(2, rng) for _ in range(3)]
        gam = rng.uniform(0.5, 2.0, 3)
        c = rng.uniform(0.5, 2.0)
        try:
            s1 = dynamics.VortexSystem.cpn(sys_pts, gam)
            s2 = dynamics.VortexSystem.cpn(sys_pts, c * gam)
        except Exception:
            continue
        lhs = momentum.weighted_momentum(s2).matrix
        rhs = c * momentum.weighted_momentum(s1).matrix
        worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    checks.append(CheckResult("weighted momentum linearity in strengths", worst, 1e-14 * tol_scale))

    worst_ah = 0.0
    worst_rd = 0.0
    for _ in range(50):
        z = _random_flag(rng)
        m = momentum.momentum_flag(z).matrix
        worst_ah = max(
            worst_ah, float(np.linalg.norm(m - momentum.momentum_flag_tabulated(z, "antihermitian")))
        )
        worst_rd = max(
            worst_rd, float(np.linalg.norm(m - momentum.momentum_flag_tabulated(z, "real_diagonal")))
        )
    checks.append(
        CheckResult(
            "anti-Hermitian entry table vs defining-equation solution",
            worst_ah,
            math.inf,
            gating=False,
            note="report only: the table carries transcription slips; the defining equation is authoritative",
        )
    )
    checks.append(
        CheckResult(
            "real-diagonal entry table vs defining-equation solution",
            worst_rd,
            math.inf,
            gating=False,
            note="report only: the table repeats mu12 for mu13 and drops the i-factors",
        )
    )
    return checks


# ---------------------------------------------------------------------------
# vector-field suite


def verify_vectorfields(seed: int = 0, tol_scale: float = 1.0) -> list:
    rng = np.random.default_rng(seed)
    checks = []

    worst, worst_at = 0.0, ""
    for _ in range(100):
        z = _random_flag(rng)
        for k in range(1, 9):
            defect = float(np.max(np.abs(su3flag.infinitesimal_vf(k, z) - vf_finite_difference(k, z))))
            if defect > worst:
                worst, worst_at = defect, f"k={k}, z=({z.z1:.4f}, {z.z2:.4f}, {z.z3:.4f})"
    checks.append(
        CheckResult("generator fields vs LU finite differences, k=1..8", worst, 1e-6 * tol_scale, worst_at=worst_at)
    )

    worst = 0.0
    for k in range(1, 9):
        for _ in range(10):
            s, t = rng.uniform(-3.0, 3.0, 2)
            lhs = su3flag.exp_su3(k, s).entries @ su3flag.exp_su3(k, t).entries
            rhs = su3flag.exp_su3(k, s + t).entries
            worst = max(worst, float(np.linalg.norm(lhs - rhs)))
    checks.append(CheckResult("one-parameter subgroup law exp(s)exp(t)=exp(s+t)", worst, 1e-12 * tol_scale))

    worst = 0.0
    for k in range(1, 9):
        for _ in range(10):
            t = rng.uniform(-3.0, 3.0)
            closed = su3flag.exp_su3(k, t).entries
            worst = max(worst, float(np.linalg.norm(closed - expm(t * su3flag.gell_mann(k).entries))))
    checks.append(CheckResult("closed-form exponentials vs scipy expm", worst, 1e-12 * tol_scale))
    return checks


# ---------------------------------------------------------------------------
# metric suite

def _tabulated_symplectic_blocks(z: FlagCoords):
    """Verbatim real-coordinate entry formulas of Im(h) and Re(h) (oracle)."""
    x1, x2, x3 = z.z1.real, z.z2.real, z.z3.real
    y1, y2, y3 = z.z1.imag, z.z2.imag, z.z3.imag
    K1sq, K2sq = z.K1**2, z.K2**2
    im = np.array(
        [
            [
                0.0,
                (x2 * y1 - x1 * y2) / K1sq - y3 * (x3**2 + y3**2 + 1) / K2sq,
                (-(x3 * (y1 - 2 * x2 * y3)) - x3**2 * y2 + y3 * (x1 + y2 * y3)) / K2sq,
            ],
            [
                (x1 * y2 - x2 * y1) / K1sq + y3 * (x3**2 + y3**2 + 1) / K2sq,
                0.0,
                (x3 * y2 - x2 * y3 + y1) / K2sq,
            ],
            [
                (x3**2 * y2 + x3 * (y1 - 2 * x2 * y3) - y3 * (x1 + y2 * y3)) / K2sq,
                -(x3 * y2 - x2 * y3 + y1) / K2sq,
                0.0,
            ],
        ]
    )
    re = np.array(
        [
            [
                (x2**2 + y2**2 + 1) / K1sq + (x3**2 * (2 * y3**2 + 1) + x3**4 + y3**4 + y3**2) / K2sq,
                -(x1 * x2 + y1 * y2) / K1sq - x3 * (x3**2 + y3**2 + 1) / K2sq,
                (y3 * (2 * x3 * y2 + y1) + x2 * (x3**2 - y3**2) + x1 * x3) / K2sq,
            ],
            [
                -(x1 * x2 + y1 * y2) / K1sq - x3 * (x3**2 + y3**2 + 1) / K2sq,
                (x1**2 + y1**2 + 1) / K1sq + (x3**2 + y3**2 + 1) / K2sq,
                -(x1 + x2 * x3 + y2 * y3) / K2sq,
            ],
            [
                (y3 * (2 * x3 * y2 + y1) + x2 * (x3**2 - y3**2) + x1 * x3) / K2sq,
                -(x1 + x2 * x3 + y2 * y3) / K2sq,
                z.K1 / K2sq,
            ],
        ]
    )
    return im, re


def verify_metric(seed: int = 0, tol_scale: float = 1.0) -> list:
    rng = np.random.default_rng(seed)
    checks = []

    worst, worst_at = 0.0, ""
    for _ in range(1000):
        z = _random_flag(rng)
        det = np.linalg.det(su3flag.flag_metric(z)).real
        expected = 2.0 / (z.K1**2 * z.K2**2)
        d = abs(det - expected) / expected
        if d > worst:
            worst, worst_at = d, f"z=({z.z1:.4f}, {z.z2:.4f}, {z.z3:.4f})"
    checks.append(
        CheckResult(
            "flag metric determinant 2/(K1^2 K2^2) (relative, 1000 points)", worst, 1e-10 * tol_scale, worst_at=worst_at
        )
    )

    worst = 0.0
    for n in (1, 2, 3, 4):
        for _ in range(250):
            vals = np.array([_disk(rng, 2.0) for _ in range(n)])
            chart = geom.AffineChart(0, vals)
            det = np.linalg.det(geom.fubini_study_metric(chart)).real
            expected = (1.0 + float(np.sum(np.abs(vals) ** 2))) ** -(n + 1)
            worst = max(worst, abs(det - expected) / expected)
    checks.append(CheckResult("projective metric determinant (1+|z|^2)^-(n+1) (relative, 1000 points)", worst, 1e-10 * tol_scale))

    worst = 0.0
    for _ in range(100):
        z = _random_flag(rng)
        fd = wirtinger_hessian(
            lambda v: su3flag.kahler_potential_flag(FlagCoords(v[0], v[1], v[2])), z.as_vector()
        )
        worst = max(worst, float(np.max(np.abs(fd - su3flag.flag_metric(z)))))
    checks.append(CheckResult("flag metric vs potential Hessian (finite differences)", worst, 1e-5 * tol_scale))

    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 4))
        vals = np.array([_disk(rng, 2.0 / math.sqrt(n)) for _ in range(n)])
        chart = geom.AffineChart(0, vals)
        fd = wirtinger_hessian(lambda v: geom.fubini_study_potential(v), vals)
        worst = max(worst, float(np.max(np.abs(fd - geom.fubini_study_metric(chart)))))
    checks.append(CheckResult("projective metric vs potential Hessian (finite differences)", worst, 1e-5 * tol_scale))

    smallest = math.inf
    for _ in range(1000):
        z = _random_flag(rng, radius=3.0)
        smallest = min(smallest, float(np.min(np.linalg.eigvalsh(su3flag.flag_metric(z)))))
    checks.append(
        CheckResult("flag metric positive definiteness (defect = -min eigenvalue)", -smallest, 0.0)
    )

    worst_sym = 0.0
    worst_blocks = 0.0
    for _ in range(200):
        z = _random_flag(rng)
        w = su3flag.flag_symplectic_matrix(z)
        worst_sym = max(worst_sym, float(np.linalg.norm(w + w.T)))
        im, re = _tabulated_symplectic_blocks(z)
        printed = np.block([[im, -re], [re, im]])
        worst_blocks = max(worst_blocks, float(np.max(np.abs(w - printed))))
    checks.append(CheckResult("symplectic matrix antisymmetry", worst_sym, 1e-12 * tol_scale))
    checks.append(CheckResult("symplectic blocks vs entrywise real-coordinate formulas", worst_blocks, 1e-10 * tol_scale))

    ratios = []
    for _ in range(100):
        z = _random_flag(rng)
        printed = su3flag.flag_metric_inverse_tabulated(z)
        inv = su3flag.flag_metric_inverse(z)
        mask = np.abs(inv) > 1e-6
        ratios.extend((printed[mask] / inv[mask]).tolist())
    ratios = np.array(ratios)
    med = float(np.median(ratios.real))
    spread = float(np.max(np.abs(ratios - 2.0)))
    checks.append(
        CheckResult(
            f"inverse-metric table proportionality factor (median {med:.6f})",
            spread,
            math.inf,
            gating=False,
            note="report only: 7 of 9 entries are exactly 2x the numeric inverse; "
            "the (3,1) and (3,3) entries carry their own slips (spread above)",
        )
    )

    worst = 0.0
    for _ in range(100):
        z = _random_flag(rng)
        worst = max(
            worst,
            float(np.max(np.abs(su3flag.flag_laplacian_coeffs(z) - su3flag.flag_laplacian_reference(z)))),
        )
    checks.append(
        CheckResult(
            "Laplacian coefficient table vs 2 h^{ji}",
            worst,
            math.inf,
            gating=False,
            note="report only: the tabulated projective-plane block differs in form from the inverse metric",
        )
    )
    return checks


# ---------------------------------------------------------------------------
# dynamics suite


def _random_cpn_system(rng, n, N, min_sep=0.3, gamma_range=(0.5, 2.0)):
    while True:
        pts = [geom.random_point(n, rng) for _ in range(N)]
        gam = rng.uniform(*gamma_range, N) * rng.choice([-1.0, 1.0], N)
        try:
            sys = dynamics.VortexSystem.cpn(pts, gam)
        except Exception:
            continue
        if dynamics.min_pairwise_distance(sys) >= min_sep:
            return sys


def _random_planar_system(rng, N, min_sep=0.3, gamma_range=(0.5, 1.5)):
    while True:
        pos = [complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(N)]
        gam = rng.uniform(*gamma_range, N) * rng.choice([-1.0, 1.0], N)
        sys = dynamics.VortexSystem.plane(pos, gam)
        if dynamics.min_pairwise_distance(sys) >= min_sep:
            return sys


def _relative_gradient_error(system, rng, h=1e-5):
    charts = [geom.best_chart_index(p) for p in system.positions]
    grads = dynamics.grad_hamiltonian(system, charts)
    n = system.n
    worst = 0.0
    for alpha, (c, grad) in enumerate(grads):
        w0 = geom.to_chart(system.positions[alpha], c).values

        def h_at(w):
            pts = list(system.positions)
            pts[alpha] = geom.from_chart(geom.AffineChart(c, w))
            return dynamics.hamiltonian_cpn(dynamics.VortexSystem.cpn(pts, system.strengths))

        fd = np.zeros(2 * n)
        for i in range(n):
            e = np.zeros(n, complex)
            e[i] = h
            fd[i] = (h_at(w0 + e) - h_at(w0 - e)) / (2.0 * h)
            e[i] = 1j * h
            fd[n + i] = (h_at(w0 + e) - h_at(w0 - e)) / (2.0 * h)
        scale = max(float(np.linalg.norm(grad)), 1e-8)
        worst = max(worst, float(np.linalg.norm(fd - grad)) / scale)
    return worst


def _planar_period_error(rng=None):
    """Two equal vortices at distance d rotate rigidly; compare the period."""
    d, gamma = 1.0, 1.0
    period = 2.0 * math.pi**2 * d**2 / gamma
    steps = 10_000
    sys0 = dynamics.VortexSystem.plane([0.5 * d, -0.5 * d], [gamma, gamma])
    traj = dynamics.integrate(sys0, period / steps, steps, method="rk4")
    angle = 0.0
    prev = traj.states[0].positions[0]
    for s in traj.states[1:]:
        cur = s.positions[0]
        angle += math.atan2((cur / prev).imag, (cur / prev).real)
        prev = cur
    measured = traj.times[-1] * (2.0 * math.pi / angle)
    return abs(measured - period) / period


def verify_dynamics(seed: int = 0, tol_scale: float = 1.0) -> list:
    rng = np.random.default_rng(seed)
    checks = []

    worst = 0.0
    for _ in range(50):
        n = int(rng.integers(1, 3))
        N = int(rng.integers(2, 5))
        worst = max(worst, _relative_gradient_error(_random_cpn_system(rng, n, N), rng))
    checks.append(CheckResult("analytic gradient vs finite differences (relative, 50 configs)", worst, 1e-6 * tol_scale))

    worst = 0.0
    for _ in range(20):
        n = int(rng.integers(1, 3))
        worst = max(worst, dynamics.omega_identity_defect(_random_cpn_system(rng, n, 3), rng))
    checks.append(CheckResult("symplectic identity Omega(X_H, Y) = dH(Y)", worst, 1e-6 * tol_scale))

    worst = 0.0
    for n in (1, 2, 3):
        for _ in range(50):
            sys = _random_cpn_system(rng, n, 3)
            u = geom.random_unitary(n + 1, rng)
            moved = dynamics.VortexSystem.cpn(
                [geom.ProjectivePoint(u @ p.coords) for p in sys.positions], sys.strengths
            )
            worst = max(worst, abs(dynamics.hamiltonian_cpn(moved) - dynamics.hamiltonian_cpn(sys)))
    checks.append(CheckResult("Hamiltonian invariance under common unitaries (n=1,2,3)", worst, 1e-10 * tol_scale))

    checks.append(
        CheckResult("planar two-vortex period vs 2 pi^2 d^2 / Gamma (relative)", _planar_period_error(), 1e-3 * tol_scale)
    )

    steps, dt = 10_000, 1e-3
    for n in (1, 2):
        sys = _random_cpn_system(rng, n, 3)
        traj = dynamics.integrate(sys, dt, steps, method="rk4")
        h0 = traj.monitors[0, 0]
        drift = float(np.max(np.abs(traj.monitors[:, 0] - h0))) / max(abs(h0), 1e-3)
        checks.append(CheckResult(f"energy drift on CP^{n} (relative, {steps} rk4 steps)", drift, 1e-8 * tol_scale))
        if n == 2:
            mu0 = momentum.weighted_momentum(traj.states[0]).matrix
            mdrift = max(
                float(np.linalg.norm(momentum.weighted_momentum(s).matrix - mu0)) for s in traj.states
            )
            checks.append(CheckResult("weighted momentum drift on CP^2 (Frobenius)", mdrift, 1e-7 * tol_scale))

    plan = _random_planar_system(rng, 3)
    traj = dynamics.integrate(plan, dt, steps, method="rk4")
    inv0 = np.array(dynamics.planar_conserved(traj.states[0]))
    drift = max(float(np.max(np.abs(np.array(dynamics.planar_conserved(s)) - inv0))) for s in traj.states)
    checks.append(CheckResult("planar invariants p_x, p_y, m drift", drift, 1e-9 * tol_scale))

    sep_sys = _random_cpn_system(rng, 1, 2, min_sep=0.5)
    traj = dynamics.integrate(sep_sys, dt, steps, method="rk4")
    sep0 = traj.monitors[0, 2]
    sep_drift = float(np.max(np.abs(traj.monitors[:, 2] - sep0)))
    checks.append(CheckResult("CP^1 two-vortex separation constancy", sep_drift, 1e-8 * tol_scale))
    return checks


SUITES = {
    "greens": verify_greens,
    "momentum": verify_momentum,
    "vectorfields": verify_vectorfields,
    "metric": verify_metric,
    "dynamics": verify_dynamics,
}


def run_suite(name: str, seed: int = 0, tol_scale: float = 1.0) -> list:
    """Run one named suite (or 'all'); returns the collected CheckResults."""
    if name == "all":
        out = []
        for key in SUITES:
            out.extend(run_suite(key, seed=seed, tol_scale=tol_scale))
        return out
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    return SUITES[name](seed=seed, tol_scale=tol_scale)
