"""N-point-vortex Hamiltonian dynamics on the plane and on CP^n.

The planar model evolves by

    dzbar_j/dt = 1/(2 pi i) sum_{k != j} Gamma_k / (z_j - z_k)

with conserved H = -1/(4 pi) sum_{k != j} Gamma_j Gamma_k log|z_j - z_k|
and linear/angular impulses (p_x, p_y, m).

On CP^n the Hamiltonian is the strength-weighted sum of the radial Green's
profile over vortex pairs,

    H = -1/(2 (n-1)! pi^n) sum_{a<b} Gamma_a Gamma_b
            ( log sin(r_ab) - sum_{j=1}^{n-1} 1/(2j sin^{2j} r_ab) ),

the (constant) self-interaction term being dropped on the homogeneous
space.  The Hamiltonian vector field is computed per vortex in an affine
chart by solving omega X = dH with the Fubini-Study symplectic matrix of
that chart; the sign convention is the one that makes
Omega(X, Y) = dH(Y) hold with positive sign (checked by a self-test).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import CollisionError, ConfigurationError, NumericError
from .geom import (
    AffineChart,
    ProjectivePoint,
    best_chart_index,
    fubini_study_metric,
    pivot_threshold,
    to_chart,
)
from .greens import cpn_volume, greens_radial_part
from .momentum import weighted_momentum

__all__ = [
    "COLLISION_THRESHOLD",
    "Trajectory",
    "VortexSystem",
    "grad_hamiltonian",
    "hamiltonian_cpn",
    "hamiltonian_prefactor",
    "hamiltonian_vector_field",
    "integrate",
    "min_pairwise_distance",
    "omega_identity_defect",
    "planar_conserved",
    "planar_hamiltonian",
    "planar_rhs",
]

# Geodesic separations below this are numerically meaningless against the
# logarithmic singularity of G at double precision.
COLLISION_THRESHOLD = 1e-4


def hamiltonian_prefactor(n: int) -> float:
    """Coupling constant -1/(2 (n-1)! pi^n) of the CP^n vortex Hamiltonian."""
    return -1.0 / (2.0 * math.factorial(n - 1) * math.pi**n)


def _prefactor_identity_gap(n: int) -> float:
    """|prefactor - (-1/(2 n vol(CP^n)))|, the pairwise-Green normalization gap.

    Zero for n in {1, 2}; the two tabulated constants drift apart by a factor
    ((n-1)!)^2 for larger n.  Checked once at import for the dynamical cases.
    """
    return abs(hamiltonian_prefactor(n) - (-1.0 / (2.0 * n * cpn_volume(n))))


for _n in (1, 2):
    if _prefactor_identity_gap(_n) > 1e-15:
        raise AssertionError(f"Hamiltonian prefactor inconsistent with Green's normalization at n={_n}")
del _n


@dataclass(frozen=True)
class VortexSystem:
    """N point vortices with nonzero strengths on a single manifold.

    ``manifold`` is "plane" (positions: complex numbers) or "cpn"
    (positions: ProjectivePoint of common dimension ``n``).  Pairwise
    separations must exceed COLLISION_THRESHOLD.
    """

    manifold: str
    positions: tuple
    strengths: tuple
    n: int = 0

    def __post_init__(self):
        if self.manifold not in ("plane", "cpn"):
            raise ConfigurationError(f"manifold must be 'plane' or 'cpn', got {self.manifold!r}")
        positions = tuple(self.positions)
        strengths = tuple(float(g) for g in self.strengths)
        if len(positions) < 1 or len(positions) != len(strengths):
            raise ConfigurationError("need N >= 1 positions with matching strengths")
        if any(g == 0.0 or not np.isfinite(g) for g in strengths):
            raise ConfigurationError("all strengths must be finite and nonzero")
        if self.manifold == "plane":
            positions = tuple(complex(p) for p in positions)
            if any(not np.isfinite(p.real) or not np.isfinite(p.imag) for p in positions):
                raise ConfigurationError("planar positions must be finite")
            if self.n != 0:
                raise ConfigurationError("planar systems have no projective dimension")
        else:
            if not all(isinstance(p, ProjectivePoint) for p in positions):
                raise ConfigurationError("cpn positions must be ProjectivePoint instances")
            dims = {p.n for p in positions}
            if len(dims) != 1 or dims != {self.n}:
                raise ConfigurationError(f"all positions must lie on CP^{self.n}, got dimensions {sorted(dims)}")
        object.__setattr__(self, "positions", positions)
        object.__setattr__(self, "strengths", strengths)
        d = min_pairwise_distance(self)
        if d < COLLISION_THRESHOLD:
            raise CollisionError(f"minimum pairwise separation {d:.3e} below collision threshold")

    @classmethod
    def plane(cls, positions, strengths) -> "VortexSystem":
        return cls("plane", tuple(positions), tuple(strengths))

    @classmethod
    def cpn(cls, points, strengths) -> "VortexSystem":
        points = tuple(points)
        if not points:
            raise ConfigurationError("need at least one vortex")
        return cls("cpn", points, tuple(strengths), n=points[0].n)

    @property
    def size(self) -> int:
        return len(self.positions)


def min_pairwise_distance(system: VortexSystem) -> float:
    """Smallest pairwise separation (Euclidean or geodesic); inf for N = 1."""
    N = len(system.positions)
    if N == 1:
        return math.inf
    best = math.inf
    if system.manifold == "plane":
        for j in range(N):
            for k in range(j + 1, N):
                best = min(best, abs(system.positions[j] - system.positions[k]))
    else:
        lifts = [p.coords for p in system.positions]
        for j in range(N):
            for k in range(j + 1, N):
                best = min(best, _distance_from_lifts(lifts[j], lifts[k]))
    return best


# ---------------------------------------------------------------------------
# planar model


def planar_rhs(system: VortexSystem) -> np.ndarray:
    """Velocities dz_j/dt of the planar model (conjugated pair sum)."""
    if system.manifold != "plane":
        raise ConfigurationError("planar_rhs needs a planar system")
    z = np.asarray(system.positions, dtype=complex)
    g = np.asarray(system.strengths)
    vel = np.zeros_like(z)
    for j in range(z.size):
        acc = 0.0 + 0.0j
        for k in range(z.size):
            if k == j:
                continue
            dz = z[j] - z[k]
            if dz == 0.0:
                raise CollisionError(f"vortices {j} and {k} coincide")
            acc += g[k] / dz
        vel[j] = np.conj(acc / (2.0j * math.pi))
    return vel


def planar_conserved(system: VortexSystem):
    """The three planar invariants (p_x, p_y, m)."""
    z = np.asarray(system.positions, dtype=complex)
    g = np.asarray(system.strengths)
    return (
        float(np.sum(g * z.real)),
        float(np.sum(g * z.imag)),
        float(0.5 * np.sum(g * np.abs(z) ** 2)),
    )


def planar_hamiltonian(system: VortexSystem) -> float:
    """Planar vortex energy -1/(4 pi) sum_{k != j} G_j G_k log r_jk."""
    if system.manifold != "plane":
        raise ConfigurationError("planar_hamiltonian needs a planar system")
    z = np.asarray(system.positions, dtype=complex)
    g = np.asarray(system.strengths)
    out = 0.0
    for j in range(z.size):
        for k in range(j + 1, z.size):
            r = abs(z[j] - z[k])
            if r == 0.0:
                raise CollisionError(f"vortices {j} and {k} coincide")
            out += g[j] * g[k] * math.log(r)
    return -out / (2.0 * math.pi)  # unordered-pair sum counts each {j,k} once


# ---------------------------------------------------------------------------
# CP^n model: distances, Hamiltonian, gradient, vector field

def _distance_from_lifts(a: np.ndarray, b: np.ndarray) -> float:
    """Geodesic distance from (possibly unnormalized) homogeneous lifts."""
    u = a / np.linalg.norm(a)
    v = b / np.linalg.norm(b)
    overlap = np.dot(v, u.conj())
    return float(math.atan2(np.linalg.norm(v - overlap * u), abs(overlap)))


def hamiltonian_cpn(system: VortexSystem) -> float:
    """Vortex Hamiltonian on CP^n (pair sum over the radial Green profile)."""
    if system.manifold != "cpn":
        raise ConfigurationError("hamiltonian_cpn needs a cpn system")
    n = system.n
    g = system.strengths
    lifts = [p.coords for p in system.positions]
    pref = hamiltonian_prefactor(n)
    out = 0.0
    for j in range(len(lifts)):
        for k in range(j + 1, len(lifts)):
            r = _distance_from_lifts(lifts[j], lifts[k])
            if r < COLLISION_THRESHOLD:
                raise CollisionError(f"vortices {j} and {k} at separation {r:.3e}")
            out += g[j] * g[k] * greens_radial_part(n, r)
    return pref * out


def _pair_coupling(n: int, rho: float) -> float:
    """d(radial profile)/d(rho) evaluated stably; regular at rho -> 0.

    With s = sin^2 r = 1 - rho the profile f satisfies
    df/drho = -(1 - s^n) / (2 rho s^n), which tends to -n/2 at rho = 0.
    """
    if rho < 1e-14:
        return -0.5 * n
    s_n = (1.0 - rho) ** n
    one_minus = -math.expm1(n * math.log1p(-rho))  # 1 - (1-rho)^n without cancellation
    return -one_minus / (2.0 * rho * s_n)


def _default_charts(system: VortexSystem):
    return [best_chart_index(p) for p in system.positions]


def _lift(chart_index: int, w: np.ndarray) -> np.ndarray:
    return np.insert(w, chart_index, 1.0 + 0.0j)


def _chart_values(system: VortexSystem, charts) -> list:
    return [to_chart(p, c).values.copy() for p, c in zip(system.positions, charts)]


def _grad_from_lifts(n, charts, ws, strengths):
    """Per-vortex real gradient of H in chart coordinates (x_1..x_n, y_1..y_n)."""
    N = len(ws)
    lifts = [_lift(c, w) for c, w in zip(charts, ws)]
    norms2 = [float(np.real(np.dot(a, a.conj()))) for a in lifts]
    pref = hamiltonian_prefactor(n)
    # Wirtinger derivative dH/d(a_alpha) accumulated over pairs
    wirt = [np.zeros(n + 1, dtype=complex) for _ in range(N)]
    for j in range(N):
        for k in range(j + 1, N):
            a, b = lifts[j], lifts[k]
            inner = np.dot(a, b.conj())  # <a, b>
            rho = min(max(abs(inner) ** 2 / (norms2[j] * norms2[k]), 0.0), 1.0)
            r = math.asin(math.sqrt(1.0 - rho))
            if r < COLLISION_THRESHOLD:
                raise CollisionError(f"vortices {j} and {k} at separation {r:.3e}")
            coup = pref * strengths[j] * strengths[k] * _pair_coupling(n, rho)
            if rho > 0.0:
                # d(rho)/d(a_i) = rho (conj(b)_i/<a,b> - conj(a)_i/<a,a>)
                wirt[j] += coup * rho * (b.conj() / inner - a.conj() / norms2[j])
                wirt[k] += coup * rho * (a.conj() / inner.conjugate() - b.conj() / norms2[k])
            # at exactly orthogonal pairs d(rho) = 0 in every direction
    grads = []
    for alpha in range(N):
        keep = [i for i in range(n + 1) if i != charts[alpha]]
        d = wirt[alpha][keep]
        grads.append(np.concatenate([2.0 * d.real, -2.0 * d.imag]))
    return grads


def grad_hamiltonian(system: VortexSystem, charts=None):
    """Analytic chart gradient of hamiltonian_cpn.

    Returns a list of (chart_index, gradient) pairs, one per vortex; the
    gradient is the real 2n-vector (dH/dx_1..dx_n, dH/dy_1..dy_n) in that
    vortex's affine chart.  Matches central finite differences of
    hamiltonian_cpn to about 1e-6 relative.
    """
    if system.manifold != "cpn":
        raise ConfigurationError("grad_hamiltonian needs a cpn system")
    if charts is None:
        charts = _default_charts(system)
    ws = _chart_values(system, charts)
    grads = _grad_from_lifts(system.n, charts, ws, system.strengths)
    return list(zip(charts, grads))


def _chart_symplectic_matrix(chart_index: int, w: np.ndarray) -> np.ndarray:
    h = fubini_study_metric(AffineChart(chart_index, w))
    re, im = h.real, h.imag
    return np.block([[im, -re], [re, im]])


def _velocities_from_lifts(n, charts, ws, strengths):
    """Per-vortex chart velocities (1/Gamma) * sharp(dH) as real 2n-vectors."""
    grads = _grad_from_lifts(n, charts, ws, strengths)
    vels = []
    for c, w, g, gamma in zip(charts, ws, grads, strengths):
        W = _chart_symplectic_matrix(c, w)
        vels.append(np.linalg.solve(W, g) / gamma)
    return vels


def hamiltonian_vector_field(system: VortexSystem, charts=None):
    """Chart velocities of the Hamiltonian flow, one (chart_index, 2n-vector) per vortex.

    Per vortex the velocity solves Gamma_alpha omega_alpha(X, .) = d_alpha H
    with the chart's Fubini-Study symplectic matrix, so the weighted form
    Omega = sum Gamma_alpha omega_alpha satisfies Omega(X, Y) = dH(Y).
    """
    if system.manifold != "cpn":
        raise ConfigurationError("hamiltonian_vector_field needs a cpn system")
    if charts is None:
        charts = _default_charts(system)
    ws = _chart_values(system, charts)
    vels = _velocities_from_lifts(system.n, charts, ws, system.strengths)
    return list(zip(charts, vels))


def omega_identity_defect(system: VortexSystem, rng=None, samples: int = 10) -> float:
    """Max defect |Gamma_a omega_a(X_a, Y) - d_a H(Y)| over random unit test vectors.

    This is the convention self-test for the sharp operator: it must come
    out near machine precision, otherwise the symplectic solve is wired
    with the wrong sign or scaling.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    charts = _default_charts(system)
    ws = _chart_values(system, charts)
    grads = _grad_from_lifts(system.n, charts, ws, system.strengths)
    vels = _velocities_from_lifts(system.n, charts, ws, system.strengths)
    worst = 0.0
    for c, w, g, v, gamma in zip(charts, ws, grads, vels, system.strengths):
        W = _chart_symplectic_matrix(c, w)
        for _ in range(samples):
            y = rng.standard_normal(2 * system.n)
            y /= np.linalg.norm(y)
            worst = max(worst, abs(gamma * np.dot(W @ v, y) - np.dot(g, y)))
    return worst


# ---------------------------------------------------------------------------
# time integration


@dataclass(frozen=True)
class Trajectory:
    """Recorded states, active charts, and per-step monitors of one run."""

    times: np.ndarray
    states: list
    monitors: np.ndarray  # columns: H, momentum norm, min pairwise distance
    charts: np.ndarray  # per-step active chart index per vortex (zeros on the plane)

    def __post_init__(self):
        t = np.asarray(self.times, dtype=float)
        if t.ndim != 1 or len(self.states) != t.size or np.any(np.diff(t) <= 0.0):
            raise ConfigurationError("times must be strictly increasing and match states")
        gammas = {s.strengths for s in self.states}
        manifolds = {s.manifold for s in self.states}
        if len(gammas) > 1 or len(manifolds) > 1:
            raise ConfigurationError("all states must share manifold and strengths")
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "charts", np.asarray(self.charts, dtype=int))


def _monitor_row(system: VortexSystem):
    if system.manifold == "plane":
        h = planar_hamiltonian(system)
        mom = float(np.linalg.norm(planar_conserved(system)))
    else:
        h = hamiltonian_cpn(system)
        mom = weighted_momentum(system).frobenius_norm()
    return (h, mom, min_pairwise_distance(system))


def _planar_step_rhs(z: np.ndarray, strengths) -> np.ndarray:
    g = np.asarray(strengths)
    vel = np.zeros_like(z)
    for j in range(z.size):
        acc = 0.0 + 0.0j
        for k in range(z.size):
            if k != j:
                acc += g[k] / (z[j] - z[k])
        vel[j] = np.conj(acc / (2.0j * math.pi))
    return vel


def _make_rhs(system: VortexSystem, charts):
    """State is a complex (N, d) array: planar positions or chart values."""
    strengths = system.strengths
    if system.manifold == "plane":
        def rhs(y):
            return _planar_step_rhs(y[:, 0], strengths).reshape(-1, 1)
        return rhs
    n = system.n

    def rhs(y):
        ws = [y[i] for i in range(y.shape[0])]
        vels = _velocities_from_lifts(n, charts, ws, strengths)
        return np.array([v[:n] + 1j * v[n:] for v in vels])

    return rhs


def _rk4_step(rhs, y, dt):
    k1 = rhs(y)
    k2 = rhs(y + 0.5 * dt * k1)
    k3 = rhs(y + 0.5 * dt * k2)
    k4 = rhs(y + dt * k3)
    return y + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)

# Dormand-Prince 5(4) embedded pair (autonomous system, no c-nodes needed)
_DP_A = [
    [],
    [1 / 5],
    [3 / 40, 9 / 40],
    [44 / 45, -56 / 15, 32 / 9],
    [19372 / 6561, -25360 / 2187, 64448 / 6561, -212 / 729],
    [9017 / 3168, -355 / 33, 46732 / 5247, 49 / 176, -5103 / 18656],
    [35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84],
]
_DP_B5 = np.array([35 / 384, 0.0, 500 / 1113, 125 / 192, -2187 / 6784, 11 / 84, 0.0])
_DP_B4 = np.array([5179 / 57600, 0.0, 7571 / 16695, 393 / 640, -92097 / 339200, 187 / 2100, 1 / 40])


def _dp_step(rhs, y, dt):
    ks = [rhs(y)]
    for i in range(1, 7):
        acc = sum(a * k for a, k in zip(_DP_A[i], ks))
        ks.append(rhs(y + dt * acc))
    y5 = y + dt * sum(b * k for b, k in zip(_DP_B5, ks))
    y4 = y + dt * sum(b * k for b, k in zip(_DP_B4, ks))
    return y5, y5 - y4


def _rebuild_state(system: VortexSystem, charts, y) -> VortexSystem:
    """Back to unit homogeneous coordinates (the projection retraction)."""
    if system.manifold == "plane":
        return VortexSystem.plane([complex(v) for v in y[:, 0]], system.strengths)
    points = []
    for c, w in zip(charts, y):
        points.append(ProjectivePoint(_lift(c, w)))
    return VortexSystem.cpn(points, system.strengths)


def _refresh_charts(state: VortexSystem, charts):
    """Switch a vortex's chart when its pivot magnitude gets weak."""
    new_charts = list(charts)
    thr = pivot_threshold(state.n)
    for i, p in enumerate(state.positions):
        if abs(p.coords[charts[i]]) <= thr:
            new_charts[i] = best_chart_index(p)
    return new_charts


def integrate(system: VortexSystem, dt: float, steps: int, method: str = "rk4") -> Trajectory:
    """Advance the system for ``steps`` steps of nominal size ``dt``.

    "rk4" takes fixed steps; "rk45_adaptive" integrates to t_end = dt*steps
    with an embedded Dormand-Prince pair (atol 1e-10, rtol 1e-9, safety
    0.9), recording every accepted step.  Positions are renormalized after
    each step, charts are switched when a pivot weakens, and the run stops
    with CollisionError (carrying the step index) when two vortices get
    within COLLISION_THRESHOLD.
    """
    if dt <= 0.0 or steps < 0 or not np.isfinite(dt * steps):
        raise ConfigurationError(f"need dt > 0 and steps >= 0 with finite horizon, got {dt}, {steps}")
    if method not in ("rk4", "rk45_adaptive"):
        raise ConfigurationError(f"unknown method {method!r}")

    N = system.size
    charts = _default_charts(system) if system.manifold == "cpn" else [0] * N
    if system.manifold == "plane":
        y = np.asarray(system.positions, dtype=complex).reshape(-1, 1)
    else:
        y = np.array(_chart_values(system, charts))

    times = [0.0]
    states = [system]
    monitors = [_monitor_row(system)]
    chart_rows = [tuple(charts)]

    state = system

    def advance(t, new_y):
        """Renormalize, refresh charts, record; returns the refreshed (y, rhs)."""
        nonlocal state, charts
        new_state = _rebuild_state(state, charts, new_y)
        if new_state.manifold == "cpn":
            new_charts = _refresh_charts(new_state, charts)
        else:
            new_charts = charts
        times.append(t)
        states.append(new_state)
        monitors.append(_monitor_row(new_state))
        chart_rows.append(tuple(new_charts))
        state = new_state
        if new_charts != charts:
            charts = new_charts
            return np.array(_chart_values(state, charts)), _make_rhs(state, charts)
        return new_y, None

    try:
        if method == "rk4":
            rhs = _make_rhs(state, charts)
            t = 0.0
            for i in range(steps):
                y = _rk4_step(rhs, y, dt)
                if not np.all(np.isfinite(y)):
                    raise NumericError(f"non-finite state at step {i + 1}")
                t += dt
                y, new_rhs = advance(t, y)
                if new_rhs is not None:
                    rhs = new_rhs
        else:
            t_end = dt * steps
            t = 0.0
            h = dt
            rhs = _make_rhs(state, charts)
            while t < t_end - 1e-15 * max(1.0, t_end):
                h = min(h, t_end - t)
                if h < 1e-14 * max(1.0, abs(t)):
                    raise NumericError(f"adaptive step size underflow at t = {t}")
                y5, err_vec = _dp_step(rhs, y, h)
                scale = 1e-10 + 1e-9 * np.maximum(np.abs(y), np.abs(y5))
                err = float(np.sqrt(np.mean(np.abs(err_vec / scale) ** 2)))
                if err <= 1.0:
                    if not np.all(np.isfinite(y5)):
                        raise NumericError(f"non-finite state at t = {t + h}")
                    t += h
                    y, new_rhs = advance(t, y5)
                    if new_rhs is not None:
                        rhs = new_rhs
                factor = 0.9 * (err if err > 0.0 else 1e-10) ** (-0.2)
                h *= min(5.0, max(0.2, factor))
    except CollisionError as exc:
        raise CollisionError(str(exc), step_index=len(times) - 1) from exc

    return Trajectory(np.asarray(times), states, np.asarray(monitors), np.asarray(chart_rows))


def write_trajectory_csv(traj: Trajectory, fh) -> None:
    """Emit a trajectory as CSV: t, per-vortex chart and chart coordinates,
    then the three monitors.  Floats use 17 significant digits so runs
    round-trip and diff bit-stably.
    """
    first = traj.states[0]
    N = first.size
    if first.manifold == "plane":
        dims = 1
        coord_names = [f"chart{k},x{k},y{k}" for k in range(N)]
    else:
        dims = first.n
        coord_names = [
            "chart%d,%s" % (k, ",".join(f"x{k}_{j},y{k}_{j}" for j in range(dims)))
            for k in range(N)
        ]
    fh.write("t," + ",".join(coord_names) + ",H,momentum_norm,min_dist\n")

    def fmt(v: float) -> str:
        return format(float(v), ".17g")

    for row, (t, state) in enumerate(zip(traj.times, traj.states)):
        cells = [fmt(t)]
        for k in range(N):
            c = int(traj.charts[row, k])
            if state.manifold == "plane":
                z = state.positions[k]
                cells += [str(c), fmt(z.real), fmt(z.imag)]
            else:
                w = to_chart(state.positions[k], c).values
                cells.append(str(c))
                for j in range(dims):
                    cells += [fmt(w[j].real), fmt(w[j].imag)]
        cells += [fmt(v) for v in traj.monitors[row]]
        fh.write(",".join(cells) + "\n")
