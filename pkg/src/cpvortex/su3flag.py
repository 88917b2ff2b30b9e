"""SU(3) and the full flag manifold of C^3.

The flag manifold is realized on its dense big cell: unit lower-triangular
matrices

    Z = [[1, 0, 0], [z1, 1, 0], [z2, z3, 1]]

obtained from a generic invertible matrix by unpivoted LU factorization
(right multiplication by upper-triangular matrices).  On the big cell the
Kahler potential is log(K1 * K2) with

    K1 = 1 + |z1|^2 + |z2|^2,    K2 = 1 + |z3|^2 + |z1 z3 - z2|^2,

and everything else here (metric, symplectic form, Laplacian coefficients,
infinitesimal generator fields) is derived from that potential and the
Gell-Mann basis of su(3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, OutsideBigCellError

__all__ = [
    "FlagCoords",
    "Su3Matrix",
    "bruhat_normalize",
    "exp_su3",
    "flag_laplacian_coeffs",
    "flag_laplacian_reference",
    "flag_metric",
    "flag_metric_inverse",
    "flag_metric_inverse_tabulated",
    "flag_symplectic_matrix",
    "gell_mann",
    "gell_mann_tilde",
    "infinitesimal_vf",
    "kahler_potential_flag",
]

_SQRT3 = math.sqrt(3.0)

# The eight traceless Hermitian basis matrices; lambda_k = (i/2) * tilde_k
# spans su(3) with trace(lambda_a lambda_b) = -delta_ab / 2.
_TILDE = np.zeros((8, 3, 3), dtype=complex)
_TILDE[0] = [[0, 1, 0], [1, 0, 0], [0, 0, 0]]
_TILDE[1] = [[0, -1j, 0], [1j, 0, 0], [0, 0, 0]]
_TILDE[2] = [[1, 0, 0], [0, -1, 0], [0, 0, 0]]
_TILDE[3] = [[0, 0, 1], [0, 0, 0], [1, 0, 0]]
_TILDE[4] = [[0, 0, -1j], [0, 0, 0], [1j, 0, 0]]
_TILDE[5] = [[0, 0, 0], [0, 0, 1], [0, 1, 0]]
_TILDE[6] = [[0, 0, 0], [0, 0, -1j], [0, 1j, 0]]
_TILDE[7] = np.diag([1.0, 1.0, -2.0]) / _SQRT3
_TILDE.flags.writeable = False

_LAMBDA = 0.5j * _TILDE
_LAMBDA.flags.writeable = False


@dataclass(frozen=True)
class Su3Matrix:
    """A 3x3 complex matrix tagged with the structural role it must satisfy.

    Roles: "unitary", "antihermitian_traceless", "unit_lower_triangular",
    "general".  The corresponding invariant is checked on construction.
    """

    entries: np.ndarray
    role: str = "general"

    _TOL = 1e-12

    def __post_init__(self):
        m = np.asarray(self.entries, dtype=complex)
        if m.shape != (3, 3):
            raise DomainError(f"expected a 3x3 matrix, got shape {m.shape}")
        m = m.copy()
        m.flags.writeable = False
        object.__setattr__(self, "entries", m)
        if self.role == "unitary":
            if np.linalg.norm(m @ m.conj().T - np.eye(3)) > self._TOL:
                raise DomainError("matrix is not unitary within 1e-12")
        elif self.role == "antihermitian_traceless":
            if np.linalg.norm(m + m.conj().T) > self._TOL or abs(np.trace(m)) > self._TOL:
                raise DomainError("matrix is not anti-Hermitian traceless within 1e-12")
        elif self.role == "unit_lower_triangular":
            if (
                np.linalg.norm(np.triu(m, 1)) > self._TOL
                or np.linalg.norm(np.diag(m) - 1.0) > self._TOL
            ):
                raise DomainError("matrix is not unit lower triangular within 1e-12")
        elif self.role != "general":
            raise DomainError(f"unknown role {self.role!r}")


def _entries(m) -> np.ndarray:
    if isinstance(m, Su3Matrix):
        return m.entries
    m = np.asarray(m, dtype=complex)
    if m.shape != (3, 3):
        raise DomainError(f"expected a 3x3 matrix, got shape {m.shape}")
    return m


def gell_mann_tilde(k: int) -> np.ndarray:
    """The k-th traceless Hermitian basis matrix (k in 1..8)."""
    if not 1 <= k <= 8:
        raise IndexError(f"k must lie in 1..8, got {k}")
    return _TILDE[k - 1]


def gell_mann(k: int) -> Su3Matrix:
    """The k-th su(3) basis element lambda_k = (i/2) * gell_mann_tilde(k)."""
    if not 1 <= k <= 8:
        raise IndexError(f"k must lie in 1..8, got {k}")
    return Su3Matrix(_LAMBDA[k - 1], role="antihermitian_traceless")


def exp_su3(k: int, t: float) -> Su3Matrix:
    """One-parameter subgroup exp(t lambda_k) in closed form."""
    if not 1 <= k <= 8:
        raise IndexError(f"k must lie in 1..8, got {k}")
    if not np.isfinite(t):
        raise DomainError(f"t must be finite, got {t}")
    c, s = math.cos(t / 2.0), math.sin(t / 2.0)
    if k == 1:
        m = [[c, 1j * s, 0], [1j * s, c, 0], [0, 0, 1]]
    elif k == 2:
        m = [[c, s, 0], [-s, c, 0], [0, 0, 1]]
    elif k == 3:
        m = np.diag([np.exp(0.5j * t), np.exp(-0.5j * t), 1.0])
    elif k == 4:
        m = [[c, 0, 1j * s], [0, 1, 0], [1j * s, 0, c]]
    elif k == 5:
        m = [[c, 0, s], [0, 1, 0], [-s, 0, c]]
    elif k == 6:
        m = [[1, 0, 0], [0, c, 1j * s], [0, 1j * s, c]]
    elif k == 7:
        m = [[1, 0, 0], [0, c, s], [0, -s, c]]
    else:
        w = 0.5j * t / _SQRT3
        m = np.diag([np.exp(w), np.exp(w), np.exp(-2.0 * w)])
    return Su3Matrix(np.asarray(m, dtype=complex), role="unitary")


@dataclass(frozen=True)
class FlagCoords:
    """Big-cell coordinates (z1, z2, z3) of the flag manifold."""

    z1: complex
    z2: complex
    z3: complex
    K1: float = field(init=False)
    K2: float = field(init=False)

    def __post_init__(self):
        z1, z2, z3 = complex(self.z1), complex(self.z2), complex(self.z3)
        for name, z in (("z1", z1), ("z2", z2), ("z3", z3)):
            if not (np.isfinite(z.real) and np.isfinite(z.imag)):
                raise DomainError(f"{name} must be finite, got {z}")
        object.__setattr__(self, "z1", z1)
        object.__setattr__(self, "z2", z2)
        object.__setattr__(self, "z3", z3)
        object.__setattr__(self, "K1", 1.0 + abs(z1) ** 2 + abs(z2) ** 2)
        object.__setattr__(self, "K2", 1.0 + abs(z3) ** 2 + abs(z1 * z3 - z2) ** 2)

    @classmethod
    def from_vector(cls, z) -> "FlagCoords":
        z = np.asarray(z, dtype=complex)
        if z.shape != (3,):
            raise DomainError(f"expected 3 complex coordinates, got shape {z.shape}")
        return cls(z[0], z[1], z[2])

    def as_vector(self) -> np.ndarray:
        return np.array([self.z1, self.z2, self.z3], dtype=complex)

    def real_coords(self) -> np.ndarray:
        """(x1, x2, x3, y1, y2, y3) with z_k = x_k + i y_k."""
        v = self.as_vector()
        return np.concatenate([v.real, v.imag])

    def matrix(self) -> Su3Matrix:
        """The unit lower-triangular big-cell representative."""
        m = np.array(
            [[1, 0, 0], [self.z1, 1, 0], [self.z2, self.z3, 1]], dtype=complex
        )
        return Su3Matrix(m, role="unit_lower_triangular")


# Minimum magnitude of the two leading principal minors of an invertible
# matrix for it to count as lying in the big cell.
BIG_CELL_MINOR_THRESHOLD = 1e-10


def bruhat_normalize(m) -> FlagCoords:
    """Big-cell coordinates of an invertible matrix via unpivoted LU.

    Writes M = L U with L unit lower triangular and returns
    (L21, L31, L32).  Fails with OutsideBigCellError when a leading
    principal minor vanishes: such flags lie in a lower Bruhat cell.
    """
    a = _entries(m)
    minor1 = a[0, 0]
    minor2 = a[0, 0] * a[1, 1] - a[0, 1] * a[1, 0]
    if abs(minor1) <= BIG_CELL_MINOR_THRESHOLD or abs(minor2) <= BIG_CELL_MINOR_THRESHOLD:
        raise OutsideBigCellError(
            f"leading minors ({abs(minor1):.3e}, {abs(minor2):.3e}) below threshold; "
            "flag lies outside the big cell"
        )
    l21 = a[1, 0] / minor1
    l31 = a[2, 0] / minor1
    u22 = a[1, 1] - l21 * a[0, 1]
    l32 = (a[2, 1] - l31 * a[0, 1]) / u22
    return FlagCoords(l21, l31, l32)


def infinitesimal_vf(k: int, z: FlagCoords) -> np.ndarray:
    """Generator field of exp(t lambda_k) in big-cell coordinates.

    Returns the coefficients (a1, a2, a3) of (d/dz1, d/dz2, d/dz3), i.e.
    the t-derivative at 0 of the normalized left translate of Z.
    """
    if not 1 <= k <= 8:
        raise IndexError(f"k must lie in 1..8, got {k}")
    z1, z2, z3 = z.z1, z.z2, z.z3
    if k == 1:
        return 0.5j * np.array([1 - z1**2, -z1 * z2, z1 * z3 - z2])
    if k == 2:
        return 0.5 * np.array([-1 - z1**2, -z1 * z2, z1 * z3 - z2])
    if k == 3:
        return 0.5j * np.array([-2 * z1, -z2, z3])
    if k == 4:
        return 0.5j * np.array([-z1 * z2, 1 - z2**2, -z3 * (z2 - z1 * z3)])
    if k == 5:
        return 0.5 * np.array([-z1 * z2, -1 - z2**2, -z3 * (z2 - z1 * z3)])
    if k == 6:
        return 0.5j * np.array([z2, z1, 1 - z3**2])
    if k == 7:
        # third coefficient -(1 + z3^2): pinned by the finite-difference flow
        # of exp(t lambda_7), matching the k=2, k=5 pattern
        return 0.5 * np.array([z2, -z1, -(1 + z3**2)])
    return -0.5j * _SQRT3 * np.array([0, z2, z3])


def kahler_potential_flag(z: FlagCoords) -> float:
    """Kahler potential log(K1 K2) of the flag manifold, >= 0."""
    return math.log(z.K1) + math.log(z.K2)


def flag_metric(z: FlagCoords) -> np.ndarray:
    """Hermitian metric h_ij = d_{z_i} d_{zbar_j} log(K1 K2).

    Positive definite with det h = 2 / (K1^2 K2^2).
    """
    z1, z2, z3 = z.z1, z.z2, z.z3
    c1, c2, c3 = z1.conjugate(), z2.conjugate(), z3.conjugate()
    K1sq, K2sq = z.K1**2, z.K2**2
    a3 = abs(z3) ** 2
    h11 = (1 + abs(z2) ** 2) / K1sq + a3 * (1 + a3) / K2sq
    h12 = -c1 * z2 / K1sq - z3 * (1 + a3) / K2sq
    h13 = z3 * (c1 + c2 * z3) / K2sq
    h22 = (1 + abs(z1) ** 2) / K1sq + (1 + a3) / K2sq
    h23 = -(c1 + c2 * z3) / K2sq
    h33 = z.K1 / K2sq
    return np.array(
        [
            [h11, h12, h13],
            [h12.conjugate(), h22, h23],
            [h13.conjugate(), h23.conjugate(), h33],
        ]
    )


def flag_metric_inverse(z: FlagCoords) -> np.ndarray:
    """Numerical inverse of flag_metric(z) (always exists)."""
    return np.linalg.inv(flag_metric(z))


def flag_metric_inverse_tabulated(z: FlagCoords) -> np.ndarray:
    """Verbatim closed-form inverse-metric table, for diagnostics only.

    Empirically this evaluates to about 2 * flag_metric_inverse(z) (exactly
    2x at z = 0); the proportionality factor is reported by the metric
    verification suite rather than asserted.
    """
    z1, z2, z3 = z.z1, z.z2, z.z3
    c1, c2, c3 = z1.conjugate(), z2.conjugate(), z3.conjugate()
    K1, K2 = z.K1, z.K2
    q = K1 / K2
    return np.array(
        [
            [
                K1 * (1 + abs(z1) ** 2 + q),
                K1 * (c1 * z2 + q * z3),
                (c1 + z3 * c2) * (c1 * z2 - z3 - z3 * abs(z1) ** 2),
            ],
            [
                K1 * (z1 * c2 + q * c3),
                K1 * ((1 + abs(z2) ** 2) + q * abs(z3) ** 2),
                (c1 + c2 * z3) * ((1 + abs(z2) ** 2) - z1 * c2 * z3),
            ],
            [
                (z1 + c3 * z2) * (z1 * c2 - c3 - z3 * abs(z1) ** 2),
                (z1 + z2 * c3) * ((1 + abs(z2) ** 2) - c1 * z2 * c3),
                K1 * (1 + abs(z3) ** 2) + K2**2 / K1,
            ],
        ]
    )


def flag_symplectic_matrix(z: FlagCoords) -> np.ndarray:
    """The 6x6 real matrix of the symplectic form in (x1..x3, y1..y3).

    Built from h = flag_metric(z) as [[Im h, -Re h], [Re h, Im h]]; it is
    antisymmetric and nondegenerate.  Contraction convention: the covector
    iota_X omega has components W @ X for a real tangent 6-vector X.
    """
    h = flag_metric(z)
    re, im = h.real, h.imag
    return np.block([[im, -re], [re, im]])


def flag_laplacian_coeffs(z: FlagCoords) -> np.ndarray:
    """Coefficient matrix c[i, j] of d_{z_i} d_{zbar_j} in the flag Laplacian.

    Assembled as the CP^2 part plus the fiber correction term; the (3,1)
    and (3,2) coefficients are the Hermitian conjugates of (1,3), (2,3)
    (the Laplacian is a real operator).  Compare against
    flag_laplacian_reference for the diagnostic mismatch report.
    """
    z1, z2, z3 = z.z1, z.z2, z.z3
    c1, c2, c3 = z1.conjugate(), z2.conjugate(), z3.conjugate()
    K1, K2 = z.K1, z.K2
    c = np.zeros((3, 3), dtype=complex)
    # CP^2 block: (1 + delta_jk z_k zbar_j)
    c[0, 0] = 1 + z1 * c1
    c[0, 1] = 1
    c[1, 0] = 1
    c[1, 1] = 1 + z2 * c2
    # correction term
    r = K1**2 / K2
    c[0, 0] += r
    c[0, 1] += z3 * r
    c[1, 0] += c3 * r
    c[1, 1] += abs(z3) ** 2 * r
    c[2, 2] = K1 * (1 + abs(z3) ** 2) + K2**2 / K1
    c[0, 2] = (c1 + z3 * c2) * (c1 * z2 - z3 - z3 * abs(z1) ** 2)
    c[1, 2] = (c1 + c2 * z3) * ((1 + abs(z2) ** 2) - z1 * c2 * z3)
    c[2, 0] = c[0, 2].conjugate()
    c[2, 1] = c[1, 2].conjugate()
    return c


def flag_laplacian_reference(z: FlagCoords) -> np.ndarray:
    """Reference coefficients 2 h^{ji} of a Kahler Laplacian.

    The tabulated flag_laplacian_coeffs do not reproduce these (the CP^2
    block differs in form); the gap is measured and reported by the
    verification suite, never asserted.
    """
    return 2.0 * flag_metric_inverse(z).T
