"""Quantum Fisher information for scalar parameter families.

Three routes are provided and cross-checked in the tests:
  * the qubit closed form in Bloch coordinates,
  * the qudit quadratic form through M(w) = (2/d) I - w w^T + G(w),
  * an SLD eigen-decomposition oracle working directly on matrices.
"""

from dataclasses import dataclass
import threading

import numpy as np

from . import bloch
from .exceptions import (
    InvalidInputError,
    NearSingularError,
    UnsupportedDimensionError,
)

BOUNDARY_TOL = 1e-9
SLD_SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class QfiResult:
    value: float
    branch: str  # "interior" or "boundary"
    regularization_used: bool = False

    def __float__(self):
        return self.value


@dataclass(frozen=True)
class StateFamily:
    """Differentiable map lambda -> Bloch vector, with optional analytic
    derivative (finite differences otherwise)."""

    d: int
    omega_of: callable
    d_omega_of: callable = None
    label: str = ""
    domain: tuple = (-np.inf, np.inf)

    def derivative(self, lam, h=1e-5):
        if self.d_omega_of is not None:
            return np.asarray(self.d_omega_of(lam), dtype=float)
        return family_derivative(self, lam, h)


def family_derivative(fam, lam, h=1e-5):
    """Central finite difference (omega(lam+h) - omega(lam-h)) / (2h)."""
    lo, hi = fam.domain
    if not (lo < lam - h and lam + h < hi):
        raise InvalidInputError(
            f"lambda +/- h = {lam} +/- {h} leaves the family domain {fam.domain}"
        )
    wp = np.asarray(fam.omega_of(lam + h), dtype=float)
    wm = np.asarray(fam.omega_of(lam - h), dtype=float)
    return (wp - wm) / (2.0 * h)


def qfi_qubit(w, dw):
    """Qubit QFI: ||dw||^2 + <w, dw>^2 / (1 - ||w||^2) in the interior,
    ||dw||^2 on the pure boundary."""
    w = np.asarray(w, dtype=float)
    dw = np.asarray(dw, dtype=float)
    r = float(np.linalg.norm(w))
    if r > 1.0 + 1e-12:
        raise InvalidInputError(f"not a qubit state: ||w|| = {r}")
    dd = float(dw @ dw)
    if r >= 1.0 - BOUNDARY_TOL:
        return QfiResult(value=dd, branch="boundary")
    inner = float(w @ dw)
    return QfiResult(value=dd + inner * inner / (1.0 - r * r), branch="interior")


_anticomm_cache = {}
_anticomm_lock = threading.Lock()


def anticommutator_coefficients(d):
    """Cached tensor T[i,j,k] = (1/4) trace((eta_i eta_j + eta_j eta_i) eta_k),
    computed numerically from the generators."""
    with _anticomm_lock:
        if d not in _anticomm_cache:
            etas = np.asarray(bloch.generators(d))
            prod = np.einsum("iab,jbc->ijac", etas, etas)
            anti = prod + np.transpose(prod, (1, 0, 2, 3))
            T = 0.25 * np.real(np.einsum("ijab,kba->ijk", anti, etas))
            T.setflags(write=False)
            _anticomm_cache[d] = T
    return _anticomm_cache[d]


def information_matrix(d, w):
    """M(w) = (2/d) I - w w^T + G(w) with G_ij = sum_k T[i,j,k] w_k."""
    w = np.asarray(w, dtype=float)
    n = d * d - 1
    if w.shape != (n,):
        raise InvalidInputError(f"expected Bloch vector of length {n}")
    T = anticommutator_coefficients(d)
    G = np.tensordot(T, w, axes=(2, 0))
    return (2.0 / d) * np.eye(n) - np.outer(w, w) + G


def qfi_qudit(d, w, dw, regularize=False):
    """Qudit QFI as the quadratic form dw^T M(w)^{-1} dw in the interior,
    ||dw||^2 on the outer boundary."""
    w = np.asarray(w, dtype=float)
    dw = np.asarray(dw, dtype=float)
    r = float(np.linalg.norm(w))
    r_d = bloch.max_radius(d)
    if r >= r_d - BOUNDARY_TOL:
        return QfiResult(value=float(dw @ dw), branch="boundary")
    M = information_matrix(d, w)
    lo = float(np.linalg.eigvalsh(M)[0])
    if lo < SLD_SUPPORT_TOL:
        if not regularize:
            raise NearSingularError(
                f"information matrix is near singular (min eigenvalue {lo:.3e}); "
                "retry with regularize=True",
                eigenvalue=lo,
            )
        M = M + 1e-10 * np.eye(M.shape[0])
    x = np.linalg.solve(M, dw)
    return QfiResult(value=float(dw @ x), branch="interior",
                     regularization_used=bool(lo < SLD_SUPPORT_TOL))


def qfi_sld_oracle(rho, drho):
    """SLD-route QFI: F = sum_{j,k} 2 |<j|drho|k>|^2 / (p_j + p_k) over the
    support (pairs with p_j + p_k <= 1e-12 dropped)."""
    rho = np.asarray(rho, dtype=complex)
    drho = np.asarray(drho, dtype=complex)
    if np.max(np.abs(drho - drho.conj().T)) > 1e-10:
        raise InvalidInputError("derivative matrix is not Hermitian")
    if abs(np.trace(drho).real) > 1e-8:
        raise InvalidInputError(
            f"derivative matrix must be traceless, got trace {np.trace(drho)!r}"
        )
    p, V = np.linalg.eigh(rho)
    D = V.conj().T @ drho @ V
    psum = p[:, None] + p[None, :]
    mask = psum > SLD_SUPPORT_TOL
    vals = np.zeros_like(psum)
    np.divide(2.0 * np.abs(D) ** 2, psum, out=vals, where=mask)
    return float(np.sum(vals))


def qfi_family(fam, lam, h=1e-5):
    """QFI of a state family at a parameter value, by dimension dispatch."""
    w = np.asarray(fam.omega_of(lam), dtype=float)
    dw = fam.derivative(lam, h)
    if fam.d == 2:
        return qfi_qubit(w, dw)
    return qfi_qudit(fam.d, w, dw)


# ---------------------------------------------------------------------------
# Built-in families


def radial_family():
    """w = (0, 0, lambda) on (-1, 1): mixed states along the z axis."""
    return StateFamily(
        d=2,
        omega_of=lambda lam: np.array([0.0, 0.0, lam]),
        d_omega_of=lambda lam: np.array([0.0, 0.0, 1.0]),
        label="radial",
        domain=(-1.0, 1.0),
    )


def rotation_family():
    """w = (sin lambda, 0, cos lambda): pure states on a great circle."""
    return StateFamily(
        d=2,
        omega_of=lambda lam: np.array([np.sin(lam), 0.0, np.cos(lam)]),
        d_omega_of=lambda lam: np.array([np.cos(lam), 0.0, -np.sin(lam)]),
        label="rotation",
    )


def scaled_rotation_family(radius=0.8):
    """w = r (sin lambda, 0, cos lambda) with r < 1: mixed rotation."""
    if not (0.0 < radius < 1.0):
        raise InvalidInputError(f"radius must be in (0, 1), got {radius}")
    return StateFamily(
        d=2,
        omega_of=lambda lam: radius * np.array([np.sin(lam), 0.0, np.cos(lam)]),
        d_omega_of=lambda lam: radius * np.array([np.cos(lam), 0.0, -np.sin(lam)]),
        label=f"scaled-rotation(r={radius})",
    )


def axis_family(d, k=0):
    """Qudit family w = lambda e_k along one generator direction."""
    n = d * d - 1
    if not (0 <= k < n):
        raise InvalidInputError(f"axis index {k} out of range for d={d}")
    e = np.zeros(n)
    e[k] = 1.0
    return StateFamily(
        d=d,
        omega_of=lambda lam: lam * e,
        d_omega_of=lambda lam: e.copy(),
        label=f"axis-{k + 1}(d={d})",
        domain=(-bloch.max_radius(d), bloch.max_radius(d)),
    )


def table_family(path, d=2):
    """Family interpolated from a whitespace/comma table of rows
    (lambda, w_1, ..., w_{d^2-1}) with a piecewise-cubic spline."""
    from scipy.interpolate import CubicSpline

    rows = np.loadtxt(path, delimiter="," if _is_csv(path) else None)
    if rows.ndim != 2 or rows.shape[1] != d * d:
        raise InvalidInputError(
            f"table must have 1 + {d * d - 1} columns for d={d}, "
            f"got shape {rows.shape}"
        )
    lam = rows[:, 0]
    spline = CubicSpline(lam, rows[:, 1:], axis=0)
    dspline = spline.derivative()
    return StateFamily(
        d=d,
        omega_of=lambda x: np.asarray(spline(x), dtype=float),
        d_omega_of=lambda x: np.asarray(dspline(x), dtype=float),
        label=f"table({path})",
        domain=(float(lam[0]), float(lam[-1])),
    )


def _is_csv(path):
    with open(path) as fh:
        return "," in fh.readline()


def family_by_name(name, d=2, **kwargs):
    """Look up a built-in family: radial, rotation, scaled-rotation,
    axis-<k>, or a table file path."""
    if name == "radial":
        return radial_family()
    if name == "rotation":
        return rotation_family()
    if name == "scaled-rotation":
        return scaled_rotation_family(**kwargs)
    if name.startswith("axis-"):
        if d < 2:
            raise UnsupportedDimensionError(f"bad dimension {d}")
        return axis_family(d, int(name.split("-", 1)[1]) - 1)
    raise InvalidInputError(f"unknown family {name!r}")
