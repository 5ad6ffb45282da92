"""Affine Bloch-space representation of quantum channels.

A channel acts on Bloch vectors as w -> A w + c. Includes the depolarizing
mechanism calibrated to a privacy budget, the image-radius validity check,
and a Choi-matrix complete-positivity check for qubits.
"""

from dataclasses import dataclass, field
import json

import numpy as np

from . import bloch
from .exceptions import (
    InvalidBudgetError,
    InvalidInputError,
    UnsupportedDimensionError,
)
from .sphere import maximize_convex_on_sphere, seed_directions

IMAGE_TOL = 1e-9
CHOI_TOL = -1e-10


@dataclass(frozen=True)
class AffineChannel:
    """Channel (A, c) acting on (d^2-1)-dimensional Bloch vectors."""

    d: int
    A: np.ndarray
    c: np.ndarray

    def __post_init__(self):
        n = self.d * self.d - 1
        A = np.asarray(self.A, dtype=float)
        c = np.asarray(self.c, dtype=float)
        if A.shape != (n, n) or c.shape != (n,):
            raise InvalidInputError(
                f"channel for d={self.d} needs A of shape ({n},{n}) and c of "
                f"length {n}, got {A.shape} and {c.shape}"
            )
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "c", c)

    def to_dict(self):
        return {"d": self.d, "A": self.A.tolist(), "c": self.c.tolist()}

    @classmethod
    def from_dict(cls, data):
        return cls(d=int(data["d"]), A=np.array(data["A"], dtype=float),
                   c=np.array(data["c"], dtype=float))

    @classmethod
    def load(cls, path):
        with open(path) as fh:
            return cls.from_dict(json.load(fh))

    def save(self, path):
        with open(path, "w") as fh:
            json.dump(self.to_dict(), fh)


def identity_channel(d=2):
    n = d * d - 1
    return AffineChannel(d=d, A=np.eye(n), c=np.zeros(n))


def depolarizing(d, eps):
    """Depolarizing channel calibrated to budget eps: A = (1-p) I, c = 0,
    with p = d / (d - 1 + e^eps) (p = 2/(1+e^eps) for qubits)."""
    if eps < 0:
        raise InvalidBudgetError(f"privacy budget must be >= 0, got {eps}")
    if d < 2:
        raise InvalidInputError(f"dimension must be >= 2, got {d}")
    p = d / (d - 1 + np.exp(eps))
    n = d * d - 1
    return AffineChannel(d=d, A=(1.0 - p) * np.eye(n), c=np.zeros(n))


def apply(ch, w):
    """Apply the channel to a Bloch vector (or a batch of row vectors)."""
    w = np.asarray(w, dtype=float)
    n = ch.d * ch.d - 1
    if w.shape[-1] != n:
        raise InvalidInputError(
            f"Bloch vector of length {w.shape[-1]} does not match d={ch.d}"
        )
    return w @ ch.A.T + ch.c


def image_radius(ch, n_seeds=256):
    """Maximum of ||A w + c|| over the outer ball ||w|| <= r_d.

    The objective is convex in w, so the maximum sits on the sphere
    ||w|| = r_d; solved by multi-start Frank-Wolfe ascent from a
    deterministic seed set plus the top singular directions of A.
    """
    r = bloch.max_radius(ch.d)
    A, c = ch.A, ch.c
    _, _, vt = np.linalg.svd(A)
    extra = [vt[0], -vt[0]]
    if np.linalg.norm(c) > 0:
        atc = A.T @ c
        extra += [c, -c, atc, -atc]
    seeds = seed_directions(A.shape[0], n_seeds, extra=extra)

    def value(U):
        return np.linalg.norm(r * U @ A.T + c, axis=1)

    def gradient(U):
        y = r * U @ A.T + c
        norms = np.linalg.norm(y, axis=1, keepdims=True)
        y = y / np.where(norms > 0, norms, 1.0)
        return y @ A

    best, _ = maximize_convex_on_sphere(value, gradient, seeds)
    return best


def is_valid(ch, tol=IMAGE_TOL):
    """Image condition: channel maps the outer ball into itself."""
    return image_radius(ch) <= bloch.max_radius(ch.d) + tol


def cp_check(ch):
    """Complete-positivity check for qubit channels via the Choi matrix.

    The affine pair (A, c) extends to the linear map
    X -> (tr X)(I + c.sigma)/2 + (1/2)(A w_X).sigma with
    w_X,i = tr(X sigma_i). Returns (min_eig >= -1e-10, min_eig) for the
    Choi matrix sum_jk |j><k| (x) Phi(|j><k|).
    """
    if ch.d != 2:
        raise UnsupportedDimensionError(
            "complete-positivity check is only supported for qubits"
        )
    sig = bloch.generators(2)
    eye = np.eye(2, dtype=complex)

    def phi(X):
        # complex-linear extension: the Pauli coefficients of a general
        # 2x2 matrix are complex
        wx = np.einsum("ab,iba->i", X, sig)
        out = np.trace(X) * 0.5 * (eye + np.tensordot(ch.c, sig, axes=(0, 0)))
        out = out + 0.5 * np.tensordot(ch.A @ wx, sig, axes=(0, 0))
        return out

    choi = np.zeros((4, 4), dtype=complex)
    for j in range(2):
        for k in range(2):
            E = np.zeros((2, 2), dtype=complex)
            E[j, k] = 1.0
            choi += np.kron(E, phi(E))
    lo = float(np.linalg.eigvalsh(choi)[0])
    return lo >= CHOI_TOL, lo
