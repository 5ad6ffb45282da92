"""Generator bases and Bloch-vector <-> density-matrix conversions.

Qubit states are written rho = (I + w.sigma)/2 with w in the closed unit
ball; qudits use rho = I/d + (1/2) w.eta with the generalized Gell-Mann
generators eta normalized so that trace(eta_i eta_j) = 2 delta_ij (the
d=2 case then reproduces the Pauli matrices exactly).
"""

from functools import lru_cache

import numpy as np

from .exceptions import InvalidDimensionError, InvalidInputError, NotAStateError

HERMITICITY_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_TOL = -1e-10

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def max_radius(d):
    """Outer radius of the generalized Bloch body: 1 for qubits,
    sqrt(2(d-1)/d) in general."""
    return float(np.sqrt(2.0 * (d - 1) / d))


@lru_cache(maxsize=None)
def generators(d):
    """Return the d^2 - 1 generalized Gell-Mann matrices for dimension d.

    Ordering is deterministic: symmetric pair matrices in lexicographic
    (j, k) order, then antisymmetric pairs in the same order, then the
    diagonal matrices. For d=2 this yields (sigma_x, sigma_y, sigma_z).

    Returns a read-only array of shape (d^2 - 1, d, d).
    """
    if not isinstance(d, (int, np.integer)) or d < 2:
        raise InvalidDimensionError(f"dimension must be an integer >= 2, got {d!r}")

    mats = []
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = 1.0
            m[k, j] = 1.0
            mats.append(m)
    for j in range(d):
        for k in range(j + 1, d):
            m = np.zeros((d, d), dtype=complex)
            m[j, k] = -1j
            m[k, j] = 1j
            mats.append(m)
    for l in range(1, d):
        diag = np.zeros(d)
        diag[:l] = 1.0
        diag[l] = -l
        m = np.diag(diag.astype(complex)) * np.sqrt(2.0 / (l * (l + 1)))
        mats.append(m)

    etas = np.array(mats)
    etas.setflags(write=False)
    return etas


def to_density(w, d=None):
    """Map a Bloch vector to its density matrix I/d + (1/2) w.eta.

    Raises NotAStateError if the result has an eigenvalue below -1e-10.
    """
    w = np.asarray(w, dtype=float)
    if w.ndim != 1:
        raise InvalidInputError("Bloch vector must be one-dimensional")
    if d is None:
        d = int(round(np.sqrt(w.size + 1)))
    if d * d - 1 != w.size:
        raise InvalidInputError(
            f"Bloch vector of length {w.size} does not match dimension {d}"
        )
    etas = generators(d)
    rho = np.eye(d, dtype=complex) / d + 0.5 * np.tensordot(w, etas, axes=(0, 0))
    lo = float(np.linalg.eigvalsh(rho)[0])
    if lo < POSITIVITY_TOL:
        raise NotAStateError(
            f"Bloch vector is outside the state body (min eigenvalue {lo:.3e})",
            eigenvalue=lo,
        )
    return rho


def from_density(rho):
    """Recover the Bloch vector of a density matrix via w_i = trace(rho eta_i)."""
    rho = np.asarray(rho, dtype=complex)
    check_density(rho)
    d = rho.shape[0]
    etas = generators(d)
    # trace(rho eta_i) = sum_{ab} rho_ab (eta_i)_ba
    w = np.real(np.einsum("ab,iba->i", rho, etas))
    return w


def check_density(rho, trace_tol=TRACE_TOL, herm_tol=HERMITICITY_TOL,
                  pos_tol=POSITIVITY_TOL):
    """Validate density-matrix invariants; raise on violation."""
    rho = np.asarray(rho)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {rho.shape}")
    if np.max(np.abs(rho - rho.conj().T)) > herm_tol:
        raise InvalidInputError("matrix is not Hermitian")
    if abs(np.trace(rho).real - 1.0) > trace_tol:
        raise InvalidInputError(f"trace is {np.trace(rho).real!r}, expected 1")
    lo = float(np.linalg.eigvalsh(rho)[0])
    if lo < pos_tol:
        raise NotAStateError(
            f"matrix has negative eigenvalue {lo:.3e}", eigenvalue=lo
        )


def random_bloch_vector(d, rng, radius=None):
    """Draw a Bloch vector uniformly from the valid state set.

    Qubits: uniform ball. d = 3: rejection sampling of the outer ball on
    positivity of the density matrix (~2.7% acceptance). d >= 4: the
    state body is a vanishing fraction of the outer ball and rejection
    never terminates in practice, so states are drawn from the
    Hilbert-Schmidt (Ginibre) ensemble instead.
    """
    n = d * d - 1
    r_d = max_radius(d) if radius is None else radius
    if d >= 4:
        g = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
        rho = g @ g.conj().T
        rho /= np.trace(rho).real
        return from_density(rho)
    while True:
        u = rng.standard_normal(n)
        u /= np.linalg.norm(u)
        w = r_d * rng.random() ** (1.0 / n) * u
        if d == 2:
            return w
        try:
            to_density(w, d)
        except NotAStateError:
            continue
        return w
