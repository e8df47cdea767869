"""Dense complex linear algebra for small qubit registers.

Matrices are ``numpy`` complex arrays; state vectors are 1-D arrays of length
``2**n``. Qubit 1 is the most significant bit of the computational index, so
``|q1 q2 q3>`` maps to index ``4*q1 + 2*q2 + q3``.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

from .errors import InputError

HERMITIAN_TOL = 1e-10
JACOBI_TOL = 1e-13
JACOBI_MAX_SWEEPS = 100

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}


def as_matrix(m) -> np.ndarray:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2:
        raise InputError(f"expected a 2-D matrix, got shape {a.shape}")
    return a


def allclose(a, b, atol: float) -> bool:
    """Entrywise comparison; the absolute tolerance is mandatory."""
    a, b = np.asarray(a), np.asarray(b)
    return a.shape == b.shape and bool(np.all(np.abs(a - b) <= atol))


def num_qubits_of(dim: int) -> int:
    n = int(dim).bit_length() - 1
    if dim < 1 or 2**n != dim:
        raise InputError(f"dimension {dim} is not a power of two")
    return n


def kron(a, b) -> np.ndarray:
    return np.kron(as_matrix(a), as_matrix(b))


def kron_all(mats: Iterable) -> np.ndarray:
    out = np.eye(1, dtype=complex)
    for m in mats:
        out = kron(out, m)
    return out


def pauli_string_matrix(label: str) -> np.ndarray:
    """Tensor product of single-qubit Paulis, leftmost letter on qubit 1."""
    if not isinstance(label, str) or not label:
        raise InputError(f"invalid Pauli label {label!r}")
    bad = set(label) - set(PAULI)
    if bad:
        raise InputError(f"invalid Pauli character(s) {sorted(bad)} in {label!r}")
    return kron_all(PAULI[c] for c in label)


def is_hermitian(m, tol: float = HERMITIAN_TOL) -> bool:
    m = as_matrix(m)
    return m.shape[0] == m.shape[1] and bool(np.max(np.abs(m - m.conj().T), initial=0.0) <= tol)


def partial_transpose(rho, cut: int) -> np.ndarray:
    """Transpose the single-qubit factor ``cut`` (1-based) of a density matrix."""
    rho = as_matrix(rho)
    if rho.shape[0] != rho.shape[1]:
        raise InputError(f"density matrix must be square, got {rho.shape}")
    n = num_qubits_of(rho.shape[0])
    if not 1 <= cut <= n:
        raise InputError(f"cut must be in 1..{n}, got {cut}")
    t = rho.reshape([2] * (2 * n))
    axes = list(range(2 * n))
    k = cut - 1
    axes[k], axes[n + k] = axes[n + k], axes[k]
    return t.transpose(axes).reshape(rho.shape)


def partial_trace(state, keep: Iterable[int]) -> np.ndarray:
    """Reduced density operator on the 1-based qubits in ``keep``.

    ``state`` is either a state vector or a density matrix. Kept qubits stay
    in ascending order.
    """
    keep = sorted(set(keep))
    if not keep:
        raise InputError("keep set must be non-empty")
    a = np.asarray(state, dtype=complex)
    if a.ndim == 1:
        n = num_qubits_of(a.shape[0])
    elif a.ndim == 2 and a.shape[0] == a.shape[1]:
        n = num_qubits_of(a.shape[0])
    else:
        raise InputError(f"expected a state vector or square matrix, got shape {a.shape}")
    if keep[0] < 1 or keep[-1] > n:
        raise InputError(f"qubit indices must lie in 1..{n}, got {keep}")
    kept = [q - 1 for q in keep]
    traced = [q for q in range(n) if q not in kept]
    dk = 2 ** len(kept)

    if a.ndim == 1:
        psi = a.reshape([2] * n).transpose(kept + traced).reshape(dk, -1)
        return psi @ psi.conj().T

    t = a.reshape([2] * (2 * n))
    t = t.transpose(kept + traced + [n + q for q in kept] + [n + q for q in traced])
    dt = 2 ** len(traced)
    t = t.reshape(dk, dt, dk, dt)
    return np.einsum("ajbj->ab", t)


def _off_norm(a: np.ndarray) -> float:
    off = a - np.diag(np.diag(a))
    return float(np.sqrt(np.sum(np.abs(off) ** 2)))


def hermitian_eigenvalues(m) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix via cyclic Jacobi sweeps.

    Each rotation first removes the phase of the pivot ``a[p, q]`` and then
    applies the real symmetric Jacobi rotation that zeroes it.
    """
    a = as_matrix(m).copy()
    if a.shape[0] != a.shape[1]:
        raise InputError(f"matrix must be square, got {a.shape}")
    if not is_hermitian(a):
        raise InputError("matrix is not Hermitian within tolerance")
    n = a.shape[0]
    a = (a + a.conj().T) / 2  # only removes sub-tolerance asymmetry
    scale = max(1.0, float(np.sqrt(np.sum(np.abs(a) ** 2))))

    for _ in range(JACOBI_MAX_SWEEPS):
        if _off_norm(a) <= JACOBI_TOL * scale:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag < 1e-300:
                    continue
                phase = apq / mag
                app, aqq = a[p, p].real, a[q, q].real
                tau = (aqq - app) / (2.0 * mag)
                t = (1.0 if tau >= 0 else -1.0) / (abs(tau) + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]] acting on (p, q)
                gpp, gpq = c, s
                gqp, gqq = -s * np.conj(phase), c * np.conj(phase)
                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = col_p * gpp + col_q * gqp
                a[:, q] = col_p * gpq + col_q * gqq
                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = np.conj(gpp) * row_p + np.conj(gqp) * row_q
                a[q, :] = np.conj(gpq) * row_p + np.conj(gqq) * row_q
                a[p, q] = a[q, p] = 0.0
    return np.sort(np.diag(a).real)


def trace_distance(a, b) -> float:
    d = as_matrix(a) - as_matrix(b)
    return 0.5 * float(np.sum(np.abs(hermitian_eigenvalues(d))))


def expectation(rho, op) -> float:
    return float(np.trace(as_matrix(rho) @ as_matrix(op)).real)


def fidelity_pure(psi, phi) -> float:
    return float(abs(np.vdot(np.asarray(psi), np.asarray(phi))) ** 2)
