"""Three-qubit GHZ-diagonal states.

Probabilities use the *pair convention*: ``(p1, p2)``, ``(p3, p4)``,
``(p5, p6)``, ``(p7, p8)`` are the ``(+, -)`` weights of the GHZ doublets
``(|0x> +/- |1x'>)/sqrt(2)`` for ``x = 00, 01, 10, 11`` (``x'`` is the bitwise
complement). In the matrix picture, index ``x`` (qubit 1 = 0) and its mirror
``7 - x`` carry the doublet ``x``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import qmat
from .errors import InputError, SamplingExhaustedError, StructureError

PROB_SUM_TOL = 1e-12
PPT_TOL = 1e-10
MAX_SAMPLER_DRAWS = 10**6

# Storage order for correlation values.
R_KEYS = ("ZZI", "ZIZ", "IZZ", "XXX", "XYY", "YXY", "YYX")
# Family-constraint labels r1..r7 and witness-observable labels O1..O7.
CORRELATION_LABELS = ("ZZI", "ZIZ", "IZZ", "XXX", "XYY", "YXY", "YYX")
OBSERVABLE_LABELS = ("IZZ", "ZIZ", "ZZI", "XXX", "XYY", "YXY", "YYX")

CUTS = ("1|23", "2|13", "3|12")


def _parse_x(x) -> int:
    if isinstance(x, str):
        if x not in ("00", "01", "10", "11"):
            raise InputError(f"doublet label must be one of 00,01,10,11, got {x!r}")
        return int(x, 2)
    x = int(x)
    if not 0 <= x <= 3:
        raise InputError(f"doublet index must be in 0..3, got {x}")
    return x


@dataclass(frozen=True)
class GhzDiagonalState:
    p: tuple[float, ...]

    def __post_init__(self):
        p = tuple(float(v) for v in self.p)
        if len(p) != 8:
            raise InputError(f"need 8 probabilities, got {len(p)}")
        if any(not (0.0 <= v <= 1.0) for v in p):
            raise InputError(f"probabilities must lie in [0, 1]: {p}")
        if abs(sum(p) - 1.0) > PROB_SUM_TOL:
            raise InputError(f"probabilities sum to {sum(p)!r}, not 1")
        object.__setattr__(self, "p", p)

    @classmethod
    def normalized(cls, weights: Sequence[float]) -> "GhzDiagonalState":
        w = np.clip(np.asarray(weights, dtype=float), 0.0, None)
        w = w / w.sum()
        # push the rounding residue onto the largest entry so the sum check holds
        w[np.argmax(w)] += 1.0 - w.sum()
        return cls(tuple(w))

    def pair(self, x) -> tuple[float, float]:
        """``(p_plus, p_minus)`` of doublet ``x``."""
        x = _parse_x(x)
        return self.p[2 * x], self.p[2 * x + 1]

    def pair_sums(self) -> np.ndarray:
        p = np.asarray(self.p)
        return p[0::2] + p[1::2]

    def to_json(self) -> dict:
        return {"p": list(self.p)}

    @classmethod
    def from_json(cls, data: Mapping | str) -> "GhzDiagonalState":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(tuple(data["p"]))


@dataclass(frozen=True)
class RVector:
    """Seven Pauli correlations ``Tr[rho P]`` keyed by Pauli string."""

    values: tuple[float, ...]

    def __post_init__(self):
        v = tuple(float(x) for x in self.values)
        if len(v) != len(R_KEYS):
            raise InputError(f"need {len(R_KEYS)} correlation values, got {len(v)}")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_mapping(cls, m: Mapping[str, float]) -> "RVector":
        return cls(tuple(m[k] for k in R_KEYS))

    def __getitem__(self, key: str) -> float:
        try:
            return self.values[R_KEYS.index(key)]
        except ValueError:
            raise InputError(f"unknown correlation key {key!r}") from None

    def correlation(self, n: int) -> float:
        """Value ``r_n`` with r1=ZZI, r2=ZIZ, r3=IZZ, r4..r7 = XXX, XYY, YXY, YYX."""
        if not 1 <= n <= 7:
            raise InputError(f"index must be in 1..7, got {n}")
        return self[CORRELATION_LABELS[n - 1]]

    def observable(self, n: int) -> float:
        """Value of observable ``O_n`` (O1=IZZ, O2=ZIZ, O3=ZZI; O4..O7 as above)."""
        if not 1 <= n <= 7:
            raise InputError(f"index must be in 1..7, got {n}")
        return self[OBSERVABLE_LABELS[n - 1]]

    def as_dict(self) -> dict[str, float]:
        return dict(zip(R_KEYS, self.values))

    def to_json(self) -> dict:
        return self.as_dict()

    @classmethod
    def from_json(cls, data: Mapping | str) -> "RVector":
        if isinstance(data, str):
            data = json.loads(data)
        return cls.from_mapping(data)


@dataclass(frozen=True)
class PptReport:
    cuts: dict
    is_ppt: bool

    def to_json(self) -> dict:
        return {"cuts": dict(self.cuts), "is_ppt": bool(self.is_ppt)}


def ghz_basis_vector(x, sign: int) -> np.ndarray:
    """``(|0x> + sign |1x'>)/sqrt(2)`` as an 8-amplitude vector."""
    x = _parse_x(x)
    if sign not in (1, -1):
        raise InputError(f"sign must be +1 or -1, got {sign}")
    v = np.zeros(8, dtype=complex)
    v[x] = 1 / np.sqrt(2)
    v[7 - x] = sign / np.sqrt(2)
    return v


def density_matrix(state: GhzDiagonalState) -> np.ndarray:
    rho = np.zeros((8, 8), dtype=complex)
    for x in range(4):
        pa, pb = state.pair(x)
        rho[x, x] = rho[7 - x, 7 - x] = (pa + pb) / 2
        rho[x, 7 - x] = rho[7 - x, x] = (pa - pb) / 2
    return rho


def is_ghz_diagonal(rho, tol: float = 1e-10) -> bool:
    rho = qmat.as_matrix(rho)
    if rho.shape != (8, 8):
        return False
    mask = np.eye(8, dtype=bool) | np.fliplr(np.eye(8, dtype=bool))
    if np.max(np.abs(rho[~mask]), initial=0.0) > tol:
        return False
    for x in range(4):
        d, dm = rho[x, x], rho[7 - x, 7 - x]
        a, am = rho[x, 7 - x], rho[7 - x, x]
        if abs(a.imag) > tol or abs(am.imag) > tol:
            return False
        if abs(d - dm) > tol or abs(a - am) > tol:
            return False
    return True


def probs_from_density(rho, tol: float = 1e-10) -> GhzDiagonalState:
    rho = qmat.as_matrix(rho)
    if not is_ghz_diagonal(rho, tol):
        raise StructureError("matrix is not GHZ-diagonal")
    p = []
    for x in range(4):
        d = rho[x, x].real
        a = rho[x, 7 - x].real
        p.extend([d + a, d - a])
    p = np.asarray(p)
    if p.min() < -tol:
        raise StructureError(f"recovered a negative probability {p.min():.3g}")
    p = np.clip(p, 0.0, 1.0)
    residue = 1.0 - p.sum()
    if abs(residue) > 1e-9:
        raise StructureError(f"recovered probabilities sum to {p.sum()!r}")
    p[np.argmax(p)] += residue
    return GhzDiagonalState(tuple(p))


def kay(a: float) -> np.ndarray:
    if a < 0:
        raise InputError(f"Kay parameter must be >= 0, got {a}")
    m = np.diag([4 + a] + [a] * 6 + [4 + a]).astype(complex)
    for x, v in enumerate((2, 2, -2, 2)):
        m[x, 7 - x] = m[7 - x, x] = v
    return m / (8 + 8 * a)


def kye(b: float, c: float) -> np.ndarray:
    """Kye's state; GHZ-diagonal only when ``b == c``. Valid for ``b*c >= 1``."""
    if b <= 0 or c <= 0:
        raise InputError(f"Kye parameters must be strictly positive, got b={b}, c={c}")
    m = np.diag([1, 1, 1, b, c, 1, 1, 1]).astype(complex)
    for x, v in enumerate((-1, -1, 1, -1)):
        m[x, 7 - x] = m[7 - x, x] = v
    return m / (6 + b + c)


_R_MATRICES = {k: qmat.pauli_string_matrix(k) for k in R_KEYS}


def r_vector(rho) -> RVector:
    rho = qmat.as_matrix(rho)
    if rho.shape != (8, 8):
        raise InputError(f"expected an 8x8 matrix, got {rho.shape}")
    if not qmat.is_hermitian(rho):
        raise InputError("density matrix is not Hermitian")
    return RVector(tuple(np.trace(rho @ _R_MATRICES[k]).real for k in R_KEYS))


def reconstruct(r: RVector) -> np.ndarray:
    """``(1/8)[III + sum_s r[s] P_s]`` over the seven correlation strings."""
    rho = np.eye(8, dtype=complex)
    for k in R_KEYS:
        rho = rho + r[k] * _R_MATRICES[k]
    return rho / 8


def ppt_report(rho, tol: float = PPT_TOL) -> PptReport:
    rho = qmat.as_matrix(rho)
    if rho.shape != (8, 8):
        raise InputError(f"expected an 8x8 matrix, got {rho.shape}")
    cuts = {
        label: float(qmat.hermitian_eigenvalues(qmat.partial_transpose(rho, k))[0])
        for k, label in enumerate(CUTS, start=1)
    }
    return PptReport(cuts=cuts, is_ppt=all(v >= -tol for v in cuts.values()))


_CATEGORY_STATES = {
    1: (0.2, 0.35, 0.15, 0.0, 0.15, 0.0, 0.15, 0.0),
    2: (0.1, 0.0, 0.1, 0.0, 0.0, 0.1, 0.4, 0.3),
    3: (0.2, 0.0, 0.3, 0.1, 0.0, 0.2, 0.2, 0.0),
}


def category_state(cat: int) -> GhzDiagonalState:
    if cat not in _CATEGORY_STATES:
        raise InputError(f"category must be 1, 2 or 3, got {cat}")
    return GhzDiagonalState(_CATEGORY_STATES[cat])


def _propose(cat: int, rng: np.random.Generator) -> np.ndarray | None:
    if cat == 1:
        # p4 = p6 = p8 = 0, p3 = p5 = p7 = q; weights (p1, p2, 3q) on the simplex
        w = rng.dirichlet(np.ones(3))
        p1, p2, q = w[0], w[1], w[2] / 3
        if q > 0.25 or 2 * p1 + 4 * q < 1 or 2 * p2 + 4 * q < 1:
            return None
        return np.array([p1, p2, q, 0.0, q, 0.0, q, 0.0])
    if cat == 2:
        # p4 = 0, p3 = p1 + p2, p7 = p3 + p8; weights (3p1, 3p2, p5, p6, 2p8)
        w = rng.dirichlet(np.ones(5))
        p1, p2, p5, p6, p8 = w[0] / 3, w[1] / 3, w[2], w[3], w[4] / 2
        p3 = p1 + p2
        return np.array([p1, p2, p3, 0.0, p5, p6, p3 + p8, p8])
    # cat 3: p1 + p3 = 1/2. PPT forces p1 - p2 = p3 - p4 = p5 + p6 = p7 + p8 = t,
    # leaving (p2, p4, 2t) on a half-simplex and free splits of the last two pairs.
    w = rng.dirichlet(np.ones(3)) / 2
    p2, p4, t = w[0], w[1], w[2] / 2
    u, v = rng.random(2)
    return np.array([p2 + t, p2, p4 + t, p4, u * t, (1 - u) * t, v * t, (1 - v) * t])


def sample_category(cat: int, seed: int, max_draws: int = MAX_SAMPLER_DRAWS) -> GhzDiagonalState:
    """Random PPT member of a category family, deterministic in ``seed``."""
    if cat not in _CATEGORY_STATES:
        raise InputError(f"category must be 1, 2 or 3, got {cat}")
    rng = np.random.default_rng(seed)
    for _ in range(max_draws):
        p = _propose(cat, rng)
        if p is None:
            continue
        state = GhzDiagonalState.normalized(p)
        if ppt_report(density_matrix(state)).is_ppt:
            return state
    raise SamplingExhaustedError(f"no PPT category-{cat} state after {max_draws} draws")


def random_state(rng: np.random.Generator, alpha: float = 1.0) -> GhzDiagonalState:
    """Uniform (``alpha = 1``) Dirichlet draw over the probability simplex."""
    return GhzDiagonalState.normalized(rng.dirichlet(np.full(8, alpha)))


def family_residuals(state: GhzDiagonalState) -> dict[int, float]:
    """Residual of each category's defining correlation identity."""
    r = r_vector(density_matrix(state))
    c = r.correlation
    return {
        1: 1 - c(3) - c(4) - c(5),
        2: 1 + c(1) - c(4) - c(6),
        3: 1 - c(1) - c(4) + c(7),
    }
