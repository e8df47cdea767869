"""Shot-based estimation of Pauli expectations and witness values.

Each shot runs the preparation circuit plus basis-change rotations and reads
qubits 1-3 in the computational basis. Optional noise is trajectory-style:
after every 1-qubit (2-qubit) gate, with probability ``depol1`` (``depol2``),
a uniformly random non-identity Pauli hits the touched qubit(s); readout flips
each measured bit independently with probability ``readout``.

Randomness comes from numpy's PCG64 generator. Witness estimates derive one
sub-seed per observable from ``SeedSequence(seed, spawn_key=(counter,))``, so
results depend only on the inputs and seed.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import circuits as C
from . import qmat
from .errors import DegenerateWitnessError, InputError
from .ghz import GhzDiagonalState
from .witness import WitnessSpec, observable

DEFAULT_SHOTS = 10_000
DEGENERATE_TOL = 1e-9
_BATCH = 4096
_PAULI_1Q = (None, "X", "Y", "Z")


@dataclass(frozen=True)
class NoiseParams:
    depol1: float = 0.0
    depol2: float = 0.0
    readout: float = 0.0

    def __post_init__(self):
        for name in ("depol1", "depol2", "readout"):
            v = float(getattr(self, name))
            if not 0.0 <= v <= 1.0:
                raise InputError(f"{name} must lie in [0, 1], got {v}")
            object.__setattr__(self, name, v)

    @property
    def gate_noise(self) -> bool:
        return self.depol1 > 0 or self.depol2 > 0

    @classmethod
    def parse(cls, text: str) -> "NoiseParams":
        """``"depol1=0.001,depol2=0.01,readout=0.02"``; missing keys default to 0."""
        kw = {}
        for item in filter(None, (t.strip() for t in text.split(","))):
            key, sep, val = item.partition("=")
            key = key.strip()
            if not sep or key not in ("depol1", "depol2", "readout"):
                raise InputError(f"bad noise setting {item!r}")
            try:
                kw[key] = float(val)
            except ValueError:
                raise InputError(f"bad noise value {item!r}") from None
        return cls(**kw)


@dataclass(frozen=True)
class Estimate:
    mean: float
    stderr: float
    shots: int
    seed: int

    def to_json(self) -> dict:
        return {"mean": self.mean, "stderr": self.stderr, "shots": self.shots, "seed": self.seed}


def _check_obs(obs: str) -> str:
    if not isinstance(obs, str) or len(obs) != 3 or set(obs) - set("IXYZ"):
        raise InputError(f"observable must be a 3-letter Pauli string, got {obs!r}")
    return obs


def measurement_rotation(obs: str) -> list[C.Gate]:
    """Gates mapping the eigenbasis of ``obs`` onto the computational basis."""
    gates = []
    for q, letter in enumerate(_check_obs(obs), start=1):
        if letter == "X":
            gates.append(C.H(q))
        elif letter == "Y":
            gates.extend([C.RZ(q, -math.pi / 2), C.H(q)])
    return gates


def _parity_signs(obs: str) -> np.ndarray:
    """+/-1 eigenvalue for each of the 8 outcomes of qubits 1-3."""
    support = [q for q, letter in enumerate(obs) if letter != "I"]
    out = np.ones(8)
    for b in range(8):
        bits = ((b >> 2) & 1, (b >> 1) & 1, b & 1)
        if sum(bits[q] for q in support) % 2:
            out[b] = -1.0
    return out


def _marginal(states: np.ndarray, n: int) -> np.ndarray:
    """Probabilities of qubits 1-3 for a batch of ``(B, 2, ..., 2)`` states."""
    probs = np.abs(states.reshape(states.shape[0], 8, 2 ** (n - 3))) ** 2
    p = probs.sum(axis=2)
    return p / p.sum(axis=1, keepdims=True)


def _apply_pauli(batch: np.ndarray, letter: str, q: int) -> np.ndarray:
    return C.apply_single(batch, qmat.PAULI[letter], q)


def _fault_codes(gates, noise: NoiseParams, shots: int, rng: np.random.Generator) -> np.ndarray:
    codes = np.zeros((shots, len(gates)), dtype=np.int8)
    for g_idx, g in enumerate(gates):
        two = g.kind == "CNOT"
        prob = noise.depol2 if two else noise.depol1
        if prob <= 0:
            continue
        hit = rng.random(shots) < prob
        kinds = rng.integers(1, 16 if two else 4, size=shots)
        codes[:, g_idx] = np.where(hit, kinds, 0)
    return codes


def _noisy_marginals(gates, n: int, patterns: np.ndarray) -> np.ndarray:
    """Outcome distributions of qubits 1-3 for each fault pattern."""
    out = np.empty((patterns.shape[0], 8))
    for start in range(0, patterns.shape[0], _BATCH):
        pat = patterns[start:start + _BATCH]
        b = pat.shape[0]
        state = np.zeros((b, 2**n), dtype=complex)
        state[:, 0] = 1.0
        state = state.reshape([b] + [2] * n)
        for g_idx, g in enumerate(gates):
            state = C.apply_gate(state, g, offset=1)
            col = pat[:, g_idx]
            if not col.any():
                continue
            for code in np.unique(col[col > 0]):
                rows = col == code
                sub = state[rows]
                if g.kind == "CNOT":
                    letters = (_PAULI_1Q[code // 4], _PAULI_1Q[code % 4])
                    for q, letter in zip(g.qubits, letters):
                        if letter is not None:
                            sub = _apply_pauli(sub, letter, q)
                else:
                    sub = _apply_pauli(sub, _PAULI_1Q[code], g.qubits[0])
                state[rows] = sub
        out[start:start + b] = _marginal(state, n)
    return out


def _summarize(n_plus: int, n_minus: int, seed: int) -> Estimate:
    shots = n_plus + n_minus
    mean = (n_plus - n_minus) / shots
    if shots > 1:
        var = max(0.0, (1.0 - mean * mean) * shots / (shots - 1))
        stderr = math.sqrt(var / shots)
    else:
        stderr = 0.0
    return Estimate(float(mean), stderr, int(shots), int(seed))


def estimate_expectation(
    prep: C.Circuit,
    obs: str,
    shots: int = DEFAULT_SHOTS,
    seed: int = 0,
    noise: NoiseParams | None = None,
) -> Estimate:
    """Sample the +/-1 parity of ``obs`` on qubits 1-3 of ``prep``'s output."""
    obs = _check_obs(obs)
    if shots < 1:
        raise InputError(f"shots must be >= 1, got {shots}")
    if prep.num_qubits < 3:
        raise InputError("preparation circuit needs at least 3 qubits")
    noise = noise or NoiseParams()
    rng = np.random.default_rng(seed)
    n = prep.num_qubits
    gates = list(prep.gates) + measurement_rotation(obs)
    signs = _parity_signs(obs)

    if noise.gate_noise:
        codes = _fault_codes(gates, noise, shots, rng)
        patterns, counts = np.unique(codes, axis=0, return_counts=True)
        probs = _noisy_marginals(gates, n, patterns)
        outcome_counts = rng.multinomial(counts, probs).sum(axis=0)
    else:
        psi = C.simulate_statevector(C.Circuit(n, gates))
        probs = _marginal(psi.reshape(1, -1), n)[0]
        outcome_counts = rng.multinomial(shots, probs)

    if noise.readout > 0:
        outcomes = np.repeat(np.arange(8), outcome_counts)
        flips = rng.random((shots, 3)) < noise.readout
        mask = flips.astype(np.int64) @ np.array([4, 2, 1])
        outcomes = outcomes ^ mask
        outcome_counts = np.bincount(outcomes, minlength=8)

    n_plus = int(outcome_counts[signs > 0].sum())
    return _summarize(n_plus, shots - n_plus, seed)


def sub_seed(seed: int, counter: int) -> int:
    ss = np.random.SeedSequence(seed, spawn_key=(counter,))
    return int(ss.generate_state(1, np.uint64)[0])


def split_shots(shots: int, parts: int) -> list[int]:
    """Even split; the remainder goes to the first (lowest-index) part."""
    base, rem = divmod(shots, parts)
    return [base + rem] + [base] * (parts - 1)


ESTIMATOR_MODES = ("fixed", "envelope", "paper-numbers")


def combine_witness(
    values: dict[int, float],
    errors: dict[int, float],
    spec: WitnessSpec,
    mode: str,
    theta: float | None = None,
) -> tuple[float, float]:
    """Witness value and first-order error from per-observable estimates.

    ``values`` and ``errors`` are keyed by observable index.
    """
    ri = values[spec.i]
    a = values[spec.j] + spec.s_jk * values[spec.k]
    b = values[spec.l] + spec.s_lm * values[spec.m]
    if mode == "fixed":
        if theta is None:
            raise InputError("fixed mode needs an angle")
        c, s = math.cos(theta), math.sin(theta)
        value = 1.0 + spec.s * ri + c * a + s * b
        grad = {spec.i: spec.s, spec.j: c, spec.k: spec.s_jk * c, spec.l: s, spec.m: spec.s_lm * s}
    elif mode in ("envelope", "paper-numbers"):
        d = a * a + b * b
        if d <= DEGENERATE_TOL:
            raise DegenerateWitnessError(f"estimated A^2 + B^2 = {d:.3g} is degenerate")
        if mode == "envelope":
            norm = math.sqrt(d)
            value = 1.0 + spec.s * ri - norm
            ga, gb = -a / norm, -b / norm
            grad = {spec.i: spec.s, spec.j: ga, spec.k: spec.s_jk * ga, spec.l: gb, spec.m: spec.s_lm * gb}
        else:
            f = 1.0 - spec.s * ri
            value = 1.0 + spec.s * ri - f * (a * a + b * b) / d
            # the A, B dependence cancels exactly; the value is 2 s r_i
            grad = {spec.i: 2.0 * spec.s, spec.j: 0.0, spec.k: 0.0, spec.l: 0.0, spec.m: 0.0}
    else:
        raise InputError(f"unknown estimator mode {mode!r}; expected one of {ESTIMATOR_MODES}")
    stderr = math.sqrt(sum((grad[o] * errors[o]) ** 2 for o in grad))
    return value, stderr


def estimate_witness(
    state: GhzDiagonalState,
    spec: WitnessSpec,
    mode: str = "fixed",
    shots: int = DEFAULT_SHOTS,
    seed: int = 0,
    noise: NoiseParams | None = None,
    theta: float | None = None,
) -> Estimate:
    """Estimate a witness on the purified preparation of ``state``.

    ``shots`` is the total budget, split evenly over the five observables the
    witness reads.
    """
    if mode not in ESTIMATOR_MODES:
        raise InputError(f"unknown estimator mode {mode!r}; expected one of {ESTIMATOR_MODES}")
    if mode == "fixed" and theta is None:
        raise InputError("fixed mode needs an angle")
    needed = sorted(spec.observables_needed())
    if shots < len(needed):
        raise InputError(f"need at least {len(needed)} shots, got {shots}")
    prep = C.purification_circuit(state)
    values, errors = {}, {}
    for counter, (o, n_shots) in enumerate(zip(needed, split_shots(shots, len(needed)))):
        est = estimate_expectation(prep, observable(o), n_shots, sub_seed(seed, counter), noise)
        values[o], errors[o] = est.mean, est.stderr
    value, stderr = combine_witness(values, errors, spec, mode, theta)
    return Estimate(value, stderr, shots, int(seed))
