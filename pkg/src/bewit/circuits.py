"""Gate IR, statevector simulation and purification-circuit synthesis.

The preparation runs on six qubits, starting from ``|000000>``:

1. qubits 1-3: ``H`` on qubit 1 and a two-qubit amplitude loader putting
   ``sqrt(P_x)`` on ``|x>`` of qubits 2-3, where ``P_x`` is the pair sum of doublet ``x``;
2. ``CNOT(1,4)``, ``CNOT(2,5)``, ``CNOT(3,6)``;
3. a reflection ``U(x)`` on qubit 4 controlled by qubits 2-3 in state ``|x>``;
4. ``CNOT(1,2)``, ``CNOT(1,3)``, ``CNOT(1,4)``.

Tracing out qubits 4-6 leaves the GHZ-diagonal state. Branch ``x`` of step 3
uses the probability pair that owns ``x`` (the same one step 1 loads), with

    U(x) = [[sqrt(p_minus), sqrt(p_plus)], [sqrt(p_plus), -sqrt(p_minus)]] / sqrt(P_x)
         = RY(2 g) Z,      g = atan2(sqrt(p_plus), sqrt(p_minus)).

Empty branches (``P_x = 0``) get ``g = 0``, i.e. ``U(x) = Z``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import qmat
from .errors import CapacityError, InputError
from .ghz import GhzDiagonalState, density_matrix

MAX_QUBITS = 12
SINGLE_KINDS = ("H", "X", "Z", "RY", "RZ")
KINDS = SINGLE_KINDS + ("CNOT",)

_H = np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)


def ry_matrix(theta: float) -> np.ndarray:
    c, s = math.cos(theta / 2), math.sin(theta / 2)
    return np.array([[c, -s], [s, c]], dtype=complex)


def rz_matrix(theta: float) -> np.ndarray:
    return np.diag([np.exp(-0.5j * theta), np.exp(0.5j * theta)])


@dataclass(frozen=True)
class Gate:
    kind: str
    qubits: tuple[int, ...]
    angle: float | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InputError(f"unsupported gate kind {self.kind!r}")
        qs = tuple(int(q) for q in self.qubits)
        object.__setattr__(self, "qubits", qs)
        want = 2 if self.kind == "CNOT" else 1
        if len(qs) != want:
            raise InputError(f"{self.kind} acts on {want} qubit(s), got {qs}")
        if any(q < 1 for q in qs):
            raise InputError(f"qubit indices are 1-based, got {qs}")
        if self.kind == "CNOT" and qs[0] == qs[1]:
            raise InputError("CNOT control and target must differ")
        if self.kind in ("RY", "RZ"):
            if self.angle is None:
                raise InputError(f"{self.kind} needs an angle")
            object.__setattr__(self, "angle", float(self.angle))
        elif self.angle is not None:
            raise InputError(f"{self.kind} takes no angle")

    def matrix(self) -> np.ndarray:
        """Single-qubit matrix, or the 4x4 CNOT with control as the high bit."""
        if self.kind == "H":
            return _H
        if self.kind == "X":
            return qmat.PAULI["X"]
        if self.kind == "Z":
            return qmat.PAULI["Z"]
        if self.kind == "RY":
            return ry_matrix(self.angle)
        if self.kind == "RZ":
            return rz_matrix(self.angle)
        return np.array(
            [[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex
        )

    def to_json(self) -> dict:
        d = {"kind": self.kind, "q": list(self.qubits)}
        if self.angle is not None:
            d["angle"] = self.angle
        return d

    @classmethod
    def from_json(cls, d: Mapping) -> "Gate":
        return cls(d["kind"], tuple(d["q"]), d.get("angle"))


def H(q: int) -> Gate:
    return Gate("H", (q,))


def X(q: int) -> Gate:
    return Gate("X", (q,))


def Z(q: int) -> Gate:
    return Gate("Z", (q,))


def RY(q: int, theta: float) -> Gate:
    return Gate("RY", (q,), theta)


def RZ(q: int, theta: float) -> Gate:
    return Gate("RZ", (q,), theta)


def CNOT(control: int, target: int) -> Gate:
    return Gate("CNOT", (control, target))


@dataclass
class Circuit:
    num_qubits: int
    gates: list[Gate] = field(default_factory=list)

    def __post_init__(self):
        if self.num_qubits < 1:
            raise InputError("a circuit needs at least one qubit")
        self.gates = list(self.gates)
        for g in self.gates:
            self._check(g)

    def _check(self, g: Gate):
        if max(g.qubits) > self.num_qubits:
            raise InputError(f"gate {g} exceeds circuit width {self.num_qubits}")

    def append(self, g: Gate) -> "Circuit":
        self._check(g)
        self.gates.append(g)
        return self

    def extend(self, gates: Iterable[Gate]) -> "Circuit":
        for g in gates:
            self.append(g)
        return self

    def count(self, kind: str) -> int:
        return sum(g.kind == kind for g in self.gates)

    def __len__(self):
        return len(self.gates)

    def to_json(self) -> dict:
        return {"n": self.num_qubits, "gates": [g.to_json() for g in self.gates]}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2)

    @classmethod
    def from_json(cls, data: Mapping | str) -> "Circuit":
        if isinstance(data, str):
            data = json.loads(data)
        return cls(int(data["n"]), [Gate.from_json(g) for g in data["gates"]])


# --- simulation -------------------------------------------------------------

def apply_single(state: np.ndarray, m: np.ndarray, q: int) -> np.ndarray:
    """Apply a 2x2 matrix to axis ``q`` (0-based) of a ``(..., 2, 2, ...)`` tensor.

    Leading batch axes are allowed: the qubit axes are the last ``n``.
    """
    return np.moveaxis(np.tensordot(m, state, axes=([1], [q])), 0, q)


def apply_cnot(state: np.ndarray, c: int, t: int) -> np.ndarray:
    out = state.copy()
    idx1 = [slice(None)] * state.ndim
    idx1[c] = 1
    sub = out[tuple(idx1)]
    # after fixing the control axis, the target axis shifts down if it came later
    t_sub = t - 1 if t > c else t
    out[tuple(idx1)] = np.flip(sub, axis=t_sub)
    return out


def apply_gate(state: np.ndarray, gate: Gate, offset: int = 0) -> np.ndarray:
    """Apply ``gate`` to a tensor whose qubit ``q`` lives on axis ``offset + q - 1``."""
    if gate.kind == "CNOT":
        c, t = gate.qubits
        return apply_cnot(state, offset + c - 1, offset + t - 1)
    return apply_single(state, gate.matrix(), offset + gate.qubits[0] - 1)


def simulate_statevector(c: Circuit, initial: np.ndarray | None = None) -> np.ndarray:
    """Exact amplitudes after running ``c`` on ``|0...0>`` (or ``initial``)."""
    n = c.num_qubits
    if n > MAX_QUBITS:
        raise CapacityError(f"{n} qubits exceeds the simulator limit of {MAX_QUBITS}")
    if initial is None:
        state = np.zeros(2**n, dtype=complex)
        state[0] = 1.0
    else:
        state = np.asarray(initial, dtype=complex).copy()
        if state.shape != (2**n,):
            raise InputError(f"initial state must have {2**n} amplitudes")
    state = state.reshape([2] * n)
    for g in c.gates:
        state = apply_gate(state, g)
    return state.reshape(-1)


def circuit_unitary(c: Circuit) -> np.ndarray:
    """Dense unitary; column ``b`` is the image of basis state ``b``."""
    n = c.num_qubits
    if n > MAX_QUBITS:
        raise CapacityError(f"{n} qubits exceeds the simulator limit of {MAX_QUBITS}")
    dim = 2**n
    # batch axis first, qubit axes after it
    state = np.eye(dim, dtype=complex).reshape([dim] + [2] * n)
    for g in c.gates:
        state = apply_gate(state, g, offset=1)
    return state.reshape(dim, dim).T


# --- synthesis ----------------------------------------------------------------

def _safe_sqrt(v: float) -> float:
    if v < -1e-12:
        raise InputError(f"negative weight {v}")
    return math.sqrt(max(v, 0.0))


def _split_angle(first: float, second: float) -> float:
    """RY angle taking |0> to ``sqrt(first)|0> + sqrt(second)|1>`` (normalized)."""
    a, b = _safe_sqrt(first), _safe_sqrt(second)
    if a == 0 and b == 0:
        return 0.0
    return 2.0 * math.atan2(b, a)


def ucry_one_control(control: int, target: int, angles: Sequence[float]) -> list[Gate]:
    """Uniformly controlled RY with one control: ``angles[c]`` for control value ``c``."""
    a0, a1 = angles
    return [
        RY(target, (a0 + a1) / 2),
        CNOT(control, target),
        RY(target, (a0 - a1) / 2),
        CNOT(control, target),
    ]


# CNOT controls along the two-bit Gray code, as indices into (high, low) control.
_GRAY_CONTROLS = (1, 0, 1, 0)


def _gray_parities() -> np.ndarray:
    """``M[x, k]`` = +/-1: sign with which rotation ``k`` acts on branch ``x``."""
    m = np.empty((4, 4))
    for x in range(4):
        bits = ((x >> 1) & 1, x & 1)
        parity = 0
        for k in range(4):
            m[x, k] = -1.0 if parity else 1.0
            parity ^= bits[_GRAY_CONTROLS[k]]
    return m


_GRAY_M = _gray_parities()


def ucry_two_controls(controls: tuple[int, int], target: int, angles: Sequence[float]) -> list[Gate]:
    """Gray-code multiplexed RY: 4 RY and 4 CNOT.

    ``angles[x]`` is applied when the controls read ``x`` with ``controls[0]`` as
    the high bit. Every RY sits on the target, so each CNOT conjugation flips
    the sign of the later rotations on the branches whose control bit is set.
    """
    phis = np.linalg.solve(_GRAY_M, np.asarray(angles, dtype=float))
    gates = []
    for k in range(4):
        gates.append(RY(target, float(phis[k])))
        gates.append(CNOT(controls[_GRAY_CONTROLS[k]], target))
    return gates


def reflection(p_plus: float, p_minus: float) -> np.ndarray:
    """Target branch unitary ``U(x)`` for a pair with weights ``(p_plus, p_minus)``."""
    g = branch_angle(p_plus, p_minus)
    return ry_matrix(2 * g) @ qmat.PAULI["Z"]


def branch_angle(p_plus: float, p_minus: float) -> float:
    return math.atan2(_safe_sqrt(p_plus), _safe_sqrt(p_minus))


def branch_unitaries(state: GhzDiagonalState) -> list[np.ndarray]:
    return [reflection(*state.pair(x)) for x in range(4)]


def step1_circuit(state: GhzDiagonalState) -> Circuit:
    P = state.pair_sums()
    low0 = _split_angle(P[0], P[1])
    low1 = _split_angle(P[2], P[3])
    c = Circuit(3)
    c.append(H(1))
    c.append(RY(2, _split_angle(P[0] + P[1], P[2] + P[3])))
    c.extend(ucry_one_control(2, 3, (low0, low1)))
    return c


def multiplexed_u_circuit(state: GhzDiagonalState, num_qubits: int = 6) -> Circuit:
    """Step 3: ``sum_x |x><x|_(2,3) (x) U(x)_4``.

    ``U(x) = RY(2 g_x) Z = Z RY(-2 g_x)``, so the multiplexor carries the
    angles ``-2 g_x`` and a single ``Z`` follows it.
    """
    angles = [-2.0 * branch_angle(*state.pair(x)) for x in range(4)]
    c = Circuit(num_qubits)
    c.extend(ucry_two_controls((2, 3), 4, angles))
    c.append(Z(4))
    return c


def purification_circuit(state: GhzDiagonalState) -> Circuit:
    c = Circuit(6)
    c.extend(step1_circuit(state).gates)
    c.extend([CNOT(1, 4), CNOT(2, 5), CNOT(3, 6)])
    c.extend(multiplexed_u_circuit(state).gates)
    c.extend([CNOT(1, 2), CNOT(1, 3), CNOT(1, 4)])
    return c


def prepared_density(state: GhzDiagonalState) -> np.ndarray:
    psi = simulate_statevector(purification_circuit(state))
    return qmat.partial_trace(psi, (1, 2, 3))


def verify_preparation(state: GhzDiagonalState) -> float:
    """Trace distance between the circuit's reduced state and the target."""
    return qmat.trace_distance(prepared_density(state), density_matrix(state))
