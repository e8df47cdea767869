"""OpenQASM 2.0 emission and a reader for exactly the emitted subset."""
from __future__ import annotations

import re

from .circuits import Circuit, Gate
from .errors import InputError

_NAMES = {"H": "h", "X": "x", "Z": "z", "RY": "ry", "RZ": "rz", "CNOT": "cx"}
_KINDS = {v: k for k, v in _NAMES.items()}


def emit_qasm(c: Circuit) -> str:
    lines = [
        "OPENQASM 2.0;",
        'include "qelib1.inc";',
        "// logical qubit i is q[i-1]; qubit 1 is the most significant bit",
        f"qreg q[{c.num_qubits}];",
    ]
    for g in c.gates:
        args = ",".join(f"q[{q - 1}]" for q in g.qubits)
        name = _NAMES[g.kind]
        if g.angle is not None:
            lines.append(f"{name}({g.angle:.17g}) {args};")
        else:
            lines.append(f"{name} {args};")
    return "\n".join(lines) + "\n"


_QREG = re.compile(r"^qreg\s+q\[(\d+)\];$")
_GATE = re.compile(r"^([a-z]+)(?:\(([^)]*)\))?\s+(q\[\d+\](?:\s*,\s*q\[\d+\])*);$")
_QARG = re.compile(r"q\[(\d+)\]")


def parse_qasm(text: str) -> Circuit:
    circuit = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("//", 1)[0].strip()
        if not line or line.startswith("OPENQASM") or line.startswith("include"):
            continue
        m = _QREG.match(line)
        if m:
            if circuit is not None:
                raise InputError(f"line {lineno}: only one qreg is supported")
            circuit = Circuit(int(m.group(1)))
            continue
        m = _GATE.match(line)
        if not m or m.group(1) not in _KINDS:
            raise InputError(f"line {lineno}: unsupported statement {line!r}")
        if circuit is None:
            raise InputError(f"line {lineno}: gate before qreg")
        kind = _KINDS[m.group(1)]
        qubits = tuple(int(q) + 1 for q in _QARG.findall(m.group(3)))
        angle = float(m.group(2)) if m.group(2) is not None else None
        circuit.append(Gate(kind, qubits, angle))
    if circuit is None:
        raise InputError("no qreg declaration found")
    return circuit
