import math

import pytest

import oracles
from bewit import circuits as C
from bewit import ghz
from bewit.errors import InputError
from bewit.qasm import emit_qasm, parse_qasm


def test_emit_header_and_names():
    c = C.Circuit(3, [C.H(1), C.RY(2, 0.5), C.CNOT(1, 3), C.RZ(3, -1.0), C.X(2), C.Z(1)])
    text = emit_qasm(c)
    lines = text.strip().splitlines()
    assert lines[0] == "OPENQASM 2.0;"
    assert lines[1] == 'include "qelib1.inc";'
    assert "qreg q[3];" in lines
    body = [ln for ln in lines if not ln.startswith(("OPENQASM", "include", "//", "qreg"))]
    assert body == ["h q[0];", "ry(0.5) q[1];", "cx q[0],q[2];", "rz(-1) q[2];", "x q[1];", "z q[0];"]


def test_round_trip_exact_angles():
    c = C.purification_circuit(ghz.category_state(3))
    back = parse_qasm(emit_qasm(c))
    assert back.num_qubits == 6
    assert back.gates == c.gates


def test_round_trip_unitary(rng):
    c = C.Circuit(3, [C.RY(1, math.pi / 3), C.CNOT(1, 2), C.RZ(2, 1.1), C.H(3)])
    back = parse_qasm(emit_qasm(c))
    assert oracles.equal_up_to_phase(C.circuit_unitary(back), C.circuit_unitary(c), 1e-12)


@pytest.mark.parametrize("text", [
    "",
    "OPENQASM 2.0;\nh q[0];\n",
    "OPENQASM 2.0;\nqreg q[2];\nt q[0];\n",
    "OPENQASM 2.0;\nqreg q[2];\nqreg r[2];\n",
    "OPENQASM 2.0;\nqreg q[2];\nmeasure q[0] -> c[0];\n",
])
def test_parse_rejects(text):
    with pytest.raises(InputError):
        parse_qasm(text)


def test_parse_ignores_comments():
    c = parse_qasm("OPENQASM 2.0;\n// hello\nqreg q[2];\nh q[1]; // trailing\n")
    assert c.gates == [C.H(2)]
