"""Linear and nonlinear entanglement witnesses for GHZ-diagonal states.

A witness in the family is

    W(theta) = III + s O_i + cos(theta) (O_j + s_jk O_k) + sin(theta) (O_l + s_lm O_m)

with ``i`` in 1..3 and ``(j, k, l, m)`` a permutation of 4..7. Its value on a
GHZ-diagonal state depends only on the correlation vector.

Evaluation modes:

``fixed``
    The linear witness at a given angle.
``envelope``
    Exact minimum over theta, ``1 + s r_i - sqrt(A**2 + B**2)``. This is the
    sound nonlinear witness.
``paper-numbers``
    The nonlinear angle with numerator factor ``1 - s r_i``. The value collapses
    to ``2 s r_i``, which is the set of reported nonlinear figures. It is NOT a
    valid witness: on ``|000>`` with ``i=1, s=-1`` it returns -2.
``as-printed``
    The same angle with numerator factor ``1 + s r_i``. It is identically zero.
"""
from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import qmat
from .errors import DegenerateWitnessError, InputError
from .ghz import RVector

OBSERVABLES = ("IZZ", "ZIZ", "ZZI", "XXX", "XYY", "YXY", "YYX")
DEGENERATE_TOL = 1e-12
TIE_TOL = 1e-12

MODES = ("fixed", "envelope", "paper-numbers", "as-printed")


def observable(idx: int) -> str:
    if not isinstance(idx, (int, np.integer)) or not 1 <= idx <= 7:
        raise InputError(f"observable index must be in 1..7, got {idx!r}")
    return OBSERVABLES[idx - 1]


def _sign_char(s: int) -> str:
    return "+" if s > 0 else "-"


_SPEC_RE = re.compile(
    r"^\s*i\s*=\s*([123])\s*,\s*s\s*=\s*([+-])\s*,\s*jk\s*=\s*([4-7])([+-])([4-7])"
    r"\s*,\s*lm\s*=\s*([4-7])([+-])([4-7])\s*$"
)


@dataclass(frozen=True, order=True)
class WitnessSpec:
    i: int
    s: int
    j: int
    k: int
    s_jk: int
    l: int
    m: int
    s_lm: int

    def __post_init__(self):
        if self.i not in (1, 2, 3):
            raise InputError(f"i must be 1, 2 or 3, got {self.i}")
        for name in ("s", "s_jk", "s_lm"):
            if getattr(self, name) not in (1, -1):
                raise InputError(f"{name} must be +1 or -1, got {getattr(self, name)}")
        if sorted((self.j, self.k, self.l, self.m)) != [4, 5, 6, 7]:
            raise InputError(
                f"(j, k, l, m) must be a permutation of (4, 5, 6, 7), got "
                f"{(self.j, self.k, self.l, self.m)}"
            )

    def encode(self) -> str:
        return (
            f"i={self.i},s={_sign_char(self.s)},"
            f"jk={self.j}{_sign_char(self.s_jk)}{self.k},"
            f"lm={self.l}{_sign_char(self.s_lm)}{self.m}"
        )

    __str__ = encode

    @classmethod
    def parse(cls, text: str) -> "WitnessSpec":
        """Inverse of :meth:`encode`, e.g. ``"i=1,s=-,jk=5-4,lm=7-6"``."""
        mt = _SPEC_RE.match(text)
        if not mt:
            raise InputError(f"cannot parse witness spec {text!r}")
        i, s, j, sjk, k, l, slm, m = mt.groups()
        sign = {"+": 1, "-": -1}
        return cls(int(i), sign[s], int(j), int(k), sign[sjk], int(l), int(m), sign[slm])

    def observables_needed(self) -> tuple[int, ...]:
        return (self.i, self.j, self.k, self.l, self.m)

    def pair_sums(self, r: RVector) -> tuple[float, float]:
        """``(A, B) = (r_j + s_jk r_k, r_l + s_lm r_m)`` in observable labels."""
        o = r.observable
        return o(self.j) + self.s_jk * o(self.k), o(self.l) + self.s_lm * o(self.m)


@dataclass(frozen=True)
class WitnessValue:
    value: float
    theta_used: float | str

    def to_json(self) -> dict:
        return {"value": self.value, "theta_used": self.theta_used}


def witness_matrix(spec: WitnessSpec, theta: float) -> np.ndarray:
    P = qmat.pauli_string_matrix
    return (
        np.eye(8, dtype=complex)
        + spec.s * P(observable(spec.i))
        + math.cos(theta) * (P(observable(spec.j)) + spec.s_jk * P(observable(spec.k)))
        + math.sin(theta) * (P(observable(spec.l)) + spec.s_lm * P(observable(spec.m)))
    )


def linear_value(r: RVector, spec: WitnessSpec, theta: float) -> WitnessValue:
    a, b = spec.pair_sums(r)
    value = 1.0 + spec.s * r.observable(spec.i) + math.cos(theta) * a + math.sin(theta) * b
    return WitnessValue(value, float(theta))


def envelope_value(r: RVector, spec: WitnessSpec) -> WitnessValue:
    a, b = spec.pair_sums(r)
    norm = math.hypot(a, b)
    theta = math.atan2(-b, -a) if norm > 0 else 0.0
    return WitnessValue(1.0 + spec.s * r.observable(spec.i) - norm, theta)


def paper_nonlinear_value(
    r: RVector, spec: WitnessSpec, variant: str = "paper-numbers"
) -> WitnessValue:
    """Linear witness evaluated at the modified nonlinear angle.

    ``(cos, sin) = (-A f / D, -B f / D)`` with ``D = A**2 + B**2``; ``f`` is
    ``1 - s r_i`` for ``paper-numbers`` and ``1 + s r_i`` for ``as-printed``.
    The pair need not lie on the unit circle.
    """
    if variant not in ("paper-numbers", "as-printed"):
        raise InputError(f"unknown nonlinear variant {variant!r}")
    a, b = spec.pair_sums(r)
    d = a * a + b * b
    if d <= DEGENERATE_TOL:
        raise DegenerateWitnessError(f"A^2 + B^2 = {d:.3g} is degenerate for {spec}")
    ri = r.observable(spec.i)
    f = 1.0 - spec.s * ri if variant == "paper-numbers" else 1.0 + spec.s * ri
    cos_t, sin_t = -a * f / d, -b * f / d
    value = 1.0 + spec.s * ri + cos_t * a + sin_t * b
    tag = "paper-nl-paper-numbers" if variant == "paper-numbers" else "paper-nl-as-printed"
    return WitnessValue(value, tag)


def evaluate(r: RVector, spec: WitnessSpec, mode: str, theta: float | None = None) -> WitnessValue:
    """Dispatch on one of :data:`MODES`."""
    if mode == "fixed":
        if theta is None:
            raise InputError("fixed mode needs an angle")
        return linear_value(r, spec, theta)
    if mode == "envelope":
        return envelope_value(r, spec)
    if mode in ("paper-numbers", "as-printed"):
        return paper_nonlinear_value(r, spec, mode)
    raise InputError(f"unknown witness mode {mode!r}; expected one of {MODES}")


def all_specs(canonical: bool = True) -> Iterator[WitnessSpec]:
    """Every spec in the family.

    With ``canonical=True`` only one representative per envelope-equivalence
    class is produced (``j < k``, ``l < m``, ``j < l``): swapping the members
    of a pair or swapping the pairs leaves ``sqrt(A**2 + B**2)`` unchanged.
    """
    for i, s in itertools.product((1, 2, 3), (1, -1)):
        for j, k, l, m in itertools.permutations((4, 5, 6, 7)):
            if canonical and not (j < k and l < m and j < l):
                continue
            for s_jk, s_lm in itertools.product((1, -1), repeat=2):
                yield WitnessSpec(i, s, j, k, s_jk, l, m, s_lm)


@dataclass(frozen=True)
class SearchResult:
    spec: WitnessSpec
    mode: str
    value: WitnessValue


def optimal_search(r: RVector) -> SearchResult:
    """Most negative envelope value over the witness family.

    Ties within ``TIE_TOL`` go to the lexicographically smallest encoding.
    """
    best = None
    for spec in all_specs(canonical=True):
        wv = envelope_value(r, spec)
        key = (wv.value, spec.encode())
        if best is None or wv.value < best[0] - TIE_TOL or (
            abs(wv.value - best[0]) <= TIE_TOL and key[1] < best[1]
        ):
            best = (wv.value, spec.encode(), spec, wv)
    return SearchResult(best[2], "envelope", best[3])
