import json
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

import oracles
from bewit import ghz, qmat
from bewit.errors import InputError, SamplingExhaustedError, StructureError
from bewit.ghz import GhzDiagonalState

KAY2_P = (1 / 3, 1 / 6, 1 / 6, 0, 0, 1 / 6, 1 / 6, 0)

weights = st.lists(st.floats(0, 1, allow_nan=False), min_size=8, max_size=8).filter(lambda w: sum(w) > 1e-3)


@st.composite
def states(draw):
    return GhzDiagonalState.normalized(draw(weights))


def test_basis_vector_plus():
    v = ghz.ghz_basis_vector("00", 1)
    expected = np.zeros(8)
    expected[0] = expected[7] = 1 / math.sqrt(2)
    assert qmat.allclose(v, expected, atol=1e-15)


def test_basis_orthonormal_and_complete():
    vecs = [ghz.ghz_basis_vector(x, s) for x in range(4) for s in (1, -1)]
    gram = np.array([[np.vdot(a, b) for b in vecs] for a in vecs])
    assert qmat.allclose(gram, np.eye(8), atol=1e-12)
    total = sum(np.outer(v, v.conj()) for v in vecs)
    assert qmat.allclose(total, np.eye(8), atol=1e-12)


def test_basis_vector_rejects_bad_label():
    with pytest.raises(InputError):
        ghz.ghz_basis_vector("2", 1)
    with pytest.raises(InputError):
        ghz.ghz_basis_vector(0, 0)


def test_density_pure_plus():
    rho = ghz.density_matrix(GhzDiagonalState((1, 0, 0, 0, 0, 0, 0, 0)))
    v = ghz.ghz_basis_vector(0, 1)
    assert qmat.allclose(rho, np.outer(v, v.conj()), atol=1e-15)


def test_density_uniform():
    rho = ghz.density_matrix(GhzDiagonalState((1 / 8,) * 8))
    assert qmat.allclose(rho, np.eye(8) / 8, atol=1e-15)


def test_density_kay2():
    assert qmat.allclose(ghz.density_matrix(GhzDiagonalState(KAY2_P)), ghz.kay(2), atol=1e-15)


@given(states())
def test_density_matches_projector_sum(s):
    rho = ghz.density_matrix(s)
    assert qmat.allclose(rho, oracles.ghz_mixture(s.p), atol=1e-12)
    for x in range(4):
        pa, pb = s.pair(x)
        assert abs(rho[x, x] - (pa + pb) / 2) < 1e-15
        assert abs(rho[x, 7 - x] - (pa - pb) / 2) < 1e-15


def test_state_validation():
    with pytest.raises(InputError):
        GhzDiagonalState((0.5, 0.5, 0, 0, 0, 0, 0))
    with pytest.raises(InputError):
        GhzDiagonalState((0.5, 0.6, 0, 0, 0, 0, 0, -0.1))
    with pytest.raises(InputError):
        GhzDiagonalState((0.5, 0.4, 0, 0, 0, 0, 0, 0))


def test_probs_from_density_examples():
    s = ghz.probs_from_density(np.eye(8) / 8)
    assert qmat.allclose(s.p, np.full(8, 1 / 8), atol=1e-15)
    assert qmat.allclose(ghz.probs_from_density(ghz.kay(2)).p, KAY2_P, atol=1e-15)


def test_probs_round_trip_1000(rng):
    for _ in range(1000):
        s = ghz.random_state(rng)
        back = ghz.probs_from_density(ghz.density_matrix(s))
        assert qmat.allclose(back.p, s.p, atol=1e-12)
        assert qmat.allclose(ghz.density_matrix(back), ghz.density_matrix(s), atol=1e-12)


def test_probs_from_density_rejects():
    with pytest.raises(StructureError):
        ghz.probs_from_density(ghz.kye(2, 3))
    bad = np.zeros((8, 8))
    bad[0, 0] = bad[7, 7] = 0.25
    bad[0, 7] = bad[7, 0] = 0.4  # exceeds the diagonal: negative weight
    bad[1, 1] = bad[6, 6] = 0.25
    with pytest.raises(StructureError):
        ghz.probs_from_density(bad)


def test_is_ghz_diagonal():
    assert ghz.is_ghz_diagonal(ghz.kay(2))
    e = np.zeros((8, 8))
    e[2, 2] = 1
    assert not ghz.is_ghz_diagonal(e)
    assert not ghz.is_ghz_diagonal(ghz.kye(2, 3))
    assert ghz.is_ghz_diagonal(ghz.kye(2, 2))


def test_kay_matrix():
    m = ghz.kay(2)
    assert qmat.allclose(np.diag(m), np.array([6, 2, 2, 2, 2, 2, 2, 6]) / 24, atol=1e-15)
    assert abs(np.trace(m) - 1) < 1e-15
    assert abs(ghz.r_vector(m)["IZZ"] - 1 / 3) < 1e-12
    assert abs(oracles.expectation(m, "IZZ") - 1 / 3) < 1e-12


def test_kye_matrix():
    m = ghz.kye(2, 2)
    assert qmat.allclose(np.diag(m), np.array([1, 1, 1, 2, 2, 1, 1, 1]) / 10, atol=1e-15)
    assert abs(ghz.r_vector(m)["IZZ"] - 0.2) < 1e-12
    assert abs(oracles.expectation(m, "IZZ") - 0.2) < 1e-12
    # validity condition b c >= 1 holds for b = c = 2 and the matrix is a state
    assert 2 * 2 >= 1
    assert qmat.hermitian_eigenvalues(m)[0] >= -1e-12
    with pytest.raises(InputError):
        ghz.kye(0, 1)


def test_r_vector_examples():
    r0 = ghz.r_vector(np.eye(8) / 8)
    assert all(abs(v) < 1e-15 for v in r0.values)

    r = ghz.r_vector(ghz.kay(2))
    third = 1 / 3
    for key, v in {"ZZI": third, "ZIZ": third, "IZZ": third, "XXX": third, "YXY": third,
                   "XYY": -third, "YYX": -third}.items():
        assert abs(r[key] - v) < 1e-12
        assert abs(oracles.expectation(ghz.kay(2), key) - v) < 1e-12

    r1 = ghz.r_vector(ghz.density_matrix(ghz.category_state(1)))
    for key in ("ZZI", "ZIZ", "IZZ"):
        assert abs(r1[key] - 0.4) < 1e-12
    for key in ("XXX", "XYY", "YXY", "YYX"):
        assert abs(r1[key] - 0.3) < 1e-12


def test_r_vector_labelings():
    r = ghz.r_vector(ghz.density_matrix(ghz.category_state(2)))
    assert r.correlation(1) == r["ZZI"] == r.observable(3)
    assert r.correlation(3) == r["IZZ"] == r.observable(1)
    assert r.correlation(2) == r.observable(2)
    for n in range(4, 8):
        assert r.correlation(n) == r.observable(n)
    with pytest.raises(InputError):
        r.observable(0)


@given(states())
def test_reconstruction_identity(s):
    rho = ghz.density_matrix(s)
    r = ghz.r_vector(rho)
    assert all(abs(v) <= 1 + 1e-12 for v in r.values)
    assert qmat.allclose(ghz.reconstruct(r), rho, atol=1e-12)


@given(states())
def test_states_are_psd(s):
    assert qmat.hermitian_eigenvalues(ghz.density_matrix(s))[0] >= -1e-10


def test_ppt_report_examples():
    assert ghz.ppt_report(ghz.kay(2)).is_ppt
    rep = ghz.ppt_report(ghz.kay(1))
    assert not rep.is_ppt
    assert min(rep.cuts.values()) < -1e-3
    rho = ghz.density_matrix(GhzDiagonalState((1, 0, 0, 0, 0, 0, 0, 0)))
    rep = ghz.ppt_report(rho)
    assert set(rep.cuts) == {"1|23", "2|13", "3|12"}
    for v in rep.cuts.values():
        assert abs(v + 0.5) < 1e-12


@pytest.mark.parametrize("a,expected", [(2.0, True), (2.5, True), (2 * math.sqrt(2), True), (5.0, True),
                                         (0.0, False), (1.0, False), (1.9, False)])
def test_kay_ppt_boundary(a, expected):
    rho = ghz.kay(a)
    assert ghz.ppt_report(rho).is_ppt is expected
    lapack = min(oracles.min_eig_lapack(oracles.partial_transpose_loops(rho, c)) for c in (1, 2, 3))
    assert (lapack >= -1e-10) is expected


def test_ppt_report_consistent(rng):
    for _ in range(50):
        rep = ghz.ppt_report(ghz.density_matrix(ghz.random_state(rng)))
        assert rep.is_ppt == all(v >= -ghz.PPT_TOL for v in rep.cuts.values())


def test_category_states():
    s1, s2, s3 = (ghz.category_state(c) for c in (1, 2, 3))
    r1 = ghz.r_vector(ghz.density_matrix(s1))
    assert abs((1 - r1.correlation(3)) - 0.6) < 1e-12
    assert abs(r1.correlation(4) + r1.correlation(5) - 0.6) < 1e-12
    p = s2.p
    assert abs(p[2] - (p[0] + p[1])) < 1e-12 and abs(p[6] - (p[2] + p[7])) < 1e-12
    assert p[3] == 0
    p = s3.p
    assert abs(p[0] + p[2] - 0.5) < 1e-12 and abs(sum(p) - p[0] - p[2] - 0.5) < 1e-12
    for s, cat in ((s1, 1), (s2, 2), (s3, 3)):
        assert abs(ghz.family_residuals(s)[cat]) < 1e-12
        assert ghz.ppt_report(ghz.density_matrix(s)).is_ppt
    with pytest.raises(InputError):
        ghz.category_state(4)


def test_category_one_correlation_pattern():
    r = ghz.r_vector(ghz.density_matrix(ghz.category_state(1)))
    assert abs(r.correlation(1) - r.correlation(2)) < 1e-12
    assert abs(r.correlation(2) - r.correlation(3)) < 1e-12
    assert abs(r.correlation(5) - r.correlation(6)) < 1e-12
    assert abs(r.correlation(6) - r.correlation(7)) < 1e-12


@pytest.mark.parametrize("cat", [1, 2, 3])
def test_sample_category(cat):
    for seed in range(25):
        s = ghz.sample_category(cat, seed)
        assert abs(sum(s.p) - 1) < 1e-12
        assert ghz.ppt_report(ghz.density_matrix(s)).is_ppt
        assert abs(ghz.family_residuals(s)[cat]) < 1e-12
        p = s.p
        if cat == 1:
            assert p[3] == p[5] == p[7] == 0
            assert abs(p[2] - p[4]) < 1e-12 and abs(p[4] - p[6]) < 1e-12
            assert p[2] <= 0.25 + 1e-12
            assert 2 * p[0] + 4 * p[2] >= 1 - 1e-12
            assert 2 * p[1] + 4 * p[2] >= 1 - 1e-12
        elif cat == 2:
            assert p[3] == 0
            assert abs(p[2] - p[0] - p[1]) < 1e-12
            assert abs(p[6] - p[2] - p[7]) < 1e-12
        else:
            assert abs(p[0] + p[2] - 0.5) < 1e-12


def test_sample_category_deterministic():
    for cat in (1, 2, 3):
        assert ghz.sample_category(cat, 42).p == ghz.sample_category(cat, 42).p
    assert ghz.sample_category(2, 1).p != ghz.sample_category(2, 2).p


def test_sample_category_exhaustion(monkeypatch):
    monkeypatch.setattr(ghz, "_propose", lambda cat, rng: None)
    with pytest.raises(SamplingExhaustedError):
        ghz.sample_category(1, 0, max_draws=100)


def test_json_round_trips():
    s = ghz.category_state(3)
    assert GhzDiagonalState.from_json(json.dumps(s.to_json())) == s
    r = ghz.r_vector(ghz.kay(2))
    data = json.loads(json.dumps(r.to_json()))
    assert set(data) == set(ghz.R_KEYS)
    assert ghz.RVector.from_json(data) == r
    rep = ghz.ppt_report(ghz.kay(2)).to_json()
    assert set(rep) == {"cuts", "is_ppt"} and rep["is_ppt"] is True
    assert set(rep["cuts"]) == {"1|23", "2|13", "3|12"}
