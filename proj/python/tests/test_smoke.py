import math

import pytest

import semitoric as st


def closed_form_height(R1, R2, t):
    rD = math.sqrt(-R2**2 * (1 - 2 * t) ** 2 + 2 * R1 * R2 * t - R1**2 * t**2)
    return (
        2 * min(R1, R2)
        + rD / (math.pi * t)
        - (2 * R2 / math.pi) * math.atan2(rD, R2 - t * R1)
        - (2 * R1 / math.pi) * math.atan2(rD, R2 + t * R1 - 2 * R2 * t)
    )


def test_transition_times_formula():
    lo, hi = st.cam_transition_times(1.0, 2.0)
    assert lo == pytest.approx(2 / (5 + 2 * math.sqrt(2)))
    assert hi == pytest.approx(2 / (5 - 2 * math.sqrt(2)))


def test_classify_cam_pole_kinds():
    kinds = sorted(r["kind"] for r in st.classify(st.System("cam", R1=1, R2=2, t=0.5)))
    assert kinds.count("focus-focus") == 1
    assert len(kinds) == 4


def test_invariants_document():
    doc = st.invariants(st.System("cam", R1=1, R2=2, t=0.5))
    assert doc["n_ff"] == 1
    assert doc["height"][0]["height"] == pytest.approx(closed_form_height(1, 2, 0.5), rel=1e-6)
    assert 0 <= doc["taylor"][0]["s10"] < 2 * math.pi
    sheared = st.invariants(st.System("cam", R1=1, R2=2, t=0.5), shear=1)
    assert sheared["twisting_index"][0] == doc["twisting_index"][0] + 1


def test_actions_agree():
    s = st.System("cso")
    lo, hi = s.energy_range(0.5)
    h = lo + 0.3 * (hi - lo)
    assert st.action(s, 0.5, h, "area") == pytest.approx(st.action(s, 0.5, h, "return_time"), abs=1e-8)


def test_transition_scan_and_region_map():
    flips = st.transition_scan("cam", "t", 0.0, 1.0, 32, R1=1.0, R2=1.5)
    assert flips == pytest.approx(list(st.cam_transition_times(1.0, 1.5)), abs=1e-6)
    m = st.region_map(1.0, 2.0, grid=8, threads=2)
    assert len(m["n_ff"]) == 8 and m["n_ff"][0][0] == 0


def test_hirzebruch_polygon_has_four_vertices():
    assert len(st.hirzebruch_polygon(1, 1.0, 2.0)) == 4


def test_errors():
    with pytest.raises(st.ConfigError):
        st.System("cam", rho1=1.0)
    with pytest.raises(st.Error):
        st.System("cam", R1=-1.0)
    with pytest.raises(st.NearDegenerateError):
        lo, _ = st.cam_transition_times(1.0, 2.0)
        st.invariants(st.System("cam", R1=1, R2=2, t=lo))
