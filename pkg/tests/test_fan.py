import json

import numpy as np
import pytest

from lwrarz import Kind, Wave, WaveFan, l1_distance, solve_lwr, solve_r1, solve_r2, validate_fan
from lwrarz.fan import concat
from lwrarz.verification import check_weak_solution


def constant(m, rho, v):
    u = m.state(rho, v)
    return WaveFan(m, u, ())


@pytest.mark.parametrize("xi", [-5.0, 0.0, 3.0])
def test_constant_fan(m1, xi):
    fan = constant(m1, 0.0, 2.0)
    assert fan(xi).as_list() == [0.0, 2.0]
    a, b = fan.traces()
    assert a == b
    assert fan.tv_invariants() == (0.0, 0.0)
    assert validate_fan(fan) == []


def test_shock_is_right_continuous(m1):
    fan = solve_lwr(m1, m1.free(0.5), m1.free(1.5))
    (w,) = fan.waves
    assert w.kind is Kind.SHOCK and w.speed == pytest.approx(4 / 3, abs=1e-12)
    assert fan(1.3).rho == 0.5
    assert fan(1.4).rho == 1.5
    assert fan(w.speed).rho == 1.5


def test_rarefaction_inversion(m1):
    fan = solve_lwr(m1, m1.free(1.5), m1.free(0.5))
    u = fan(4 / 3)
    assert u.as_list() == pytest.approx([1.0, 5 / 3], abs=1e-12)


def test_sample_matches_evaluate(m1):
    fan = solve_r1(m1, m1.state(2.2, 0.8), m1.free(0.5))
    xi = np.linspace(-10, 3, 301)
    rho, v, wid = fan.sample(xi)
    for x, r, s in zip(xi, rho, v):
        assert fan(x).as_list() == pytest.approx([r, s], abs=1e-12)
    assert wid[0] == -1 and wid[-1] == len(fan) - 1


def test_traces_with_zero_speed_jump(m1):
    uh, uc = m1.congested(3.0, 0.5), m1.free(1.0)
    fan = WaveFan(m1, uh, (Wave(Kind.CONSTRAINT, uh, uc, 0.0, momentum=False),))
    assert fan.traces() == (uh, uc)


def test_traces_positive_speeds(m1):
    ul = m1.free(1.0)
    fan = solve_r1(m1, ul, m1.state(2.0, 1.0))
    assert all(s > 0 for s in fan.breakpoints())
    assert fan.traces() == (ul, ul)


def test_traces_behind_negative_rarefaction(m1):
    ul = m1.state(2.2, 0.8)
    ur = m1.congested(ul.w, 1.0)
    fan = solve_r1(m1, ul, ur)
    (w,) = fan.waves
    assert w.kind is Kind.RAREFACTION and w.hi < 0
    assert fan.traces() == (ur, ur)


def test_tv_of_contact(m1):
    fan = solve_r1(m1, m1.congested(3.0, 0.5), m1.congested(3.2, 0.5))
    assert fan.kinds() == [Kind.CONTACT]
    assert fan.tv_invariants() == pytest.approx((0.0, 0.2), abs=1e-12)


def test_l1_distance_closed_form(m1):
    a = WaveFan(m1, m1.state(0.0, 2.0), ())
    b = WaveFan(m1, m1.state(2.0, 4 / 3), ())
    assert l1_distance(a, a) == 0.0
    assert l1_distance(a, b) == pytest.approx(2 * (2 + 2 / 3), abs=1e-12)


def test_validate_detects_speed_order(m1):
    u0, u1, u2 = m1.free(0.2), m1.free(0.8), m1.free(1.4)
    fan = WaveFan(
        m1,
        u0,
        (Wave(Kind.SHOCK, u0, u1, 1.0, "free", False), Wave(Kind.SHOCK, u1, u2, 0.5, "free", False)),
    )
    checks = {v.check for v in validate_fan(fan)}
    assert "SpeedOrder" in checks


def test_r2_jump_skips_momentum(m1):
    fan = solve_r2(m1, m1.free(1.0), m1.state(2.2, 0.7))
    (w,) = fan.waves
    assert not w.momentum
    assert validate_fan(fan) == []


def test_corrupted_shock_speed(m1):
    fan = solve_lwr(m1, m1.free(0.5), m1.free(1.5))
    (w,) = fan.waves
    bad = WaveFan(m1, fan.left, (Wave(w.kind, w.left, w.right, w.speed + 0.01, w.family, False),))
    rep = check_weak_solution(bad)
    assert not rep.passed
    assert rep.residual == pytest.approx(0.01 * 1.0, rel=1e-9)


def test_json_round_trip(m1):
    fan = solve_r1(m1, m1.state(2.2, 0.8), m1.free(0.5))
    data = json.loads(json.dumps(fan.to_dict()))
    back = WaveFan.from_dict(m1, data)
    assert back.to_dict() == fan.to_dict()


def test_csv_header_and_rows(m1):
    fan = solve_r1(m1, m1.free(1.0), m1.state(2.0, 1.0))
    text = fan.profile_csv(np.linspace(-1, 1, 11))
    lines = text.strip().split("\n")
    assert lines[0] == "xi,rho,v,q,w,phase,wave_id"
    assert len(lines) == 12


def test_concat(m1):
    a = solve_lwr(m1, m1.free(0.5), m1.free(1.0))
    b = solve_lwr(m1, m1.free(1.0), m1.free(1.5))
    fan = concat(m1, a, b)
    assert len(fan) == 2 and fan.right.rho == 1.5
