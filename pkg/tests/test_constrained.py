import json
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from lwrarz import ConstraintProblem, Kind, classify, flow_max_oracle, instances, solve_r1, solve_r2
from lwrarz.constrained import (
    classify_by_traces,
    select_traces_r1c,
    select_traces_r2c,
    solve_r1c,
    solve_r2c,
)
from lwrarz.errors import NotInN, OutOfRange
from lwrarz.verification import check_constraint, check_weak_solution

from strategies import states

V = lambda rho: 2 - rho / 3


@pytest.mark.parametrize(
    "ul,ur,solver,tag",
    [
        ((0.0, 2.0), (2.0, 4 / 3), 1, "C1"),
        ((1.0, 5 / 3), (2.0, 1.0), 1, "N4_1"),
        ((1.0, 5 / 3), (2.2, 0.7), 2, "N4_2"),
    ],
)
def test_classify_examples(m1, ul, ur, solver, tag):
    cls = classify(ConstraintProblem(m1, ul, ur, 1.0, solver))
    assert str(cls) == tag
    assert classify_by_traces(ConstraintProblem(m1, ul, ur, 1.0, solver)) == cls.side


def test_problem_validation(m1):
    with pytest.raises(OutOfRange):
        ConstraintProblem(m1, (0.0, 2.0), (0.0, 2.0), 3.0)
    with pytest.raises(ValueError):
        ConstraintProblem(m1, (0.0, 2.0), (0.0, 2.0), 1.0, solver=3)


def test_t11a(m1):
    u = m1.free(1.9)
    tp = select_traces_r1c(ConstraintProblem(m1, u, u, 2.1))
    assert tp.case == "T11a"
    assert u.w == pytest.approx(3.1717, abs=1e-4)
    assert tp.u_hat.v == 1.0 and tp.u_hat.q == pytest.approx(2.0841, abs=1e-4)
    assert tp.u_check.as_list() == pytest.approx([1.34235, 1.55255], abs=1e-5)
    assert tp.u_check.q == pytest.approx(tp.u_hat.q, abs=1e-12)


def test_t11b(m1):
    u = m1.free(1.9)
    tp = select_traces_r1c(ConstraintProblem(m1, u, u, 2.0))
    assert tp.case == "T11b"
    assert tp.u_hat.v == pytest.approx(0.948, abs=1e-3)
    assert tp.u_hat.w == pytest.approx(u.w, abs=1e-12)
    assert tp.u_check.rho == pytest.approx(3 - math.sqrt(3), abs=1e-12)


def test_t21b(m1):
    tp = select_traces_r1c(ConstraintProblem(m1, (1.0, 5 / 3), (2.0, 1.0), 1.0))
    assert tp.case == "T21b"
    assert tp.u_hat.w == pytest.approx(2.625, abs=1e-12)
    assert tp.u_hat.v == pytest.approx(0.483, abs=1e-3)
    assert tp.u_check.rho == pytest.approx(3 - math.sqrt(6), abs=1e-12)
    assert tp.u_hat.q == pytest.approx(1.0, abs=1e-12)


def test_t21a(m1):
    # Q0 above p^-1(W_c - v_r) v_r: the state behind the interface is congested
    ul, ur = m1.free(1.9), m1.congested(3.0, 0.5)
    q0 = 1.1
    assert m1.flow_on_marker(m1.w_c, 0.5) <= q0 < m1.flow_on_marker(ul.w, 0.5)
    tp = select_traces_r1c(ConstraintProblem(m1, ul, ur, q0))
    assert tp.case == "T21a"
    assert tp.u_check.as_list() == pytest.approx([q0 / 0.5, 0.5], abs=1e-12)


def test_t12b_closed_form(m1):
    u = m1.free(1.6)
    tp = select_traces_r2c(ConstraintProblem(m1, u, u, 2.0, 2))
    assert tp.case == "T12b"
    assert tp.u_hat.as_list() == pytest.approx([2.0, 1.0], abs=1e-12)
    assert tp.u_check.rho == pytest.approx(3 - math.sqrt(3), abs=1e-12)


def test_t12b_matches_r1c(m1):
    u = m1.free(1.9)
    a = select_traces_r2c(ConstraintProblem(m1, u, u, 2.0, 2))
    b = select_traces_r1c(ConstraintProblem(m1, u, u, 2.0, 1))
    assert a.u_hat.as_list() == pytest.approx(b.u_hat.as_list(), abs=1e-12)


def test_t12a(m1):
    u = m1.free(1.9)
    tp = select_traces_r2c(ConstraintProblem(m1, u, u, 2.2, 2))
    assert tp.case == "T12a"
    assert tp.u_hat.as_list() == pytest.approx([math.sqrt(14 / 3), 1.0], abs=1e-12)
    assert tp.u_check.q == pytest.approx(2.1602, abs=1e-4)


def test_trace_pair_json(m1):
    tp = select_traces_r1c(ConstraintProblem(m1, (1.0, 5 / 3), (2.0, 1.0), 1.0))
    assert json.loads(tp.to_json())["case"] == "T21b"


def test_not_in_n(m1):
    with pytest.raises(NotInN):
        select_traces_r1c(ConstraintProblem(m1, (0.0, 2.0), (2.0, 4 / 3), 1.0))


def test_c_side_delegates(m1):
    p = ConstraintProblem(m1, (0.0, 2.0), (2.0, 4 / 3), 1.0)
    assert solve_r1c(p).to_dict() == solve_r1(m1, p.ul, p.ur).to_dict()
    p2 = ConstraintProblem(m1, (0.0, 2.0), (2.0, 4 / 3), 1.0, 2)
    assert solve_r2c(p2).to_dict() == solve_r2(m1, p2.ul, p2.ur).to_dict()


def test_r1c_n4_fan(m1):
    p = ConstraintProblem(m1, (1.0, 5 / 3), (2.0, 1.0), 1.0)
    fan = solve_r1c(p)
    assert fan.kinds() == [Kind.PHASE_TRANSITION, Kind.CONSTRAINT, Kind.PHASE_TRANSITION, Kind.CONTACT]
    assert fan.waves[0].speed < 0 < fan.waves[2].speed
    a, b = fan.traces()
    assert a.q == pytest.approx(1.0, abs=1e-12) and b.q == pytest.approx(1.0, abs=1e-12)
    assert check_weak_solution(fan).passed


def test_r1c_n1_fan(m1):
    u = m1.free(1.9)
    fan = solve_r1c(ConstraintProblem(m1, u, u, 2.1))
    left = [w for w in fan.waves if w.hi < 0]
    assert left[0].kind is Kind.PHASE_TRANSITION
    assert check_constraint(fan, 2.1).passed


def test_r2c_single_transition(m1):
    u = m1.free(1.6)
    fan = solve_r2c(ConstraintProblem(m1, u, u, 2.0, 2))
    first = fan.waves[0]
    assert first.kind is Kind.PHASE_TRANSITION
    assert first.right.as_list() == pytest.approx([2.0, 1.0], abs=1e-12)
    assert first.speed == pytest.approx((2 - 1.6 * V(1.6)) / 0.4, abs=1e-12)
    assert first.speed == pytest.approx(-0.8667, abs=1e-4)
    assert check_weak_solution(fan).passed


def test_r2c_special_branch(m2):
    ex = instances.example_tv2(m2)
    fan = solve_r2c(ConstraintProblem(m2, ex.ul, ex.ur, ex.q0, 2))
    uf = m2.u_f(ex.ul.w)
    jumps = [w for w in fan.waves if w.left.close_to(uf) and w.kind is Kind.PHASE_TRANSITION]
    assert len(jumps) == 1 and not jumps[0].momentum
    assert check_weak_solution(fan).passed


def test_oracle_examples(m1):
    assert flow_max_oracle(ConstraintProblem(m1, (1.0, 5 / 3), (2.0, 1.0), 1.0)) == pytest.approx(1.0, abs=1e-6)
    u = m1.free(1.9)
    assert flow_max_oracle(ConstraintProblem(m1, u, u, 2.1)) == pytest.approx(m1.q_uc(u.w), abs=1e-6)
    assert flow_max_oracle(ConstraintProblem(m1, u, u, 2.1), grid=1) <= m1.q_uc(u.w) + 1e-6


q0s = st.sampled_from([0.5, 1.0, 1.5, 1.9, 2.1, 2.5])


@settings(max_examples=300, deadline=None)
@given(st.data(), q0s, st.sampled_from([1, 2]))
def test_constrained_weak_and_bounded(data, q0, sid):
    m = instances.ref1()
    ul, ur = data.draw(states(m)), data.draw(states(m))
    prob = ConstraintProblem(m, ul, ur, q0, sid)
    fan = solve_r1c(prob) if sid == 1 else solve_r2c(prob)
    assert check_weak_solution(fan).passed
    assert check_constraint(fan, q0).passed
    assert classify_by_traces(prob) == classify(prob).side


@settings(max_examples=300, deadline=None)
@given(st.data(), st.sampled_from(["r1", "r2"]))
def test_unconstrained_weak(data, name):
    m = instances.ref2()
    ul, ur = data.draw(states(m)), data.draw(states(m))
    fan = (solve_r1 if name == "r1" else solve_r2)(m, ul, ur)
    assert check_weak_solution(fan).passed
