"""A toll gate at x = 0 letting through at most Q0 vehicles per unit time.

For each pair the closed-form classification decides whether the constraint
is active (N) or not (C). When it is, the constrained solvers place a
stationary interface at x = 0 between two traces of equal flow.
"""

from lwrarz import ConstraintProblem, classify, flow_max_oracle, ref1, select_traces, solve_constrained
from lwrarz.verification import check_constraint

m = ref1()
cases = [
    ("light traffic", m.free(0.5), m.free(0.5), 1.0),
    ("heavy free traffic", m.free(1.9), m.free(1.9), 2.0),
    ("heavy free traffic, loose gate", m.free(1.9), m.free(1.9), 2.1),
    ("free into queue", m.free(1.0), m.state(2.0, 1.0), 1.0),
]

for label, ul, ur, q0 in cases:
    print(f"\n{label}: u_l = {ul}, u_r = {ur}, Q0 = {q0}")
    for solver in (1, 2):
        prob = ConstraintProblem(m, ul, ur, q0, solver)
        cls = classify(prob)
        fan = solve_constrained(prob)
        a, b = fan.traces()
        line = f"  R{solver}c  {cls.tag:5s} traces q = ({a.q:.4f}, {b.q:.4f})"
        if cls.constrained:
            line += f"  case {select_traces(prob).case}"
        print(line + f"  constraint ok: {check_constraint(fan, q0).passed}")

# R1c maximizes the flow through the gate: a brute-force search over admissible
# trace pairs finds nothing better than the selected one
prob = ConstraintProblem(m, m.free(1.9), m.free(1.9), 2.1)
print("\nselected flow", select_traces(prob).u_hat.q, "oracle", flow_max_oracle(prob, grid=200))
