"""Qualitative properties of the two constrained solvers, reproduced numerically.

Two REF2 instances show that the total variation can favour either solver.
On REF1, R1c jumps as the left state crosses the C/N boundary once Q0 exceeds
Q(u_c(W_c)), while R2c does not; the last part rebuilds the consistency
counterexamples.
"""

from lwrarz import instances
from lwrarz.verification import continuity_gap, continuity_probe, counterexample_check, make_solver

m2 = instances.ref2()
for ex in (instances.example_tv1(m2), instances.example_tv2(m2)):
    print(f"{ex.name}: Q0 = {ex.q0}, u_l = {ex.ul}, u_r = {ex.ur}")
    for name in ("r1c", "r2c"):
        tv = make_solver(m2, name, ex.q0)(ex.ul, ex.ur).tv_invariants()
        print(f"  {name}: TV(v) = {tv[0]:.6f}, TV(W) = {tv[1]:.6f}")

m1 = instances.ref1()
print("\nL1 distance between R1c[u_l^n, u_r] and R1c[u_l, u_r] on (-1, 1)")
for q0 in (2.0, 1.5):
    w = instances.continuity_witness(m1, q0)
    for name in ("r1c", "r2c"):
        d = continuity_probe(make_solver(m1, name, q0), w.ul, w.ur, w.perturb(m1), [10, 100, 1000, 10000])
        print(f"  Q0 = {q0}, {name}: " + ", ".join(f"{x:.4f}" for x in d))
print(f"  predicted R1c limit at Q0 = 2: {continuity_gap(m1, 2.0):.4f}")

print("\nconsistency counterexamples")
t = instances.cons_counterexample_i(m1, 1.0)
print(" ", counterexample_check(make_solver(m1, "r1c", 1.0), t, "r1c").to_json())
t = instances.r2_remark_counterexample(m1)
print(" ", counterexample_check(make_solver(m1, "r2"), t, "r2").to_json())
