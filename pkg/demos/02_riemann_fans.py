"""Unconstrained Riemann problems: R1 against R2.

A light free state meets a congested queue. R1 jumps onto the marker level
of the incoming traffic and then follows a contact; R2 goes straight to the
queue with a single phase transition that conserves mass only.
"""

import numpy as np

from lwrarz import ref1, solve_r1, solve_r2
from lwrarz.verification import check_weak_solution

m = ref1()
ul, ur = m.free(1.0), m.state(2.2, 0.7)


def show(name, fan):
    print(f"{name}: {len(fan)} wave(s)")
    for w in fan.waves:
        speed = w.speed if not w.is_rarefaction else f"[{w.lo:.4f}, {w.hi:.4f}]"
        print(f"  {w.kind.value:17s} {w.left} -> {w.right}  speed {speed}  momentum={w.momentum}")
    rep = check_weak_solution(fan)
    print(f"  weak solution: {rep.passed} (largest residual {rep.residual:.1e})")


show("R1", solve_r1(m, ul, ur))
show("R2", solve_r2(m, ul, ur))

# the congested -> free case: a 1-wave to u_c(w), a transition to u_f(w), then LWR
fan = solve_r1(m, m.state(2.2, 0.8), m.free(0.5))
show("R1, queue discharging", fan)

# sample the solution at t = 1 on a few points
xi = np.linspace(-5, 2, 8)
rho, v, wave = fan.sample(xi)
print("\n   x      rho      v     wave")
for row in zip(xi, rho, v, wave):
    print("  {:5.2f}  {:.4f}  {:.4f}  {:3d}".format(*row))
