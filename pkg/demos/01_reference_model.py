"""A tour of the reference model REF1.

V(rho) = 2 - rho/3 on the free branch, p(rho) = rho^2/2, free thresholds
R_f' = 1.5 and R_f'' = 2, congested speed cap V_c = 1.

Run with ``python demos/01_reference_model.py``.
"""

import numpy as np

from lwrarz import ref1

m = ref1()
c = m.constants
print("derived constants")
for name in ("v_max", "v_min", "w_c", "w_max", "r_c", "r_max", "q_max"):
    print(f"  {name:6s} = {getattr(c, name):.6f}")

# a few points and the phase each one belongs to
for rho, v in [(0.0, 2.0), (1.0, 5 / 3), (1.8, 1.4), (2.0, 1.0), (1.0, 1.0)]:
    phase = m.membership(rho, v)
    print(f"  ({rho}, {v:.4f}) -> {phase.value if phase else 'outside'}")

# the two curves indexed by the marker w = v + p(rho): u_c(w) on the speed cap,
# u_f(w) on the upper free branch; both carry their largest flow at W_max
print("\n   w       u_c(w)            u_f(w)          Q(u_c)   Q(u_f)")
for w in np.linspace(m.w_c, m.w_max, 5):
    uc, uf = m.u_c(w), m.u_f(w)
    print(f"  {w:.4f}  ({uc.rho:.4f}, {uc.v:.4f})  ({uf.rho:.4f}, {uf.v:.4f})  {uc.q:.4f}  {uf.q:.4f}")

# characteristic speeds: free waves travel forward, congested 1-waves backward
print("\nlambda_f on the free branch:", [round(float(m.lambda_f(r)), 3) for r in np.linspace(0, 2, 5)])
u = m.state(2.0, 1.0)
print("(lambda_1, lambda_2) at (2, 1):", m.char_speeds(u))
