#!/usr/bin/env python3
"""Reference values for the unit tests, computed without the C++ library.

The subproblems are solved here in their primal form with cvxpy (or by grid
search), not through the simplex dual the library uses. Run it and copy the
printed numbers into tests/reference_values.hpp when an instance changes.
"""

import math

import cvxpy as cp
import numpy as np

np.set_printoptions(precision=17)


def show(name, value):
    arr = np.atleast_1d(np.asarray(value, dtype=float))
    print(f"{name} = {{{', '.join(repr(float(v)) for v in arr)}}}")


def project_segment(v):
    # Two-point simplex: minimize (a - v0)^2 + (1 - a - v1)^2 over a in [0, 1].
    a = min(1.0, max(0.0, (1.0 + v[0] - v[1]) / 2.0))
    return np.array([a, 1.0 - a])


# Simplex projection of (0.5, 0.9).
show("projection_05_09", project_segment(np.array([0.5, 0.9])))

# Prox of Q = diag(2, 0), b = 0 at x = (3, 3), rho = 1, by direct minimization.
y = cp.Variable(2)
Q = np.diag([2.0, 0.0])
x = np.array([3.0, 3.0])
cp.Problem(cp.Minimize(0.5 * cp.quad_form(y, Q) + 0.5 * cp.sum_squares(y - x))).solve(solver=cp.CLARABEL)
show("prox_diag20", y.value)

# min over the simplex of 0.5*|l|^2 - l_1 on a 10^4 point grid of the segment.
a = np.linspace(0.0, 1.0, 10001)
vals = 0.5 * (a**2 + (1 - a) ** 2) - a
show("qp_identity_grid_argmin", [a[np.argmin(vals)], 1 - a[np.argmin(vals)]])

# Projected-gradient residual of the uniform point on that instance.
lam = np.array([0.5, 0.5])
g = lam + np.array([-1.0, 0.0])
show("kkt_residual_uniform", np.linalg.norm(lam - project_segment(lam - g)))

# f = x^2/2 in 1D with cuts at -1 and 1.
pts = np.array([-1.0, 1.0])
fv = 0.5 * pts**2
gv = pts.copy()
show("cutting_plane_at_0", np.max(fv + gv * (0.0 - pts)))
u = np.linspace(-1.0, 1.0, 200001)
phi = np.max(fv[:, None] + gv[:, None] * (0.0 - pts[:, None]) + (u[None, :] - gv[:, None]) ** 2 / 2.0, axis=0)
show("smooth_model_at_0", [phi.min(), u[np.argmin(phi)]])

# Null-step constants and the xi contraction factor.
for ratio in (1.0, 2.0):
    C = 2 * ratio * (math.sqrt(2 * ratio) + 1)
    show(f"null_constant_L_over_rho_{ratio:g}", C)
    show(f"tau_bound_L_over_rho_{ratio:g}", (ratio + C**2) / (1 + ratio + C**2))

# First composite epsilon at B = 1, rho = 1.
show("composite_eps0", math.sqrt(6.0) / (math.pi * 4.0))

# Smooth-model value and gradient at a query point, primal min-max form:
#   p(y) = min_u max_i f_i + <g_i, y - y_i> + |u - g_i|^2 / (2L).
Qs = np.array([[2.0, 0.5], [0.5, 1.0]])
bs = np.array([-1.0, 0.5])
Ls = float(np.linalg.eigvalsh(Qs).max())
P = np.array([[1.0, 0.0], [0.0, 1.0], [-1.0, -1.0], [2.0, -0.5]])
F = np.array([0.5 * p @ Qs @ p + bs @ p for p in P])
G = np.array([Qs @ p + bs for p in P])
yq = np.array([0.7, 0.4])
uq = cp.Variable(2)
s = cp.Variable()
cons = [s >= F[i] + G[i] @ (yq - P[i]) + cp.sum_squares(uq - G[i]) / (2 * Ls) for i in range(4)]
cp.Problem(cp.Minimize(s), cons).solve(solver=cp.CLARABEL, tol_gap_abs=1e-10, tol_gap_rel=1e-10, tol_feas=1e-10)
show("model_query_value", s.value)
show("model_query_gradient", uq.value)
show("model_query_L", Ls)

# Smooth bundle step as the convex QCQP in (y, t):
#   min t + rho/2 |y - x|^2  s.t.  t - f_i - <g_i, y - y_i> >= |rho (y - x) + g_i|^2 / (2L).
xs = np.array([0.3, -0.2])
rho = 1.5
yv = cp.Variable(2)
tv = cp.Variable()
cons = [tv - F[i] - G[i] @ (yv - P[i]) >= cp.sum_squares(rho * (yv - xs) + G[i]) / (2 * Ls) for i in range(4)]
prob = cp.Problem(cp.Minimize(tv + rho / 2 * cp.sum_squares(yv - xs)), cons)
prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-10, tol_gap_rel=1e-10, tol_feas=1e-10)
show("smooth_step_y", yv.value)
show("smooth_step_t", tv.value)

# Classic step on the same bundle: linear cuts only.
yv = cp.Variable(2)
tv = cp.Variable()
cons = [tv >= F[i] + G[i] @ (yv - P[i]) for i in range(4)]
cp.Problem(cp.Minimize(tv + rho / 2 * cp.sum_squares(yv - xs)), cons).solve(
    solver=cp.CLARABEL, tol_gap_abs=1e-10, tol_gap_rel=1e-10, tol_feas=1e-10)
show("classic_step_y", yv.value)
show("classic_step_t", tv.value)

# Composite step, m = 2 in 2D, checked against cvxpy and a grid.
V = np.array([[1.0, 0.5], [-0.5, 1.0]])
bv = np.array([0.0, 0.3])
A = np.array([[1.0, 0.2], [0.2, 0.5]])
bq = np.array([0.1, -0.2])
xc = np.array([0.5, 0.5])
rc = 2.0
yv = cp.Variable(2)
tv = cp.Variable()
cons = [tv >= V[i] @ yv + bv[i] for i in range(2)]
obj = tv + 0.5 * cp.quad_form(yv, A) + bq @ yv + rc / 2 * cp.sum_squares(yv - xc)
prob = cp.Problem(cp.Minimize(obj), cons)
prob.solve(solver=cp.CLARABEL, tol_gap_abs=1e-10, tol_gap_rel=1e-10, tol_feas=1e-10)
show("composite_step_y", yv.value)
show("composite_step_objective", prob.value)
g1 = np.linspace(-1.5, 1.5, 3001)
Y1, Y2 = np.meshgrid(g1, g1, indexing="ij")
H = np.maximum(V[0, 0] * Y1 + V[0, 1] * Y2 + bv[0], V[1, 0] * Y1 + V[1, 1] * Y2 + bv[1])
H += 0.5 * (A[0, 0] * Y1**2 + 2 * A[0, 1] * Y1 * Y2 + A[1, 1] * Y2**2) + bq[0] * Y1 + bq[1] * Y2
H += rc / 2 * ((Y1 - xc[0]) ** 2 + (Y2 - xc[1]) ** 2)
show("composite_step_grid_objective", H.min())

# Recurrence at equality against (e^2 r0 + C' pi^2 e^(3 + pi^2/3) / 3) k^2.
for r0, cp_ in ((1.0, 0.0), (1.0, 5.0), (10.0, 3.0)):
    coeff = math.e**2 * r0 + cp_ * math.pi**2 * math.exp(3 + math.pi**2 / 3) / 3
    r, worst = r0, 0.0
    for k in range(0, 10000):
        r = (1 + 2 / (k + 2)) * r + 2 * cp_ / (k + 2)
        worst = max(worst, r / (coeff * (k + 1) ** 2))
    show(f"recurrence_worst_ratio_{r0:g}_{cp_:g}", worst)
