#pragma once

// Output of tests/oracle/derived_values.py. cvxpy results are good to
// roughly 1e-9, so comparisons against them use 1e-7.

namespace ref {

inline constexpr double projection_05_09[] = {0.3, 0.7};
inline constexpr double prox_diag20[] = {1.0, 3.0};
inline constexpr double qp_identity_argmin[] = {1.0, 0.0};
inline constexpr double kkt_residual_uniform = 0.7071067811865476;

inline constexpr double cutting_plane_at_0 = -0.5;
inline constexpr double smooth_model_at_0 = 0.0;
inline constexpr double smooth_model_gradient_at_0 = 0.0;

inline constexpr double null_constant_equal = 4.82842712474619;
inline constexpr double tau_bound_equal = 0.9604957132203641;
inline constexpr double null_constant_double = 12.0;
inline constexpr double tau_bound_double = 0.9931972789115646;
inline constexpr double composite_eps0 = 0.194924200308419;

// Bundle of f(x) = ½xᵀQx + bᵀx, Q = [[2, .5], [.5, 1]], b = (-1, .5), cut at
// (1,0), (0,1), (-1,-1), (2,-0.5).
inline constexpr double model_query_L = 2.2071067811865475;
inline constexpr double model_query_value = 0.12087405773449743;
inline constexpr double model_query_gradient[] = {0.7038217195274302, 1.066490412237031};
// Steps from x = (0.3, -0.2) with ρ = 1.5.
inline constexpr double smooth_step_y[] = {0.5035895578293579, -0.4798860922945406};
inline constexpr double smooth_step_t = -0.5140111313569405;
inline constexpr double classic_step_y[] = {0.09523809545461731, -0.7142857147523564};
inline constexpr double classic_step_t = -1.619047619288736;

// max((1, .5)·y, (-.5, 1)·y + .3) + ½yᵀAy + (.1, -.2)·y, A = [[1, .2], [.2, .5]],
// from x = (.5, .5) with ρ = 2.
inline constexpr double composite_step_y[] = {0.24794007478900917, 0.14382022477396986};
inline constexpr double composite_step_objective = 0.5493183521489784;

inline constexpr double recurrence_ratio_1_0 = 0.2706705664732254;
inline constexpr double recurrence_ratio_1_5 = 0.0007887380438667469;
inline constexpr double recurrence_ratio_10_3 = 0.004263665847996418;

}  // namespace ref
