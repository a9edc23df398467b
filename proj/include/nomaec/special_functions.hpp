#pragma once

// Scalar special functions used by the rate model and the closed-form
// effective-capacity expressions. All functions are pure.

#include "nomaec/quadrature.hpp"

namespace nomaec {

inline constexpr double kEulerGamma = 0.577215664901532860606512090082402431;

// Gaussian tail probability Q(x) = P(N(0,1) > x).
double gaussian_q(double x);

// Inverse of gaussian_q on (0, 1). Throws DomainError outside the open interval.
double gaussian_q_inv(double p);

double ln_gamma(double x);
double beta(double a, double b);

// Exponential integral Ei(x) for x < 0, i.e. -E1(-x).
double exp_integral_ei(double x);

// e^x * E_n(x) for x > 0 and n >= 0, with E_n(x) = int_1^inf e^{-xw} w^{-n} dw.
// The scaling keeps the value O(1/(x+n)) where the unscaled E_n underflows.
double exp_integral_en_scaled(int n, double x);

// Confluent hypergeometric function of the second kind,
//   U(a, b, z) = 1/Gamma(a) * int_0^inf e^{-zt} t^{a-1} (1+t)^{b-a-1} dt,
// evaluated by adaptive quadrature of the defining integral. Requires a > 0, z > 0.
double hyp_u(double a, double b, double z, const QuadratureSettings& q = {});

// Generalized binomial coefficient x(x-1)...(x-y+1)/y! for real x and y >= 0.
double gen_binom(double x, int y);

// int_0^inf e^{-z t} (t + b)^{-k} dt for k >= 1, z > 0, b > 0, and its natural
// log. Evaluated as b^{1-k} e^{bz} E_k(bz), which stays accurate where the
// finite-sum-plus-Ei representation cancels catastrophically.
double shifted_power_laplace(int k, double z, double b);
double log_shifted_power_laplace(int k, double z, double b);

}  // namespace nomaec
