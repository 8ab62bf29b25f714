#pragma once

// Limiting pressures of the random energy model with and without a
// transverse field, and the perturbative 1/p corrections around them.

#include <cmath>
#include <numbers>

namespace qrem {

// Freezing temperature of the REM, sqrt(2 ln 2).
inline const double kBetaC = std::sqrt(2.0 * std::numbers::ln2);

// ln cosh(x) without overflow.
double log_cosh(double x);

// 1/2 beta^2 below beta_c, beta beta_c - beta_c^2 / 2 above.
double rem_pressure(double beta);

// max{ rem_pressure(beta), ln cosh(beta gamma) }.
double qrem_pressure(double beta, double gamma);

// beta^{-1} arcosh(exp(rem_pressure(beta))).
double critical_field(double beta);

enum class QremBranch { Glass, Paramagnet };

// Which argument of the max in qrem_pressure wins (ties go to Glass).
QremBranch qrem_branch(double beta, double gamma);

// Half-width of the band around the critical lines where the 1/p formula is
// refused.
inline constexpr double kTransitionBand = 1e-12;

// Phi_inf(beta, gamma) plus the regime-dependent 1/p term. Throws
// InvalidArgument on the transition lines. p may be +infinity.
double one_over_p_correction(double beta, double gamma, double p);

}  // namespace qrem
