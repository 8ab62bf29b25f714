#include "qrem/closed_form.hpp"

#include "qrem/error.hpp"

namespace qrem {

double log_cosh(double x) {
  const double a = std::abs(x);
  return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
}

double rem_pressure(double beta) {
  if (!(beta >= 0.0)) throw InvalidArgument("rem_pressure needs beta >= 0");
  if (beta <= kBetaC) return 0.5 * beta * beta;
  return beta * kBetaC - 0.5 * kBetaC * kBetaC;
}

double qrem_pressure(double beta, double gamma) {
  if (!(beta > 0.0)) throw InvalidArgument("qrem_pressure needs beta > 0");
  if (!(gamma >= 0.0)) throw InvalidArgument("qrem_pressure needs gamma >= 0");
  return std::max(rem_pressure(beta), log_cosh(beta * gamma));
}

double critical_field(double beta) {
  if (!(beta > 0.0)) throw InvalidArgument("critical_field needs beta > 0");
  // arcosh(e^x) = x + ln(1 + sqrt(1 - e^{-2x})) for x >= 0.
  const double x = rem_pressure(beta);
  return (x + std::log1p(std::sqrt(-std::expm1(-2.0 * x)))) / beta;
}

QremBranch qrem_branch(double beta, double gamma) {
  return log_cosh(beta * gamma) > rem_pressure(beta) ? QremBranch::Paramagnet : QremBranch::Glass;
}

double one_over_p_correction(double beta, double gamma, double p) {
  if (!(beta > 0.0) || !(gamma >= 0.0)) {
    throw InvalidArgument("1/p correction needs beta > 0 and gamma >= 0");
  }
  if (!(p > 0.0)) throw InvalidArgument("1/p correction needs p > 0");
  const double gc = critical_field(beta);
  if (std::abs(gamma - gc) < kTransitionBand) {
    throw InvalidArgument("1/p formula undefined at transition: gamma = critical_field(beta)");
  }
  const double base = qrem_pressure(beta, gamma);
  double term = 0.0;
  if (gamma > gc) {
    term = beta / (2.0 * gamma * std::tanh(beta * gamma));
  } else {
    if (std::abs(beta - kBetaC) < kTransitionBand) {
      throw InvalidArgument("1/p formula undefined at transition: beta = beta_c");
    }
    term = beta < kBetaC ? 0.5 * gamma * gamma : gamma * gamma * beta / (2.0 * kBetaC);
  }
  return base + term / p;
}

}  // namespace qrem
