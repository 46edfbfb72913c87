#include "covert_mimo/gaussian.hpp"

#include <cmath>
#include <limits>

#include "covert_mimo/errors.hpp"

namespace covert_mimo {
namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;  // 1/sqrt(2*pi)
constexpr double kLn2Pi = 1.8378770664093455;       // log(2*pi)

double phi(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Rational initial guess for the standard normal quantile (Acklam's
// approximation, |relative error| < 1.15e-9 on (0,1)). Returns z with
// Phi(z) = p.
double normal_quantile_guess(double p) {
  static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                              -2.759285104469687e+02, 1.383577518672690e+02,
                              -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                              -1.556989798598866e+02, 6.680131188771972e+01,
                              -1.328068155288572e+01};
  static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                              -2.400758277161838e+00, -2.549732539343734e+00,
                              4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                              2.445134137142996e+00, 3.754408661907416e+00};
  const double p_low = 0.02425;

  if (p < p_low) {
    double q = std::sqrt(-2.0 * std::log(p));
    return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
            c[5]) /
           ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }
  if (p <= 1.0 - p_low) {
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
            a[5]) *
           q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }
  double q = std::sqrt(-2.0 * std::log1p(-p));
  return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
           c[5]) /
         ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
}

// Truncated asymptotic series Q(x) * x / phi(x) =
// 1 - 1/x^2 + 3/x^4 - 15/x^6 + 105/x^8 - 945/x^10 + 10395/x^12 - ...
// Alternating, so the error is below the first omitted term: under 4e-15
// relative for x >= 25.
double tail_series(double x) {
  double x2 = x * x;
  return 1.0 -
         1.0 / x2 *
             (1.0 - 3.0 / x2 *
                        (1.0 - 5.0 / x2 *
                                   (1.0 - 7.0 / x2 *
                                              (1.0 - 9.0 / x2 *
                                                         (1.0 - 11.0 / x2)))));
}

// log Q(x) for large positive x via the asymptotic expansion.
double log_qfunc_tail(double x) {
  return -0.5 * x * x - 0.5 * kLn2Pi - std::log(x) + std::log(tail_series(x));
}

// Hazard rate phi(x)/Q(x) from the same expansion; accurate for x > 20.
double hazard_tail(double x) { return x / tail_series(x); }

// Solves qfunc(x) = q for q in (0, 0.5]; returns x >= 0.
double qinv_upper(double q) {
  double x = -normal_quantile_guess(q);  // Phi(z)=q, Q(-z)=q
  if (x < 0.0) x = 0.0;

  if (x < 25.0) {
    // Two Halley steps on f(x) = Q(x) - q. f' = -phi, f'' = x*phi.
    for (int it = 0; it < 2; ++it) {
      double f = qfunc(x) - q;
      double u = f / phi(x);
      x += 2.0 * u / (2.0 - u * x);
    }
    return x;
  }

  // Extreme tail: phi underflows, iterate on log Q(x) = log q instead.
  double logq = std::log(q);
  for (int it = 0; it < 4; ++it) {
    x += (log_qfunc_tail(x) - logq) / hazard_tail(x);
  }
  return x;
}

}  // namespace

double qfunc(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double qinv(double p) {
  if (!(p > 0.0) || !(p < 1.0)) {
    throw DomainError("qinv: p must lie strictly inside (0, 1)");
  }
  if (p == 0.5) return 0.0;
  if (p < 0.5) return qinv_upper(p);
  return -qinv_upper(1.0 - p);
}

double logcosh(double x) {
  double ax = std::abs(x);
  // cosh(x) = exp(|x|) * (1 + exp(-2|x|)) / 2
  return ax + std::log1p(std::exp(-2.0 * ax)) - 0.6931471805599453;
}

}  // namespace covert_mimo
