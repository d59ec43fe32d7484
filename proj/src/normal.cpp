#include "srchart/normal.hpp"

#include <cmath>
#include <numbers>

#include "srchart/error.hpp"

namespace srchart::normal {
namespace {

constexpr double kInvSqrtPi = 0.56418958354775628695;
constexpr double kThresh = 0.46875;
constexpr double kXSmall = 1.11e-16;
constexpr double kXBig = 26.543;

constexpr double kA[5] = {3.16112374387056560e00, 1.13864154151050156e02,
                          3.77485237685302021e02, 3.20937758913846947e03,
                          1.85777706184603153e-1};
constexpr double kB[4] = {2.36012909523441209e01, 2.44024637934444173e02,
                          1.28261652607737228e03, 2.84423683343917062e03};
constexpr double kC[9] = {5.64188496988670089e-1, 8.88314979438837594e00,
                          6.61191906371416295e01, 2.98635138197400131e02,
                          8.81952221241769090e02, 1.71204761263407058e03,
                          2.05107837782607147e03, 1.23033935479799725e03,
                          2.15311535474403846e-8};
constexpr double kD[8] = {1.57449261107098347e01, 1.17693950891312499e02,
                          5.37181101862009858e02, 1.62138957456669019e03,
                          3.29079923573345963e03, 4.36261909014324716e03,
                          3.43936767414372164e03, 1.23033935480374942e03};
constexpr double kP[6] = {3.05326634961232344e-1, 3.60344899949804439e-1,
                          1.25781726111229246e-1, 1.60837851487422766e-2,
                          6.58749161529837803e-4, 1.63153871373020978e-2};
constexpr double kQ[5] = {2.56852019228982242e00, 1.87295284992346047e00,
                          5.27905102951428412e-1, 6.05183413124413191e-2,
                          2.33520497626869185e-3};

// exp(-y*y) split so that the product keeps full relative precision.
double exp_neg_square(double y) {
  const double ysq = std::trunc(y * 16.0) / 16.0;
  const double del = (y - ysq) * (y + ysq);
  return std::exp(-ysq * ysq) * std::exp(-del);
}

// erf(x) for |x| <= kThresh.
double erf_small(double x) {
  const double y = std::fabs(x);
  const double ysq = y > kXSmall ? y * y : 0.0;
  double xnum = kA[4] * ysq;
  double xden = ysq;
  for (int i = 0; i < 3; ++i) {
    xnum = (xnum + kA[i]) * ysq;
    xden = (xden + kB[i]) * ysq;
  }
  return x * (xnum + kA[3]) / (xden + kB[3]);
}

// erfc(y) for y > kThresh.
double erfc_large(double y) {
  if (y <= 4.0) {
    double xnum = kC[8] * y;
    double xden = y;
    for (int i = 0; i < 7; ++i) {
      xnum = (xnum + kC[i]) * y;
      xden = (xden + kD[i]) * y;
    }
    return exp_neg_square(y) * (xnum + kC[7]) / (xden + kD[7]);
  }
  if (y >= kXBig) return 0.0;
  const double ysq = 1.0 / (y * y);
  double xnum = kP[5] * ysq;
  double xden = ysq;
  for (int i = 0; i < 4; ++i) {
    xnum = (xnum + kP[i]) * ysq;
    xden = (xden + kQ[i]) * ysq;
  }
  double r = ysq * (xnum + kP[4]) / (xden + kQ[4]);
  r = (kInvSqrtPi - r) / y;
  return exp_neg_square(y) * r;
}

double ppnd16(double p) {
  const double q = p - 0.5;
  if (std::fabs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                 6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
               1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
             1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
           (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                 3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
               5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
             4.2313330701600911252e+1) * r + 1.0);
  }
  double r = q < 0.0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                  2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
              4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
            (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                  1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
              2.05319162663775882187e+0) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
              5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
            (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                  1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
              5.99832206555887937690e-1) * r + 1.0);
  }
  return q < 0.0 ? -value : value;
}

}  // namespace

double erf(double x) {
  const double y = std::fabs(x);
  if (y <= kThresh) return erf_small(x);
  const double r = (0.5 - erfc_large(y)) + 0.5;
  return x < 0.0 ? -r : r;
}

double erfc(double x) {
  const double y = std::fabs(x);
  if (y <= kThresh) return 1.0 - erf_small(x);
  const double r = erfc_large(y);
  return x < 0.0 ? 2.0 - r : r;
}

double pdf(double z) {
  return std::exp(-0.5 * z * z) * (std::numbers::inv_sqrtpi / std::numbers::sqrt2);
}

double cdf(double z) { return 0.5 * erfc(-z / std::numbers::sqrt2); }

double upper_tail(double z) { return 0.5 * erfc(z / std::numbers::sqrt2); }

double quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw DomainError("normal::quantile: probability must lie in (0, 1)");
  }
  double x = ppnd16(p);
  // One Newton step; the lower-tail form keeps relative precision for p < 1/2.
  const double density = pdf(x);
  if (density > 0.0) {
    const double residual = p < 0.5 ? cdf(x) - p : (1.0 - p) - upper_tail(x);
    x -= residual / density;
  }
  return x;
}

}  // namespace srchart::normal
