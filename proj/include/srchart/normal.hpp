#pragma once

// Standard normal distribution primitives.
//
// erf/erfc follow W. J. Cody's rational Chebyshev approximations (Math. Comp.
// 1969), accurate to about 1e-16 relative in double precision. The quantile is
// Wichura's AS 241 (PPND16) followed by one Newton step against cdf().

namespace srchart::normal {

double erf(double x);
double erfc(double x);

double pdf(double z);
double cdf(double z);
/// 1 - cdf(z), computed without cancellation for large z.
double upper_tail(double z);
/// Inverse of cdf. Throws DomainError unless 0 < p < 1.
double quantile(double p);

}  // namespace srchart::normal
