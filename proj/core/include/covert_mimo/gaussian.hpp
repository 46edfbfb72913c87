#pragma once

namespace covert_mimo {

// Gaussian upper-tail probability Q(x) = P[N(0,1) > x].
double qfunc(double x);

// Inverse of qfunc on (0, 1). Absolute accuracy ~1e-15 across the full
// representable range; throws DomainError outside (0, 1).
double qinv(double p);

// log(cosh(x)) without overflow for large |x|.
double logcosh(double x);

}  // namespace covert_mimo
