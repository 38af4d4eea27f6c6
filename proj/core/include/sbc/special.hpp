#pragma once

namespace sbc {

// Gamma function, Lanczos (g = 7, 9 terms) with reflection for x < 1/2.
// Relative error ~1e-15 away from the poles; throws DomainError at a pole.
double gamma_fn(double x);

// 2F1(1/2, 2/3; 3/2; z) for z <= 0. Power series for |z| < 1/2, otherwise the
// Pfaff transform followed by the 1-w connection formula.
double hyp2f1_special(double z);

// General Gauss series, used by the above and exposed for testing.
// Requires |z| < 1.
double hyp2f1_series(double a, double b, double c, double z);

}  // namespace sbc
