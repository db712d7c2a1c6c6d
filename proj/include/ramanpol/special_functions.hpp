#pragma once

namespace ramanpol {

/// Modified Bessel function of the first kind, order zero. Accepts
/// 0 <= x <= 700 (beyond that the unscaled value approaches overflow).
double bessel_i0(double x);

/// e^{-x} I0(x), finite for every non-negative x.
double bessel_i0_scaled(double x);

/// Green's-function kernel of the amplified Langevin noise:
///   H = exp(-gamma (tau - tau_prime)) · I0(sqrt(4 (z - z_prime) a)).
/// Evaluated through the scaled Bessel function so that large gains do not
/// overflow before the damping factor is applied.
double kernel_h(double z, double z_prime, double a_value, double gamma, double tau,
                double tau_prime);

}  // namespace ramanpol
