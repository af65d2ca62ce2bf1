#pragma once

namespace sfde {

/// Gamma function for x > 0. Throws DomainError for x <= 0 or non-finite x.
double gamma(double x);

/// One-parameter Mittag-Leffler function E_alpha(z) = sum_k z^k / Gamma(alpha k + 1),
/// for 0 < alpha <= 1 and real |z| <= 5.
///
/// Direct Taylor series summed in 113-bit precision (long double where __float128 is
/// unavailable), stopped once terms fall below 1e-20 of the partial sum. The rounding error is
/// estimated as E_alpha(|z|) * eps * k, which for z < 0 is the cost of alternating cancellation.
/// Throws ConvergenceError when that estimate exceeds 1e-10 * max(1, |E_alpha(z)|) or when
/// |z| > 5. With 113-bit sums every alpha >= 0.42 is covered on all of |z| <= 5; smaller alpha
/// throws for the most negative z (and, relatively, never for z > 0).
double mittag_leffler(double alpha, double z);

}  // namespace sfde
