#pragma once

#include "mibridge/gaussian.hpp"
#include "mibridge/rng.hpp"

namespace mibridge {

// Inverse-Wishart convention used by every sampler in this header:
//
//   Sigma ~ IW(df, scale)  <=>  density ∝ |Sigma|^{-(df+p+1)/2}
//                                          exp(-tr(scale Sigma^{-1}) / 2)
//
// so that Sigma^{-1} ~ Wishart(df, scale^{-1}) and, for p = 1,
// IW(df, s) = InvGamma(shape df/2, scale s/2). The priors in
// prior_bridge.hpp use the precision-scale convention of the joint prior
// and convert before calling in here.

Vector draw_mvn(RngStream& rng, const GaussianParams& params);

/// mean + L z with L lower triangular (typically a Cholesky factor).
Vector draw_mvn(RngStream& rng, const Vector& mean, const Matrix& lower_factor);

/// Wishart(df, scale) via the Bartlett decomposition. df > p - 1.
Matrix draw_wishart(RngStream& rng, double df, const Matrix& scale);

/// IW(df, scale) in the convention above. Requires df >= p and an SPD
/// scale; the draw is symmetric positive definite.
Matrix draw_inv_wishart(RngStream& rng, double df, const Matrix& scale);

/// 1 / Gamma(shape, rate = scale): density ∝ x^{-shape-1} exp(-scale / x).
double draw_inv_gamma(RngStream& rng, double shape, double scale);

/// loc + L z sqrt(df / g), L L^T = scale, z standard normal, g ~ chi^2_df.
Vector draw_mv_student_t(RngStream& rng, const Vector& loc, const Matrix& scale,
                         double df);

}  // namespace mibridge
