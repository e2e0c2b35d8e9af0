#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "genland/error.hpp"
#include "genland/linalg.hpp"
#include "genland/sambe.hpp"

namespace genland {

/// Generalized landscape v = (H†H)⁺𝟙 and the scalars derived from it.
struct LandscapeResult {
  RealVector amplitude;  // |v_j|
  Vector v_complex;
  double v_max = 0.0;
  double norm2 = 0.0;     // ‖v‖₂
  double soft_com = std::numeric_limits<double>::quiet_NaN();
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  double rcond_used = kDefaultRcond;
  Index discarded_rank = 0;
  bool degenerate = false;
  // Σ |x|² over the discarded near-null right singular vectors, per index.
  RealVector kernel_weight;

  Index dim() const { return amplitude.size(); }
};

/// Σ_j j·a_j / Σ_j a_j with sites numbered from 1.
inline double soft_center_of_mass(std::span<const double> amplitude) {
  double total = 0.0;
  double moment = 0.0;
  for (std::size_t j = 0; j < amplitude.size(); ++j) {
    if (amplitude[j] < 0.0) throw PreconditionError("soft_center_of_mass: negative weight");
    total += amplitude[j];
    moment += static_cast<double>(j + 1) * amplitude[j];
  }
  if (!(total > 0.0)) throw DegenerateError("soft_center_of_mass: all-zero profile");
  return moment / total;
}

inline double soft_center_of_mass(const RealVector& amplitude) {
  return soft_center_of_mass(std::span<const double>(amplitude.data(), amplitude.size()));
}

/// Landscape from an SVD of H: v = Σ_k x_k (x_k†𝟙)/σ_k² over σ_k² > rcond·σ_max².
///
/// Same vector as pseudo_solve(H†H, 𝟙) without squaring the condition
/// number, so near-null directions down to σ/σ_max ~ 1e-13 stay resolvable.
inline LandscapeResult landscape_from_svd(const SvdResult& dec, double rcond) {
  if (!(rcond > 0.0 && rcond < 1.0)) throw RangeError("solve_landscape: rcond must lie in (0,1)");
  const Index d = dec.singular_values.size();
  LandscapeResult out;
  out.rcond_used = rcond;
  out.sigma_max = dec.singular_values(0);
  out.sigma_min = dec.singular_values(d - 1);
  out.kernel_weight = RealVector::Zero(d);

  const double cutoff = rcond * out.sigma_max * out.sigma_max;
  const Vector ones = Vector::Ones(d);
  Vector coeffs = dec.right_vectors.adjoint() * ones;
  for (Index k = 0; k < d; ++k) {
    const double s2 = dec.singular_values(k) * dec.singular_values(k);
    if (out.sigma_max > 0.0 && s2 > cutoff) {
      coeffs(k) /= s2;
    } else {
      coeffs(k) = 0.0;
      ++out.discarded_rank;
      out.kernel_weight += dec.right_vectors.col(k).cwiseAbs2();
    }
  }
  out.degenerate = out.discarded_rank == d;
  out.v_complex = dec.right_vectors * coeffs;
  out.amplitude = out.v_complex.cwiseAbs();
  out.v_max = out.amplitude.maxCoeff();
  out.norm2 = out.v_complex.norm();
  if (!out.degenerate) out.soft_com = soft_center_of_mass(out.amplitude);
  return out;
}

inline LandscapeResult solve_landscape(const Operator& h, double rcond = kDefaultRcond) {
  return landscape_from_svd(svd(h), rcond);
}

/// Sambe landscape; soft_com is taken on the harmonic-marginalized amplitude.
inline LandscapeResult solve_landscape(const SambeOperator& hs, double rcond = kDefaultRcond) {
  LandscapeResult out = solve_landscape(hs.matrix, rcond);
  if (!out.degenerate) out.soft_com = soft_center_of_mass(sambe_site_marginal(out.amplitude, hs.index_map));
  return out;
}

/// Second route: pseudo_solve on the eigendecomposition of H†H.
inline PseudoSolveResult landscape_via_normal_operator(const Operator& h,
                                                       double rcond = kDefaultRcond) {
  return pseudo_solve(normal_operator(h), Vector::Ones(h.dim()), rcond);
}

inline double landscape_max_total(const Operator& h, double rcond = kDefaultRcond) {
  return solve_landscape(h, rcond).v_max;
}

inline double landscape_max_total(const SambeOperator& hs, double rcond = kDefaultRcond) {
  return solve_landscape(hs.matrix, rcond).v_max;
}

struct NormBoundCheck {
  double v_max = 0.0;
  double norm2 = 0.0;
  double bound = std::numeric_limits<double>::infinity();  // √d / σ_min²
  bool holds = true;
};

/// v_max ≤ ‖v‖₂ ≤ √d·σ_min⁻², each inequality with relative slack rel_tol.
inline NormBoundCheck check_norm_bound(const LandscapeResult& r, double rel_tol = 1e-8) {
  NormBoundCheck c;
  c.v_max = r.v_max;
  c.norm2 = r.norm2;
  if (r.sigma_min > 0.0) {
    c.bound = std::sqrt(static_cast<double>(r.dim())) / (r.sigma_min * r.sigma_min);
  }
  c.holds = c.v_max <= c.norm2 * (1.0 + rel_tol) && c.norm2 <= c.bound * (1.0 + rel_tol);
  return c;
}

struct EigenmodeBound {
  Index mode = 0;
  double eigenvalue = 0.0;  // λ = E² of H†H
  double max_ratio = 0.0;   // max_j |φ_j| / (λ ‖φ‖∞ |v_j|)
};

/// Pointwise test of |φ_j| ≤ λ‖φ‖∞ |v_j| for every kept eigenmode of H†H.
/// Ratios above one are reported as measured.
inline std::vector<EigenmodeBound> eigenmode_bound_report(const Operator& h,
                                                          double rcond = kDefaultRcond) {
  const LandscapeResult land = solve_landscape(h, rcond);
  if (land.degenerate) throw DegenerateError("eigenmode_bound_report: degenerate landscape");
  const HermitianEig eig = eig_hermitian(normal_operator(h));
  const double cutoff = rcond * eig.values.maxCoeff();

  std::vector<EigenmodeBound> out;
  for (Index k = 0; k < eig.values.size(); ++k) {
    const double lambda = eig.values(k);
    if (!(lambda > cutoff)) continue;
    const RealVector phi = eig.vectors.col(k).cwiseAbs();
    const double phi_inf = phi.maxCoeff();
    double worst = 0.0;
    for (Index j = 0; j < phi.size(); ++j) {
      if (phi(j) == 0.0) continue;
      const double denom = lambda * phi_inf * land.amplitude(j);
      worst = std::max(worst, denom > 0.0 ? phi(j) / denom : std::numeric_limits<double>::infinity());
    }
    out.push_back({k, lambda, worst});
  }
  return out;
}

}  // namespace genland
