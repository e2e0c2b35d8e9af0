#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "genland/error.hpp"
#include "genland/landscape.hpp"
#include "genland/linalg.hpp"
#include "genland/models.hpp"

namespace genland {

/// ⟨|ψ_j|²⟩ averaged over all normalized right eigenstates of H.
inline RealVector average_right_density(const Operator& h) {
  const EigResult eig = eig_general(h);
  const Index n = h.dim();
  RealVector density = RealVector::Zero(n);
  for (Index k = 0; k < eig.vectors.cols(); ++k) {
    const RealVector w = eig.vectors.col(k).cwiseAbs2();
    density += w / w.sum();
  }
  return density / static_cast<double>(eig.vectors.cols());
}

inline double eigenstate_center_of_mass(std::span<const double> density) {
  return soft_center_of_mass(density);
}

inline double eigenstate_center_of_mass(const RealVector& density) {
  return soft_center_of_mass(density);
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("pearson: length mismatch");
  if (x.size() < 2) throw DimensionError("pearson: need at least two samples");
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0;
  double sxx = 0.0;
  double syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxy += dx * dy;
    sxx += dx * dx;
    syy += dy * dy;
  }
  if (!(sxx > 0.0) || !(syy > 0.0)) throw DegenerateError("pearson: zero variance");
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

/// 1-based ranks; tied values share the average of their ranks.
inline std::vector<double> average_ranks(std::span<const double> x) {
  std::vector<std::size_t> order(x.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return x[a] < x[b]; });
  std::vector<double> ranks(x.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && x[order[j + 1]] == x[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw DimensionError("spearman: length mismatch");
  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  return pearson(rx, ry);
}

/// Σ|ψ_i|⁴ of a normalized vector.
inline double sambe_ipr(const Vector& vec) {
  if (std::abs(vec.norm() - 1.0) > 1e-10) throw NormalizationError("sambe_ipr: vector is not normalized");
  return vec.cwiseAbs2().cwiseAbs2().sum();
}

/// E mod ω mapped into [−ω/2, ω/2).
inline double fold_quasienergy(double energy, double omega) {
  if (!(omega > 0.0)) throw PreconditionError("fold_quasienergy: omega must be positive");
  double x = energy - omega * std::floor(energy / omega + 0.5);
  if (x >= 0.5 * omega) x -= omega;
  if (x < -0.5 * omega) x += omega;
  return x;
}

struct Histogram {
  RealVector centers;
  RealVector density;
  double bin_width = 0.0;
};

/// Normalized histogram of x_n = fold(E_n, ω)/ω over uniform bins on [−1/2, 1/2).
///
/// The number of bins is ⌈1/bin_width⌉; bins are then resized to tile the
/// interval exactly, so Σ density·Δx = 1.
inline Histogram floquet_dos(std::span<const double> energies, double omega, double bin_width) {
  if (energies.empty()) throw DegenerateError("floquet_dos: no energies");
  if (!(omega > 0.0)) throw PreconditionError("floquet_dos: omega must be positive");
  if (!(bin_width > 0.0 && bin_width < 1.0)) throw PreconditionError("floquet_dos: bin_width in (0,1)");
  const auto bins = static_cast<Index>(std::ceil(1.0 / bin_width - 1e-9));
  Histogram h;
  h.bin_width = 1.0 / static_cast<double>(bins);
  h.centers.resize(bins);
  h.density = RealVector::Zero(bins);
  for (Index b = 0; b < bins; ++b) h.centers(b) = -0.5 + (static_cast<double>(b) + 0.5) * h.bin_width;
  for (double e : energies) {
    const double x = fold_quasienergy(e, omega) / omega;
    auto b = static_cast<Index>(std::floor((x + 0.5) / h.bin_width));
    b = std::clamp<Index>(b, 0, bins - 1);
    h.density(b) += 1.0;
  }
  h.density /= static_cast<double>(energies.size()) * h.bin_width;
  return h;
}

struct Peak {
  double position = 0.0;
  double height = 0.0;
  std::size_t index = 0;  // grid index of the sampled maximum
  double prominence = 0.0;
};

/// Strict interior local maxima whose prominence exceeds ratio·max(series).
///
/// Prominence is the height above the higher of the two flanking minima,
/// each taken up to the next higher sample (or the series end). Positions
/// and heights come from the parabola through the three samples.
inline std::vector<Peak> detect_peaks(std::span<const double> series, std::span<const double> grid,
                                      double min_prominence_ratio) {
  if (series.size() != grid.size()) throw DimensionError("detect_peaks: length mismatch");
  if (series.size() < 3) throw DimensionError("detect_peaks: need at least three samples");
  if (!(min_prominence_ratio > 0.0 && min_prominence_ratio < 1.0)) {
    throw PreconditionError("detect_peaks: prominence ratio in (0,1)");
  }
  const double top = *std::max_element(series.begin(), series.end());
  double scale = top;
  if (!(scale > 0.0)) {
    scale = 0.0;
    for (double s : series) scale = std::max(scale, std::abs(s));
  }
  const double threshold = min_prominence_ratio * scale;

  std::vector<Peak> out;
  const std::size_t n = series.size();
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double y = series[i];
    if (!(y > series[i - 1] && y > series[i + 1])) continue;
    double left_min = y;
    for (std::size_t k = i; k-- > 0;) {
      if (series[k] > y) break;
      left_min = std::min(left_min, series[k]);
    }
    double right_min = y;
    for (std::size_t k = i + 1; k < n; ++k) {
      if (series[k] > y) break;
      right_min = std::min(right_min, series[k]);
    }
    const double prominence = y - std::max(left_min, right_min);
    if (!(prominence > threshold)) continue;

    const double x0 = grid[i - 1], x1 = grid[i], x2 = grid[i + 1];
    const double y0 = series[i - 1], y2 = series[i + 1];
    // Vertex of the interpolating parabola (divided differences).
    const double d01 = (y - y0) / (x1 - x0);
    const double d12 = (y2 - y) / (x2 - x1);
    const double curvature = (d12 - d01) / (x2 - x0);
    Peak p{x1, y, i, prominence};
    if (curvature < 0.0) {
      const double slope_at_x1 = d01 + curvature * (x1 - x0);
      const double shift = -slope_at_x1 / (2.0 * curvature);
      p.position = x1 + shift;
      p.height = y + slope_at_x1 * shift + curvature * shift * shift;
    }
    out.push_back(p);
  }
  return out;
}

/// Greedy non-maximum suppression: repeatedly take the largest remaining
/// entry as a center and discard everything within `radius` (Chebyshev
/// distance on the site coordinates). Stops when the remaining maximum falls
/// below floor_ratio × the first center's value.
inline std::vector<Index> localization_centers(const RealVector& profile, const SiteCoordinates& coords,
                                               int radius, double floor_ratio) {
  if (static_cast<std::size_t>(profile.size()) != coords.size()) {
    throw DimensionError("localization_centers: profile/coordinate length mismatch");
  }
  std::vector<bool> alive(coords.size(), true);
  std::vector<Index> centers;
  double first = -1.0;
  while (true) {
    Index best = -1;
    for (Index j = 0; j < profile.size(); ++j) {
      if (alive[static_cast<std::size_t>(j)] && (best < 0 || profile(j) > profile(best))) best = j;
    }
    if (best < 0) break;
    if (first < 0.0) {
      first = profile(best);
      if (!(first > 0.0)) break;
    } else if (profile(best) < floor_ratio * first) {
      break;
    }
    centers.push_back(best);
    const auto& c = coords[static_cast<std::size_t>(best)];
    for (std::size_t j = 0; j < coords.size(); ++j) {
      const int dist = std::max(std::abs(coords[j][0] - c[0]), std::abs(coords[j][1] - c[1]));
      if (dist <= radius) alive[j] = false;
    }
  }
  return centers;
}

inline int site_distance(const SiteCoordinates& coords, Index a, Index b) {
  const auto& p = coords[static_cast<std::size_t>(a)];
  const auto& q = coords[static_cast<std::size_t>(b)];
  return std::max(std::abs(p[0] - q[0]), std::abs(p[1] - q[1]));
}

/// True when every target has a distinct candidate within `radius`.
inline bool centers_matched(const std::vector<Index>& targets, const std::vector<Index>& candidates,
                            const SiteCoordinates& coords, int radius) {
  if (targets.size() > candidates.size()) return false;
  std::vector<bool> used(candidates.size(), false);
  for (Index t : targets) {
    bool found = false;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      if (!used[c] && site_distance(coords, t, candidates[c]) <= radius) {
        used[c] = true;
        found = true;
        break;
      }
    }
    if (!found) return false;
  }
  return true;
}

/// 10% of the bulk gap. The bulk edge is the first sorted |E| exceeding its
/// predecessor by more than 10× (isolated midgap states below it), or the
/// smallest |E| when no such jump exists.
inline double default_midgap_window(std::span<const double> abs_energies_sorted) {
  if (abs_energies_sorted.empty()) throw DegenerateError("default_midgap_window: empty spectrum");
  double edge = abs_energies_sorted[0];
  const std::size_t limit = abs_energies_sorted.size() / 2;
  for (std::size_t k = 1; k <= limit && k < abs_energies_sorted.size(); ++k) {
    const double prev = std::max(abs_energies_sorted[k - 1], 1e-300);
    if (abs_energies_sorted[k] > 10.0 * prev) {
      edge = abs_energies_sorted[k];
      break;
    }
  }
  return 0.1 * (2.0 * edge);
}

struct MidgapMode {
  Index index = 0;
  cplx energy{0.0, 0.0};
  RealVector weight;  // |ψ_j|²
  Index argmax_site = 0;
  double participation = 0.0;  // 1 / Σ|ψ_j|⁴
};

struct MidgapReport {
  std::vector<MidgapMode> modes;
  double window = 0.0;
  Index landscape_argmax = 0;
  RealVector combined_weight;  // Σ over midgap modes of |ψ_j|²
};

/// Eigenpairs of H with |E| < window, with site profiles and the landscape
/// argmax for cross-reference. A nonpositive window selects the default.
inline MidgapReport midgap_report(const Operator& h, double window = 0.0, double rcond = kDefaultRcond) {
  Vector values;
  Matrix vectors;
  if (h.is_hermitian(1e-12)) {
    HermitianEig eig = eig_hermitian(h);
    values = eig.values.cast<cplx>();
    vectors = std::move(eig.vectors);
  } else {
    EigResult eig = eig_general(h);
    values = std::move(eig.values);
    vectors = std::move(eig.vectors);
  }
  if (!(window > 0.0)) {
    std::vector<double> mags(static_cast<std::size_t>(values.size()));
    for (Index k = 0; k < values.size(); ++k) mags[static_cast<std::size_t>(k)] = std::abs(values(k));
    std::sort(mags.begin(), mags.end());
    window = default_midgap_window(mags);
  }
  MidgapReport out;
  out.window = window;
  out.combined_weight = RealVector::Zero(h.dim());
  for (Index k = 0; k < values.size(); ++k) {
    if (!(std::abs(values(k)) < window)) continue;
    MidgapMode m;
    m.index = k;
    m.energy = values(k);
    m.weight = vectors.col(k).cwiseAbs2();
    m.weight /= m.weight.sum();
    m.weight.maxCoeff(&m.argmax_site);
    m.participation = 1.0 / m.weight.cwiseAbs2().sum();
    out.combined_weight += m.weight;
    out.modes.push_back(std::move(m));
  }
  const LandscapeResult land = solve_landscape(h, rcond);
  land.amplitude.maxCoeff(&out.landscape_argmax);
  return out;
}

}  // namespace genland
