#pragma once

#include <array>
#include <string>
#include <vector>

#include "genland/error.hpp"
#include "genland/linalg.hpp"
#include "genland/models.hpp"

namespace genland {

/// Bijection between flat Sambe indices and (site, m1[, m2]) tuples.
///
/// Site runs fastest, then m1, then m2. Sites are 0-based; harmonics run
/// over [−M_i, M_i].
class SambeIndexMap {
 public:
  struct Tuple {
    Index site = 0;
    HarmonicKey harmonics{0, 0};
    bool operator==(const Tuple&) const = default;
  };

  SambeIndexMap() = default;
  SambeIndexMap(Index base_dim, std::vector<int> truncations)
      : base_dim_(base_dim), truncations_(std::move(truncations)) {
    if (base_dim_ < 1) throw DimensionError("SambeIndexMap: base_dim must be positive");
    if (truncations_.empty() || truncations_.size() > 2) {
      throw DimensionError("SambeIndexMap: one or two harmonic axes supported");
    }
    for (int m : truncations_) {
      if (m < 0) throw PreconditionError("SambeIndexMap: truncation must be >= 0");
    }
  }

  Index base_dim() const { return base_dim_; }
  int num_axes() const { return static_cast<int>(truncations_.size()); }
  int truncation(int axis) const { return truncations_.at(static_cast<std::size_t>(axis)); }
  const std::vector<int>& truncations() const { return truncations_; }

  Index harmonic_count(int axis) const { return 2 * truncation(axis) + 1; }
  Index harmonic_blocks() const {
    Index n = 1;
    for (int axis = 0; axis < num_axes(); ++axis) n *= harmonic_count(axis);
    return n;
  }
  Index flat_dim() const { return base_dim_ * harmonic_blocks(); }

  bool contains(HarmonicKey h) const {
    for (int axis = 0; axis < 2; ++axis) {
      const int bound = axis < num_axes() ? truncation(axis) : 0;
      if (h[static_cast<std::size_t>(axis)] < -bound || h[static_cast<std::size_t>(axis)] > bound) {
        return false;
      }
    }
    return true;
  }

  /// Index of the harmonic block (m1, m2) among all blocks.
  Index block_index(HarmonicKey h) const {
    if (!contains(h)) throw RangeError("SambeIndexMap: harmonic outside truncation window");
    Index b = h[0] + truncation(0);
    if (num_axes() == 2) b += harmonic_count(0) * (h[1] + truncation(1));
    return b;
  }

  Index flatten(const Tuple& t) const {
    if (t.site < 0 || t.site >= base_dim_) throw RangeError("SambeIndexMap: site out of range");
    return t.site + base_dim_ * block_index(t.harmonics);
  }

  Tuple unflatten(Index flat) const {
    if (flat < 0 || flat >= flat_dim()) throw RangeError("SambeIndexMap: flat index out of range");
    Tuple t;
    t.site = flat % base_dim_;
    Index block = flat / base_dim_;
    t.harmonics[0] = static_cast<int>(block % harmonic_count(0)) - truncation(0);
    if (num_axes() == 2) t.harmonics[1] = static_cast<int>(block / harmonic_count(0)) - truncation(1);
    return t;
  }

 private:
  Index base_dim_ = 0;
  std::vector<int> truncations_;
};

struct SambeOperator {
  Operator matrix;
  SambeIndexMap index_map;
  std::vector<double> frequencies;
  double hbar = 1.0;
  bool truncated = false;  // some drive harmonics fell outside the window
};

namespace detail {

inline SambeOperator assemble_sambe(const Operator& h0, const FourierDrive& drive,
                                    std::vector<double> omegas, std::vector<int> truncations) {
  for (double w : omegas) {
    if (!(w > 0.0)) throw PreconditionError("build_sambe: drive frequencies must be positive");
  }
  if (drive.base_dim != h0.dim()) throw DimensionError("build_sambe: drive.base_dim != H0.dim");
  if (drive.num_frequencies != static_cast<int>(omegas.size())) {
    throw PreconditionError("build_sambe: drive has " + std::to_string(drive.num_frequencies) +
                            " frequencies, builder expects " + std::to_string(omegas.size()));
  }

  SambeIndexMap map(h0.dim(), truncations);
  const Index n = h0.dim();
  const Index blocks = map.harmonic_blocks();
  Matrix hs = Matrix::Zero(map.flat_dim(), map.flat_dim());

  const int m2_max = map.num_axes() == 2 ? map.truncation(1) : 0;
  const int m1_max = map.truncation(0);
  for (Index b = 0; b < blocks; ++b) {
    const HarmonicKey h = map.unflatten(b * n).harmonics;
    double shift = h[0] * omegas[0];
    if (omegas.size() == 2) shift += h[1] * omegas[1];
    hs.block(b * n, b * n, n, n) = h0.matrix();
    hs.block(b * n, b * n, n, n).diagonal().array() += shift;
  }

  std::string note;
  bool truncated = false;
  for (const auto& [key, value] : drive.blocks) {
    // A coupling k reaches some block pair only if |k_i| <= 2 M_i.
    if (std::abs(key[0]) > 2 * m1_max || std::abs(key[1]) > 2 * m2_max) {
      truncated = true;
      note += " (" + std::to_string(key[0]) + "," + std::to_string(key[1]) + ")";
      continue;
    }
    for (int m2 = -m2_max; m2 <= m2_max; ++m2) {
      for (int m1 = -m1_max; m1 <= m1_max; ++m1) {
        const HarmonicKey row{m1, m2};
        const HarmonicKey col{m1 - key[0], m2 - key[1]};
        if (!map.contains(col)) continue;
        hs.block(map.block_index(row) * n, map.block_index(col) * n, n, n) += value;
      }
    }
  }

  std::string label = "sambe(" + h0.label() + ")";
  if (truncated) label += " [truncated harmonics:" + note + "]";
  return SambeOperator{Operator(std::move(hs), label), std::move(map), std::move(omegas), 1.0,
                       truncated};
}

}  // namespace detail

/// Sambe operator ⟨j,m|H_S|j',m'⟩ = ⟨j|H_{m−m'}|j'⟩ + mω δ_jj' δ_mm' for m ∈ [−M, M].
inline SambeOperator build_sambe_mono(const Operator& h0, const FourierDrive& drive, double omega,
                                      int truncation) {
  return detail::assemble_sambe(h0, drive, {omega}, {truncation});
}

/// Two-frequency Sambe operator on H ⊗ ℓ²(ℤ²), diagonal shift m1ω1 + m2ω2.
inline SambeOperator build_sambe_duo(const Operator& h0, const FourierDrive& drive, double omega1,
                                     double omega2, int truncation1, int truncation2) {
  return detail::assemble_sambe(h0, drive, {omega1, omega2}, {truncation1, truncation2});
}

/// w(j) = Σ_m |Ψ(j, m)|².
inline RealVector sambe_weight_profile(const Vector& vec, const SambeIndexMap& map) {
  if (vec.size() != map.flat_dim()) throw DimensionError("sambe_weight_profile: length mismatch");
  const Index n = map.base_dim();
  RealVector w = RealVector::Zero(n);
  for (Index k = 0; k < vec.size(); ++k) w(k % n) += std::norm(vec(k));
  return w;
}

/// Σ_m a(j, m) for a nonnegative amplitude over Sambe indices.
inline RealVector sambe_site_marginal(const RealVector& amplitude, const SambeIndexMap& map) {
  if (amplitude.size() != map.flat_dim()) throw DimensionError("sambe_site_marginal: length mismatch");
  const Index n = map.base_dim();
  RealVector w = RealVector::Zero(n);
  for (Index k = 0; k < amplitude.size(); ++k) w(k % n) += amplitude(k);
  return w;
}

}  // namespace genland
