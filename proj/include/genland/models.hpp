#pragma once

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "genland/error.hpp"
#include "genland/linalg.hpp"

namespace genland {

/// Harmonic index of a Fourier block: (m, 0) for one drive frequency,
/// (m1, m2) for two.
using HarmonicKey = std::array<int, 2>;

/// Lattice position of each basis site (1-based; second entry 1 for chains).
using SiteCoordinates = std::vector<std::array<int, 2>>;

/// Fourier decomposition H(t) = Σ_k H_k e^{i k·ω t} of the time-dependent
/// part of a drive. Absent keys are zero blocks.
struct FourierDrive {
  Index base_dim = 0;
  int num_frequencies = 1;
  std::map<HarmonicKey, Matrix> blocks;

  Matrix block(HarmonicKey key) const {
    auto it = blocks.find(key);
    if (it == blocks.end()) return Matrix::Zero(base_dim, base_dim);
    return it->second;
  }
  Matrix block(int m) const { return block(HarmonicKey{m, 0}); }

  void set_block(HarmonicKey key, Matrix value) {
    if (value.rows() != base_dim || value.cols() != base_dim) {
      throw DimensionError("FourierDrive: block dimension differs from base_dim");
    }
    if (num_frequencies == 1 && key[1] != 0) {
      throw DimensionError("FourierDrive: second harmonic index on a single-frequency drive");
    }
    blocks[key] = std::move(value);
  }

  /// block(−k) == block(k)† for every key, i.e. the drive is a real signal.
  bool is_hermitian_drive() const {
    for (const auto& [key, value] : blocks) {
      if (block({-key[0], -key[1]}) != value.adjoint()) return false;
    }
    return true;
  }
};

enum class SshVariant { topological, trivial, domain_wall };

inline std::string to_string(SshVariant v) {
  switch (v) {
    case SshVariant::topological: return "topological";
    case SshVariant::trivial: return "trivial";
    case SshVariant::domain_wall: return "domain_wall";
  }
  return "unknown";
}

inline SshVariant parse_ssh_variant(const std::string& name) {
  if (name == "topological") return SshVariant::topological;
  if (name == "trivial") return SshVariant::trivial;
  if (name == "domain_wall" || name == "domain-wall") return SshVariant::domain_wall;
  throw ConfigError("unknown SSH variant '" + name + "'");
}

struct SshConfig {
  SshVariant variant = SshVariant::topological;
  int n_cells = 20;
  double t_intra = 0.5;
  double t_inter = 1.0;
};

inline Matrix sigma_x() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 1) = s(1, 0) = 1.0;
  return s;
}

inline Matrix sigma_z() {
  Matrix s = Matrix::Zero(2, 2);
  s(0, 0) = 1.0;
  s(1, 1) = -1.0;
  return s;
}

inline SiteCoordinates chain_coordinates(Index n) {
  SiteCoordinates out(static_cast<std::size_t>(n));
  for (Index j = 0; j < n; ++j) out[static_cast<std::size_t>(j)] = {static_cast<int>(j + 1), 1};
  return out;
}

/// Open Hatano–Nelson chain: t_R on the subdiagonal, t_L on the superdiagonal.
inline Operator hatano_nelson(Index n, double t_left, double t_right) {
  if (n < 2) throw DimensionError("hatano_nelson: need at least 2 sites");
  Matrix h = Matrix::Zero(n, n);
  for (Index j = 0; j + 1 < n; ++j) {
    h(j + 1, j) = t_right;
    h(j, j + 1) = t_left;
  }
  return Operator(std::move(h), "hatano_nelson");
}

/// Static Aubry–André–Harper chain, onsite λ₀cos(2παn + θ) for sites n = 1..N.
inline Operator aah_static(Index n, double hopping, double lambda0, double alpha,
                           double theta = 0.0) {
  if (n < 2) throw DimensionError("aah_static: need at least 2 sites");
  Matrix h = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    const double site = static_cast<double>(j + 1);
    h(j, j) = lambda0 * std::cos(2.0 * std::numbers::pi * alpha * site + theta);
    if (j + 1 < n) h(j, j + 1) = h(j + 1, j) = -hopping;
  }
  return Operator(std::move(h), "aah_static");
}

/// Onsite modulation A·cos(ωt)·cos(2παn + θ): harmonics ±1 carry (A/2)·D.
inline FourierDrive aah_drive(Index n, double amplitude, double alpha, double theta = 0.0) {
  if (n < 1) throw DimensionError("aah_drive: need at least 1 site");
  Matrix d = Matrix::Zero(n, n);
  for (Index j = 0; j < n; ++j) {
    d(j, j) = 0.5 * amplitude *
              std::cos(2.0 * std::numbers::pi * alpha * static_cast<double>(j + 1) + theta);
  }
  FourierDrive drive{n, 1, {}};
  drive.set_block({1, 0}, d);
  drive.set_block({-1, 0}, d);
  return drive;
}

/// −J·σ_x in the (|L⟩, |R⟩) basis.
inline Operator two_level_static(double hopping) {
  return Operator(-hopping * sigma_x(), "two_level");
}

/// s(t)σ_z/2 with s = A cos(Ωt): harmonics ±1 carry (A/4)σ_z.
inline FourierDrive two_level_drive_mono(double amplitude) {
  if (amplitude < 0) throw PreconditionError("two_level_drive_mono: amplitude must be >= 0");
  FourierDrive drive{2, 1, {}};
  drive.set_block({1, 0}, 0.25 * amplitude * sigma_z());
  drive.set_block({-1, 0}, 0.25 * amplitude * sigma_z());
  return drive;
}

/// s(t) = A cos(Ω₁t) + B cos(Ω₂t): keys (±1,0) carry (A/4)σ_z, (0,±1) carry (B/4)σ_z.
inline FourierDrive two_level_drive_duo(double amp_a, double amp_b) {
  if (amp_a < 0 || amp_b < 0) throw PreconditionError("two_level_drive_duo: amplitudes must be >= 0");
  FourierDrive drive{2, 2, {}};
  drive.set_block({1, 0}, 0.25 * amp_a * sigma_z());
  drive.set_block({-1, 0}, 0.25 * amp_a * sigma_z());
  drive.set_block({0, 1}, 0.25 * amp_b * sigma_z());
  drive.set_block({0, -1}, 0.25 * amp_b * sigma_z());
  return drive;
}

/// Number of sites of the SSH chain for a configuration.
inline Index ssh_size(const SshConfig& cfg) {
  return cfg.variant == SshVariant::domain_wall ? 2 * cfg.n_cells - 1 : 2 * cfg.n_cells;
}

/// 0-based index of the domain-wall site (between two weak bonds).
inline Index ssh_wall_site(const SshConfig& cfg) { return 2 * (cfg.n_cells / 2); }

/// Bond magnitudes b_k between sites k and k+1.
///
/// The variant fixes the arrangement of the two magnitudes: strong inside
/// cells (trivial), weak inside cells (topological), or trivial on the left
/// and topological on the right, sharing the wall site.
inline std::vector<double> ssh_bonds(const SshConfig& cfg) {
  if (cfg.n_cells < 2) throw DimensionError("ssh: need at least 2 cells");
  const double a = std::abs(cfg.t_intra);
  const double b = std::abs(cfg.t_inter);
  if (a == 0.0 || b == 0.0) throw ConfigError("ssh: hoppings must be nonzero");
  if (a == b) throw ConfigError("ssh: equal hoppings leave the chain gapless");
  const double strong = std::max(a, b);
  const double weak = std::min(a, b);

  const Index n_bonds = ssh_size(cfg) - 1;
  std::vector<double> bonds(static_cast<std::size_t>(n_bonds));
  const Index wall = ssh_wall_site(cfg);
  for (Index k = 0; k < n_bonds; ++k) {
    bool strong_bond = false;
    switch (cfg.variant) {
      case SshVariant::trivial: strong_bond = (k % 2 == 0); break;
      case SshVariant::topological: strong_bond = (k % 2 == 1); break;
      case SshVariant::domain_wall: strong_bond = (k < wall) ? (k % 2 == 0) : (k % 2 == 1); break;
    }
    bonds[static_cast<std::size_t>(k)] = strong_bond ? strong : weak;
  }
  return bonds;
}

inline Operator ssh(const SshConfig& cfg) {
  const std::vector<double> bonds = ssh_bonds(cfg);
  const Index n = ssh_size(cfg);
  Matrix h = Matrix::Zero(n, n);
  for (Index k = 0; k + 1 < n; ++k) h(k, k + 1) = h(k + 1, k) = -bonds[static_cast<std::size_t>(k)];
  return Operator(std::move(h), "ssh_" + to_string(cfg.variant));
}

/// Chiral operator Σ = diag(+1, −1, +1, …).
inline RealVector ssh_sublattice(Index n) {
  RealVector s(n);
  for (Index j = 0; j < n; ++j) s(j) = (j % 2 == 0) ? 1.0 : -1.0;
  return s;
}

/// Site index of lattice point (x, y), 0-based, on the (2n_x)×(2n_y) BBH grid.
inline Index bbh_index(Index n_x, Index x, Index y) { return x + 2 * n_x * y; }

/// Benalcazar–Bernevig–Hughes quadrupole model on n_x × n_y four-site cells.
///
/// Square lattice of (2n_x)×(2n_y) sites; bonds alternate γ (inside a cell)
/// and λ (between cells) along both axes. x-bonds on odd rows carry a minus
/// sign, giving π flux through every plaquette. Open boundaries.
inline Operator bbh(Index n_x, Index n_y, double gamma, double lambda) {
  if (n_x < 2 || n_y < 2) throw DimensionError("bbh: need at least 2x2 cells");
  const Index lx = 2 * n_x;
  const Index ly = 2 * n_y;
  Matrix h = Matrix::Zero(lx * ly, lx * ly);
  for (Index y = 0; y < ly; ++y) {
    for (Index x = 0; x < lx; ++x) {
      const Index here = bbh_index(n_x, x, y);
      if (x + 1 < lx) {
        const double t = (x % 2 == 0 ? gamma : lambda) * (y % 2 == 0 ? 1.0 : -1.0);
        const Index there = bbh_index(n_x, x + 1, y);
        h(here, there) = h(there, here) = t;
      }
      if (y + 1 < ly) {
        const double t = (y % 2 == 0 ? gamma : lambda);
        const Index there = bbh_index(n_x, x, y + 1);
        h(here, there) = h(there, here) = t;
      }
    }
  }
  return Operator(std::move(h), "bbh");
}

inline SiteCoordinates bbh_coordinates(Index n_x, Index n_y) {
  SiteCoordinates out(static_cast<std::size_t>(4 * n_x * n_y));
  for (Index y = 0; y < 2 * n_y; ++y) {
    for (Index x = 0; x < 2 * n_x; ++x) {
      out[static_cast<std::size_t>(bbh_index(n_x, x, y))] = {static_cast<int>(x + 1),
                                                              static_cast<int>(y + 1)};
    }
  }
  return out;
}

inline RealVector bbh_sublattice(Index n_x, Index n_y) {
  RealVector s(4 * n_x * n_y);
  for (Index y = 0; y < 2 * n_y; ++y) {
    for (Index x = 0; x < 2 * n_x; ++x) s(bbh_index(n_x, x, y)) = ((x + y) % 2 == 0) ? 1.0 : -1.0;
  }
  return s;
}

}  // namespace genland
