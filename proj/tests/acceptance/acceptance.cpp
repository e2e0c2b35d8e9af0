// Acceptance run: one PASS/FAIL line per criterion, info lines indented.
// Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "genland/genland.hpp"
#include "genland/experiments/config.hpp"
#include "genland/experiments/runners.hpp"
#include "support/oracles.hpp"

using namespace genland;
using namespace genland::experiments;
namespace gt = genland::testing;

namespace {

struct Tally {
  std::size_t checks = 0;
  std::size_t violations = 0;
  void add(const RunResult& r) {
    checks += r.bound_checks;
    violations += r.bound_violations;
  }
  void add(const NormBoundCheck& c) {
    ++checks;
    if (!c.holds) ++violations;
  }
};

Tally g_bounds;
int g_failed = 0;

void info(const char* fmt, auto... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
}

void verdict(int id, const std::string& name, bool pass, double seconds, double budget, const std::string& detail) {
  const bool in_time = budget <= 0.0 || seconds < budget;
  const bool ok = pass && in_time;
  if (!ok) ++g_failed;
  std::printf("%s  C%d %s: %s [%.2f s", ok ? "PASS" : "FAIL", id, name.c_str(), detail.c_str(), seconds);
  if (budget > 0.0) std::printf(" / budget %.0f s%s", budget, in_time ? "" : ", over budget");
  std::printf("]\n");
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

RunConfig make(const std::string& exp, const std::vector<std::string>& overrides = {}) {
  return load_config(exp, std::nullopt, overrides);
}

double j0_zero_oracle(int k) {
  const double brackets[][2] = {{2.0, 3.0}, {5.0, 6.0}, {8.0, 9.0}};
  return gt::bisect([](double x) { return gt::bessel_j0_series(x, 60); }, brackets[k][0], brackets[k][1]);
}

double variance(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return s / static_cast<double>(v.size() - 1);
}

// Square matrix with prescribed singular values (zeros allowed).
Matrix with_singular_values(const std::vector<double>& sv, std::mt19937_64& rng) {
  const int d = static_cast<int>(sv.size());
  const Matrix u = gt::random_complex(d, d, rng).householderQr().householderQ();
  const Matrix v = gt::random_complex(d, d, rng).householderQr().householderQ();
  Eigen::VectorXd s(d);
  for (int k = 0; k < d; ++k) s(k) = sv[static_cast<std::size_t>(k)];
  return u * s.cast<cplx>().asDiagonal() * v.adjoint();
}

void criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(20240601);
  std::uniform_int_distribution<int> dim(2, 50);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const int d = dim(rng);
    const Matrix h = gt::random_hpd(d, rng);
    const LandscapeResult r = solve_landscape(Operator(h));
    g_bounds.add(check_norm_bound(r));
    const Vector u = gt::gauss_solve(h, Vector::Ones(d));
    const Vector w = gt::gauss_solve(h, u);
    worst = std::max(worst, (r.v_complex - w).cwiseAbs().maxCoeff() / r.v_complex.cwiseAbs().maxCoeff());
  }
  verdict(1, "hermitian reduction", worst <= 1e-9, seconds_since(t0), 5.0,
          fmt("max ||v - H^-1 u||inf / ||v||inf = %.3e over 50 HPD matrices (tol 1e-9)", worst));
}

void criterion3() {
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult r = run_hn(make("hn"));
  g_bounds.add(r);
  const double p = r.summary["pearson"], s = r.summary["spearman"];
  long land = -1, dens = -1;
  for (const auto& prof : r.summary["profiles"]) {
    if (std::abs(prof["r"].get<double>() - 0.9) < 1e-12) {
      land = prof["landscape_argmax_site"];
      dens = prof["density_argmax_site"];
    }
  }
  const bool ok = p >= 0.95 && s == 1.0 && land >= 1 && land <= 5 && dens >= 1 && dens <= 5;
  verdict(3, "hatano-nelson skin effect", ok, seconds_since(t0), 60.0,
          fmt("pearson=%.6f (>=0.95) spearman=%.6f (==1) argmax@r=0.9 landscape=%ld density=%ld (<=5)", p, s, land,
              dens));
}

void criterion4() {
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult m6 = run_cdt_mono(make("cdt-mono"));
  const RunResult m4 = run_cdt_mono(make("cdt-mono", {"truncation=4"}));
  const RunResult m8 = run_cdt_mono(make("cdt-mono", {"truncation=8"}));
  g_bounds.add(m6);
  g_bounds.add(m4);
  g_bounds.add(m8);
  const auto& xs = m6.report.axes[0].values;
  const double dx = xs[1] - xs[0];

  bool ok = m6.summary["peaks"].size() >= 3 && m4.summary["peaks"].size() >= 3 && m8.summary["peaks"].size() >= 3;
  if (!ok) {
    verdict(4, "cdt monochromatic", false, seconds_since(t0), 600.0,
            fmt("fewer than three peaks (M=6: %zu, M=4: %zu, M=8: %zu)", m6.summary["peaks"].size(),
                m4.summary["peaks"].size(), m8.summary["peaks"].size()));
    return;
  }
  double worst_zero = 0.0, worst_gap = 0.0, worst_shift = 0.0;
  for (int k = 0; k < 3; ++k) {
    const double pos = m6.summary["peaks"][k]["position"];
    const double zero = j0_zero_oracle(k);
    const double gap_min = m6.summary["peaks"][k]["gap_minimum"];
    const double off_zero = std::abs(pos - zero) / zero;
    const double off_gap = std::abs(pos - gap_min) / gap_min;
    const double shift = std::abs(pos - m8.summary["peaks"][k]["position"].get<double>());
    worst_zero = std::max(worst_zero, off_zero);
    worst_gap = std::isnan(off_gap) ? off_gap : std::max(worst_gap, off_gap);
    worst_shift = std::max(worst_shift, shift);
    info("peak %d: M=6 at %.5f, J0 zero %.5f (%.3f%%), gap minimum %.5f (%.3f%%), M=8 shift %.2e", k + 1, pos, zero,
         100 * off_zero, gap_min, 100 * off_gap, shift);
  }
  const double third4 = m4.summary["peaks"][2]["position"];
  const double off4 = std::abs(third4 - j0_zero_oracle(2)) / j0_zero_oracle(2);
  info("M=4 third peak at %.5f, offset %.3f%% from the J0 zero", third4, 100 * off4);
  ok = worst_zero <= 0.02 && worst_gap <= 0.02 && off4 >= 0.06 && off4 <= 0.11 && worst_shift < dx;
  verdict(4, "cdt monochromatic", ok, seconds_since(t0), 600.0,
          fmt("J0 offset max %.3f%% (<=2%%), gap offset max %.3f%% (<=2%%), M=4 offset %.2f%% (6..11%%), "
              "M=6 vs M=8 shift %.2e (< dx=%.4f)",
              100 * worst_zero, 100 * worst_gap, 100 * off4, worst_shift, dx));
}

void criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  const RunConfig cfg = make("cdt-duo");
  const RunResult r = run_cdt_duo(cfg);
  g_bounds.add(r);
  const double p = r.summary["pearson"];
  info("spearman=%.4f pearson(log10 v_max, min_PL)=%.4f", r.summary["spearman"].get<double>(),
       r.summary["pearson_log10"].get<double>());

  // B = 0 row against the monochromatic landscape at the same A/omega1.
  const double j = cfg.real("hopping"), w1 = cfg.real("omega1"), w2 = cfg.real("omega2_ratio") * w1;
  const int m1 = cfg.small_int("truncation1"), m2 = cfg.small_int("truncation2");
  const auto& xs = r.report.axes[0].values;
  const auto vmax = r.report.table.numeric_column("v_max_tot");
  const auto minpl = r.report.table.numeric_column("min_PL");
  const double dt_mono = (2.0 * std::numbers::pi / w1) / 2000.0;
  double worst_literal = 0.0, worst_sum = 0.0, worst_pl = 0.0;
  int literal_misses = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double a = xs[i] * w1;
    const double mono =
        solve_landscape(build_sambe_mono(two_level_static(j), two_level_drive_mono(a), w1, m1), cfg.real("rcond"))
            .v_max;
    const double lit = std::abs(vmax[i] - mono) / mono;
    worst_literal = std::max(worst_literal, lit);
    if (lit > 1e-8) {
      ++literal_misses;
      info("B=0 at A/omega1=%.2f: duo v_max=%.6e, mono v_max=%.6e (rel %.2e)", xs[i], vmax[i], mono, lit);
    }
    // Direct sum over the second harmonic index of shifted monochromatic blocks.
    double block_max = 0.0;
    for (int n = -m2; n <= m2; ++n) {
      const Operator shifted(two_level_static(j).matrix() + n * w2 * Matrix::Identity(2, 2));
      block_max = std::max(
          block_max,
          solve_landscape(build_sambe_mono(shifted, two_level_drive_mono(a), w1, m1), cfg.real("rcond")).v_max);
    }
    worst_sum = std::max(worst_sum, std::abs(vmax[i] - block_max) / block_max);
    const double pl = min_left_population(DriveSignal::mono(j, a, w1), basis_left(), cfg.small_int("periods"), dt_mono);
    worst_pl = std::max(worst_pl, std::abs(pl - minpl[i]));
  }
  info("B=0 row vs max over shifted monochromatic blocks: max rel diff %.2e", worst_sum);
  info("B=0 row min_PL vs monochromatic dynamics: max abs diff %.2e", worst_pl);
  const bool ok = p >= 0.75 && worst_literal <= 1e-8;
  verdict(5, "cdt bichromatic", ok, seconds_since(t0), 1800.0,
          fmt("pearson(v_max, min_PL)=%.4f (>=0.75); B=0 row vs monochromatic sweep max rel diff %.2e at %d/%zu "
              "points (tol 1e-8)",
              p, worst_literal, literal_misses, xs.size()));
}

void criterion6() {
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult r = run_aah(make("aah"));
  g_bounds.add(r);
  const auto ws = r.report.table.numeric_column("omega");
  const auto v = r.report.table.numeric_column("v_max_tot");
  std::vector<double> low, high;
  for (std::size_t i = 0; i < ws.size(); ++i) {
    if (ws[i] >= 1.0 && ws[i] <= 4.0) low.push_back(v[i]);
    if (ws[i] >= 8.0 && ws[i] <= 10.0) high.push_back(v[i]);
  }
  const double vl = variance(low), vh = variance(high);
  const double norm_err = r.summary["dos_max_normalization_error"];
  info("%zu points in [1,4], %zu in [8,10]; var low %.3e, var high %.3e", low.size(), high.size(), vl, vh);
  verdict(6, "driven aah", vl >= 10.0 * vh && norm_err <= 1e-12, seconds_since(t0), 1200.0,
          fmt("variance ratio %.3e (>=10), DOS normalization error %.2e (<=1e-12)", vl / vh, norm_err));
}

void criterion7() {
  const auto t0 = std::chrono::steady_clock::now();
  const RunResult s = run_topology(make("ssh"));
  const RunResult b = run_topology(make("bbh"));
  g_bounds.add(s);
  g_bounds.add(b);
  bool ok = true;
  std::string detail;
  for (const auto& c : s.summary["cases"]) {
    const std::string v = c["variant"];
    const long count = c["midgap_count"];
    if (v == "topological") {
      const bool good = count == 2 && c["colocalized"].get<bool>();
      ok = ok && good;
      detail += fmt("topological %ld modes, colocalized=%d; ", count, int(c["colocalized"].get<bool>()));
      info("topological mode centers %s, landscape peaks %s", c["mode_centers"].dump().c_str(),
           c["landscape_peaks"].dump().c_str());
    } else if (v == "domain_wall") {
      const bool good = count == 1 && c["mode_at_wall"].get<bool>();
      ok = ok && good;
      detail += fmt("domain wall %ld mode, at wall=%d; ", count, int(c["mode_at_wall"].get<bool>()));
      info("domain wall: wall site %ld, kernel argmax %ld, landscape colocalized=%d", c["wall_site"].get<long>(),
           c["kernel_argmax_site"].get<long>(), int(c["colocalized"].get<bool>()));
    } else if (v == "trivial") {
      ok = ok && count == 0;
      detail += fmt("trivial %ld modes; ", count);
    }
  }
  const double ratio = s.summary["sigma_ratio_trivial_over_topological"];
  ok = ok && ratio >= 100.0;
  const auto& bc = b.summary["cases"][0];
  const long corners = bc["midgap_count"];
  ok = ok && corners == 4 && bc["colocalized"].get<bool>();
  info("bbh mode centers %s, landscape peaks %s", bc["mode_centers"].dump().c_str(),
       bc["landscape_peaks"].dump().c_str());
  detail += fmt("sigma ratio %.3e (>=100); bbh %ld modes, colocalized=%d", ratio, corners,
                int(bc["colocalized"].get<bool>()));
  verdict(7, "topology", ok, seconds_since(t0), 60.0, detail);
}

void criterion8() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> dim(2, 40);
  std::uniform_real_distribution<double> sv(0.1, 5.0);
  double worst = 0.0;
  int deficient = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const int d = dim(rng);
    Matrix h;
    if (trial % 2 == 0) {
      h = gt::random_complex(d, d, rng);
    } else {
      std::vector<double> s(static_cast<std::size_t>(d));
      for (auto& x : s) x = sv(rng);
      const int zeros = 1 + trial % std::max(1, d / 2);
      for (int k = 0; k < zeros && k < d - 1; ++k) s[static_cast<std::size_t>(k)] = 0.0;
      h = with_singular_values(s, rng);
      ++deficient;
    }
    const LandscapeResult a = solve_landscape(Operator(h));
    g_bounds.add(check_norm_bound(a));
    const PseudoSolveResult b = landscape_via_normal_operator(Operator(h));
    const double scale = std::max(a.v_complex.cwiseAbs().maxCoeff(), b.x.cwiseAbs().maxCoeff());
    worst = std::max(worst, (a.v_complex - b.x).cwiseAbs().maxCoeff() / scale);
  }
  verdict(8, "oracle equivalence", worst <= 1e-8, seconds_since(t0), 10.0,
          fmt("max rel diff SVD vs H^dag H eigen route %.3e over 100 matrices (%d rank-deficient, tol 1e-8)", worst,
              deficient));
}

void criterion9() {
  const auto t0 = std::chrono::steady_clock::now();
  const double w = 10.0, period = 2.0 * std::numbers::pi / w, dt = period / 2000.0;
  double drift = 0.0;
  for (double x : {0.0, 2.5, 5.0, 7.5, 10.0}) {
    const Trajectory tr = propagate(DriveSignal::mono(1.0, x * w, w), State2(std::sqrt(3.0) / 2.0, 0.5),
                                    100 * period, dt);
    drift = std::max(drift, tr.max_norm_drift());
  }
  const DriveSignal d = DriveSignal::mono(1.0, 1.0 * w, w);
  const double coarse = period / 200.0;
  const State2 a = propagate_final(d, basis_left(), 10 * period, coarse);
  const State2 b = propagate_final(d, basis_left(), 10 * period, coarse / 2);
  const State2 c = propagate_final(d, basis_left(), 10 * period, coarse / 4);
  const double ratio = (a - b).norm() / (b - c).norm();

  double worst16 = 0.0, worst6 = 0.0;
  for (int k = 0; k <= 20; ++k) {
    const double x = 0.5 * k;
    const MonodromyResult m = monodromy_quasienergies(DriveSignal::mono(1.0, x * w, w), dt);
    const auto smallest = [&](int trunc) {
      return eigenvalues_hermitian(build_sambe_mono(two_level_static(1.0), two_level_drive_mono(x * w), w, trunc).matrix)
          .cwiseAbs()
          .minCoeff();
    };
    worst16 = std::max(worst16, std::abs(m.smallest_abs() - smallest(16)));
    worst6 = std::max(worst6, std::abs(m.smallest_abs() - smallest(6)));
  }
  info("monodromy vs Sambe at the default M=6: max |diff| %.3e over A/omega in [0,10]", worst6);
  verdict(9, "dynamics contracts", drift <= 1e-7 && ratio >= 12.0 && ratio <= 20.0 && worst16 <= 1e-6,
          seconds_since(t0), 0.0,
          fmt("norm drift %.2e (<=1e-7), step-halving ratio %.3f (12..20), monodromy vs Sambe (M=16) %.2e (<=1e-6)",
              drift, ratio, worst16));
}

void criterion2(double seconds) {
  verdict(2, "norm-bound chain", g_bounds.violations == 0 && g_bounds.checks > 0, seconds, 0.0,
          fmt("%zu violations in %zu solves (rel tol 1e-8)", g_bounds.violations, g_bounds.checks));
}

}  // namespace

int main() {
  std::printf("genland acceptance %s\n", GENLAND_VERSION);
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::function<void()>> order{criterion1, criterion3, criterion4, criterion5,
                                                 criterion6, criterion7, criterion8, criterion9};
  for (const auto& run : order) {
    try {
      run();
    } catch (const std::exception& e) {
      ++g_failed;
      std::printf("FAIL  criterion aborted: %s\n", e.what());
    }
  }
  {
    // Bounds suite counts toward the norm-chain tally too.
    const RunResult r = run_bounds(make("bounds"));
    g_bounds.add(r);
    info("bounds suite: all checks pass=%d", int(r.summary["all_checks_pass"].get<bool>()));
  }
  criterion2(0.0);
  std::printf("%d criteria failed, total %.1f s\n", g_failed, seconds_since(t0));
  return g_failed == 0 ? 0 : 1;
}
