#include "ptosc/region.hpp"

#include <atomic>
#include <cmath>
#include <utility>

#include "interval_util.hpp"
#include "ptosc/errors.hpp"
#include "ptosc/io_util.hpp"
#include "ptosc/parallel.hpp"

namespace ptosc {

namespace detail {

std::vector<PhaseInterval> group_and_refine(const std::vector<double>& grid,
                                            const std::vector<Phase>& phases,
                                            const std::function<Phase(double)>& at,
                                            double refine_tol) {
  std::vector<PhaseInterval> intervals;
  if (grid.empty()) return intervals;
  PhaseInterval cur;
  cur.lo = grid.front();
  cur.phase = phases.front();
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (phases[i] == cur.phase) continue;
    double lo = grid[i - 1], hi = grid[i];
    const Phase left = cur.phase;
    while (hi - lo > refine_tol) {
      const double mid = 0.5 * (lo + hi);
      if (at(mid) == left)
        lo = mid;
      else
        hi = mid;
    }
    const double boundary = 0.5 * (lo + hi);
    cur.hi = boundary;
    cur.hi_refined = true;
    intervals.push_back(cur);
    cur = PhaseInterval{};
    cur.lo = boundary;
    cur.lo_refined = true;
    cur.phase = phases[i];
  }
  cur.hi = grid.back();
  intervals.push_back(cur);
  return intervals;
}

}  // namespace detail

std::vector<double> GammaProfile::values(int n_pairs) const {
  if (n_pairs < 1) throw InvalidArgument("n_pairs must be at least 1");
  std::vector<double> out(n_pairs);
  switch (kind) {
    case Kind::Uniform:
      for (int k = 1; k <= n_pairs; ++k) out[k - 1] = amplitude;
      break;
    case Kind::Inverse:
      // Pair k = 1 is outermost, so the divisor N-k+1 decays outward and the
      // innermost pair carries the full amplitude.
      for (int k = 1; k <= n_pairs; ++k) out[k - 1] = amplitude / (n_pairs - k + 1);
      break;
    case Kind::InverseSquare:
      for (int k = 1; k <= n_pairs; ++k) {
        const double d = n_pairs - k + 1;
        out[k - 1] = amplitude / (d * d);
      }
      break;
    case Kind::Custom:
      if (static_cast<int>(custom.size()) != n_pairs)
        throw InvalidArgument("custom profile length does not match n_pairs");
      out = custom;
      break;
  }
  return out;
}

GammaProfile GammaProfile::custom_profile(std::vector<double> gs) {
  for (double g : gs)
    if (!(g >= 0.0)) throw InvalidArgument("profile amplitudes must be nonnegative");
  GammaProfile p;
  p.kind = Kind::Custom;
  p.custom = std::move(gs);
  return p;
}

GammaProfile::Kind profile_kind_from_string(const std::string& name) {
  if (name == "uniform") return GammaProfile::Kind::Uniform;
  if (name == "inverse") return GammaProfile::Kind::Inverse;
  if (name == "inverse_square" || name == "inverse-square")
    return GammaProfile::Kind::InverseSquare;
  if (name == "custom") return GammaProfile::Kind::Custom;
  throw InvalidArgument("unknown profile \"" + name +
                        "\" (expected uniform, inverse, inverse_square or custom)");
}

std::string to_string(GammaProfile::Kind kind) {
  switch (kind) {
    case GammaProfile::Kind::Uniform: return "uniform";
    case GammaProfile::Kind::Inverse: return "inverse";
    case GammaProfile::Kind::InverseSquare: return "inverse_square";
    case GammaProfile::Kind::Custom: return "custom";
  }
  return "unknown";
}

namespace {

bool analytic_eligible(const ChainSpec& tmpl, const GammaProfile& profile) {
  if (tmpl.parity != Parity::Even) return false;
  if (profile.kind != GammaProfile::Kind::Uniform) return false;
  for (Eigen::Index i = 1; i < tmpl.omegas.size(); ++i)
    if (tmpl.omegas[i] != tmpl.omegas[0]) return false;
  return true;
}

}  // namespace

RegionReport scan_epsilon(const ChainSpec& tmpl, const GammaProfile& profile,
                          double eps_lo, double eps_hi, int grid_points,
                          double refine_tol) {
  if (!(eps_hi > eps_lo) || !std::isfinite(eps_lo) || !std::isfinite(eps_hi))
    throw InvalidArgument("epsilon range must be finite with eps_hi > eps_lo");
  if (grid_points < 16) throw InvalidArgument("grid_points must be at least 16");
  if (!(refine_tol > 0.0)) throw InvalidArgument("refine_tol must be positive");

  const int N = tmpl.n_pairs;
  const std::vector<double> gvals = profile.values(N);
  const Eigen::VectorXd gammas =
      Eigen::Map<const Eigen::VectorXd>(gvals.data(), static_cast<Eigen::Index>(N));
  const bool analytic = analytic_eligible(tmpl, profile);

  auto classify_at = [&](double eps) -> std::pair<Phase, double> {
    if (analytic) {
      const Spectrum s = analytic_spectrum(N, tmpl.omegas[0], profile.amplitude, eps);
      return {s.phase, s.max_abs_imag};
    }
    const ChainSpec spec = make_chain(N, tmpl.parity, tmpl.omegas, gammas,
                                      Eigen::VectorXd::Constant(N, eps));
    const Spectrum s = qep_spectrum(spec);
    return {s.phase, s.max_abs_imag};
  };

  RegionReport report;
  report.param = "epsilon";
  report.refine_tol = refine_tol;
  report.grid.resize(grid_points);
  report.max_im.resize(grid_points);
  report.phases.resize(grid_points);
  const double step = (eps_hi - eps_lo) / grid_points;
  for (int i = 0; i < grid_points; ++i) report.grid[i] = eps_lo + step * (i + 1);
  parallel_for(grid_points, [&](int i) {
    const auto [phase, max_im] = classify_at(report.grid[i]);
    report.phases[i] = phase;
    report.max_im[i] = max_im;
  });
  report.intervals = detail::group_and_refine(
      report.grid, report.phases, [&](double e) { return classify_at(e).first; },
      refine_tol);
  // The grid starts one step above eps_lo and rounding can nudge its last
  // point; pin the outer endpoints so the intervals partition the requested
  // sweep range exactly.
  if (!report.intervals.empty()) {
    report.intervals.front().lo = eps_lo;
    report.intervals.back().hi = eps_hi;
  }
  return report;
}

std::optional<std::pair<double, double>> unbroken_window(int n_pairs, double omega,
                                                         double gamma) {
  if (n_pairs < 1) throw InvalidArgument("n_pairs must be at least 1");
  if (!(omega > 0.0)) throw InvalidArgument("omega must be positive");
  if (gamma < 0.0) throw InvalidArgument("gamma must be nonnegative");
  if (2.0 * gamma * gamma >= omega * omega) return std::nullopt;
  const ZRoots z = analytic_z_roots(n_pairs);
  const double lo = gamma * std::sqrt(omega * omega - gamma * gamma) / z.z_min;
  const double hi = omega * omega / (2.0 * z.z_max);
  if (!(lo < hi)) return std::nullopt;
  return std::make_pair(lo, hi);
}

double gamma_crit(int n_pairs, double omega, GammaProfile::Kind kind, double search_tol,
                  double upper) {
  if (n_pairs < 1) throw InvalidArgument("n_pairs must be at least 1");
  if (!(omega > 0.0)) throw InvalidArgument("omega must be positive");
  if (!(search_tol > 0.0)) throw InvalidArgument("search_tol must be positive");
  if (kind == GammaProfile::Kind::Custom)
    throw InvalidArgument("amplitude search needs a parametric profile");
  if (upper <= 0.0) upper = omega;

  constexpr int kEpsPoints = 400;
  std::vector<double> eps(kEpsPoints);
  for (int i = 0; i < kEpsPoints; ++i)
    eps[i] = 1.5 * omega * omega * (i + 1) / kEpsPoints;

  const bool analytic = kind == GammaProfile::Kind::Uniform;
  const Eigen::VectorXd omegas = Eigen::VectorXd::Constant(n_pairs, omega);

  // True when some epsilon in the scan window is unbroken at amplitude g.
  auto has_window = [&](double g) -> bool {
    if (analytic) {
      for (double e : eps)
        if (analytic_spectrum(n_pairs, omega, g, e).phase == Phase::Unbroken)
          return true;
      return false;
    }
    GammaProfile p;
    p.kind = kind;
    p.amplitude = g;
    const std::vector<double> gvals = p.values(n_pairs);
    const Eigen::VectorXd gammas =
        Eigen::Map<const Eigen::VectorXd>(gvals.data(), n_pairs);
    std::atomic<bool> found{false};
    parallel_for(kEpsPoints, [&](int i) {
      if (found.load(std::memory_order_relaxed)) return;
      const ChainSpec spec = make_chain(n_pairs, Parity::Even, omegas, gammas,
                                        Eigen::VectorXd::Constant(n_pairs, eps[i]));
      if (qep_spectrum(spec).phase == Phase::Unbroken)
        found.store(true, std::memory_order_relaxed);
    });
    return found.load();
  };

  if (has_window(upper))
    throw RangeTooSmall("unbroken window still present at the gamma search bound");
  double lo = 0.0, hi = upper;
  while (hi - lo > search_tol) {
    const double mid = 0.5 * (lo + hi);
    if (has_window(mid))
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

std::string phase_table_csv(const RegionReport& report) {
  std::string out = report.param + ",max_im_lambda,phase\n";
  for (std::size_t i = 0; i < report.grid.size(); ++i) {
    out += g17(report.grid[i]);
    out += ",";
    out += g17(report.max_im[i]);
    out += ",";
    out += report.phases[i] == Phase::Unbroken ? "unbroken" : "broken";
    out += "\n";
  }
  if (!report.intervals.empty()) {
    out += "# intervals: " + std::to_string(report.intervals.size()) + "\n";
    for (const PhaseInterval& iv : report.intervals) {
      out += "# ";
      out += g17(iv.lo);
      out += " ";
      out += g17(iv.hi);
      out += " ";
      out += iv.phase == Phase::Unbroken ? "unbroken" : "broken";
      out += "\n";
    }
  }
  return out;
}

void emit_phase_table(const RegionReport& report, const std::string& path) {
  atomic_write(path, phase_table_csv(report));
}

}  // namespace ptosc
