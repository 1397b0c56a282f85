#ifndef PTOSC_REGION_HPP
#define PTOSC_REGION_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ptosc/chain.hpp"
#include "ptosc/spectral.hpp"

namespace ptosc {

// Loss/gain amplitude profile over the mirror pairs k = 1..N (k = 1 is the
// outermost pair).  The decaying profiles place the full amplitude on the
// innermost pair and decay outward:
//   inverse:        gamma_k = gamma / (N - k + 1)
//   inverse-square: gamma_k = gamma / (N - k + 1)^2
struct GammaProfile {
  enum class Kind { Uniform, Inverse, InverseSquare, Custom };
  Kind kind = Kind::Uniform;
  double amplitude = 0.0;
  std::vector<double> custom;  // used by Kind::Custom, length n_pairs

  std::vector<double> values(int n_pairs) const;

  static GammaProfile uniform(double g) { return {Kind::Uniform, g, {}}; }
  static GammaProfile inverse(double g) { return {Kind::Inverse, g, {}}; }
  static GammaProfile inverse_square(double g) { return {Kind::InverseSquare, g, {}}; }
  static GammaProfile custom_profile(std::vector<double> gs);
};

GammaProfile::Kind profile_kind_from_string(const std::string& name);
std::string to_string(GammaProfile::Kind kind);

struct PhaseInterval {
  double lo = 0.0, hi = 0.0;
  Phase phase = Phase::Unbroken;
  // Whether the respective endpoint was located by bisection between two
  // differently classified grid points (sweep-range edges are not).
  bool lo_refined = false, hi_refined = false;
};

struct RegionReport {
  std::string param = "epsilon";
  std::vector<double> grid;
  std::vector<double> max_im;  // max |Im lambda| at each grid point
  std::vector<Phase> phases;
  std::vector<PhaseInterval> intervals;
  double refine_tol = 1e-8;
};

// Sweeps the coupling epsilon over (lo, hi] on a uniform grid, classifies
// each point (closed form for uniform profiles on even chains, quadratic
// eigenvalue problem otherwise) and refines the phase boundaries by
// bisection.  The template supplies n_pairs, parity and the omega profile;
// gammas come from the profile and epsilons from the sweep.
RegionReport scan_epsilon(const ChainSpec& tmpl, const GammaProfile& profile,
                          double eps_lo, double eps_hi, int grid_points = 400,
                          double refine_tol = 1e-8);

// Closed-form unbroken window of the uniform even chain:
//   gamma sqrt(omega^2 - gamma^2) / z_min  <  eps  <  omega^2 / (2 z_max),
// empty when inverted or when 2 gamma^2 >= omega^2.
std::optional<std::pair<double, double>> unbroken_window(int n_pairs, double omega,
                                                         double gamma);

// Supremum loss/gain amplitude for which an unbroken epsilon window survives,
// located by bisection over gamma in (0, upper] with an inner epsilon scan of
// 400 grid points over (0, 1.5 omega^2].  Throws RangeTooSmall if the window
// still exists at the upper search bound (default omega).
double gamma_crit(int n_pairs, double omega, GammaProfile::Kind kind,
                  double search_tol = 1e-4, double upper = -1.0);

// CSV table (param, max_im_lambda, phase) with a trailing interval summary in
// gnuplot comment lines.
void emit_phase_table(const RegionReport& report, const std::string& path);
std::string phase_table_csv(const RegionReport& report);

}  // namespace ptosc

#endif
