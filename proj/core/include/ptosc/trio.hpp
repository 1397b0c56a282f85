#ifndef PTOSC_TRIO_HPP
#define PTOSC_TRIO_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ptosc/chain.hpp"
#include "ptosc/region.hpp"
#include "ptosc/spectral.hpp"

namespace ptosc {

// Planar arrangement of three oscillators: lossy (x), neutral (y), gainy (z).
// The neutral oscillator has unit frequency; the outer two share omega and
// carry loss/gain amplitude gamma.  eps1 couples each outer oscillator to the
// centre, eps2 couples the outer pair directly:
//   xddot + omega^2 x + 2 gamma xdot = eps1 y + eps2 z
//   yddot + y                        = eps1 (x + z)
//   zddot + omega^2 z - 2 gamma zdot = eps1 y + eps2 x
struct TrioParams {
  double omega = 1.0;
  double gamma = 0.0;
  double eps1 = 0.0;
  double eps2 = 0.0;
};

// Cubic in mu = lambda^2 equivalent to the degree-6 secular polynomial:
// p(mu) = mu^3 - alpha mu^2 + beta mu - sigma.
struct CubicCoeffs {
  double alpha = 0.0, beta = 0.0, sigma = 0.0;

  static CubicCoeffs from(const TrioParams& t);
  double eval(double mu) const;
};

// Hessian of the trio Hamiltonian over (x, y, z, p, q, r); the general form
// takes the centre frequency omega2 as well (the default fixes omega2 = 1,
// which is the normalization TrioParams assumes).
Eigen::MatrixXd trio_hamiltonian_matrix(const TrioParams& t, double omega2 = 1.0);

// Six frequencies lambda = +-sqrt(mu) from the cubic (companion roots).
Spectrum trio_spectrum(const TrioParams& t, double imag_tol = kDefaultImagTol);
// Cross-check path: quadratic eigenvalue problem of the 3-oscillator system.
Spectrum trio_qep_spectrum(const TrioParams& t, double imag_tol = kDefaultImagTol);

// Unbroken iff all three mu roots are real and positive.
Phase trio_classify(const TrioParams& t, double imag_tol = kDefaultImagTol);
// Independent classification through the cubic's critical points: real
// critical points, positive local maximiser, sigma > 0, p > 0 at the local
// max and p < 0 at the local min.
Phase trio_classify_critical(const TrioParams& t);

// Phase intervals along eps2 at fixed eps1, boundaries bisected to refine_tol.
std::vector<PhaseInterval> trio_intervals(const TrioParams& base, double eps2_lo,
                                          double eps2_hi, int grid_points = 1400,
                                          double refine_tol = 1e-8);

struct PhaseDiagram {
  std::vector<double> eps1_grid, eps2_grid;
  std::vector<std::uint8_t> unbroken;  // row-major over (eps1, eps2)
  int unbroken_count = 0;

  bool at(int i1, int i2) const {
    return unbroken[static_cast<std::size_t>(i1) * eps2_grid.size() + i2] != 0;
  }
};

PhaseDiagram trio_phase_diagram(double omega, double gamma, double eps1_lo,
                                double eps1_hi, double eps2_lo, double eps2_hi,
                                int resolution);

// Sorted imaginary parts of all six frequencies along an eps2 sweep.
struct ImTrace {
  std::vector<double> eps2;
  std::vector<std::array<double, 6>> im;  // ascending per row
};
ImTrace trio_im_lambda_trace(double omega, double gamma, double eps1, double eps2_lo,
                             double eps2_hi, int points);

std::string phase_diagram_csv(const PhaseDiagram& d);
std::string phase_diagram_json(const PhaseDiagram& d);
std::string im_trace_csv(const ImTrace& t);

}  // namespace ptosc

#endif
