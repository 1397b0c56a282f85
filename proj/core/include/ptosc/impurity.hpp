#ifndef PTOSC_IMPURITY_HPP
#define PTOSC_IMPURITY_HPP

#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace ptosc {

// Continuum limit of the chain: wave speed c, background frequency omega
// (stored squared), coupling epsilon and loss/gain rate gamma.  The mapping
// from the discrete mass-spring parameters is
//   c^2 = k / rho,  gamma = Gamma / rho,
//   omega^2 = (mu1 nu1^2 + mu2 nu2^2) / rho,  epsilon = -mu2 nu2^2 / rho.
struct ContinuumParams {
  double c = 1.0;
  double omega2 = 1.0;
  double epsilon = 0.0;
  double gamma = 0.0;
};

ContinuumParams continuum_parameters(double rho, double k, double Gamma, double mu1,
                                     double nu1, double mu2, double nu2);

// Localized mode pinned to a point-like loss/gain impurity at x = 0,
// oscillating at frequency Omega.  Exists only for
// Omega^2 in (omega^2 - eps, omega^2 + eps) with eps > 0:
//   a^2 = omega^2 - Omega^2 + eps,  b^2 = Omega^2 - omega^2 + eps,
//   s(x) = exp(-a |x| / c),
//   d(x) = i (a c / (gamma Omega)) cos(b x / c) + i (gamma Omega / (b c)) sin(b |x| / c).
// The verification bundle reports bulk residuals of the stationary equations
// (analytic second derivatives, away from the impurity) and the residuals of
// the two derivative-jump conditions at x = 0.
struct ImpurityMode {
  double Omega = 0.0;
  double a = 0.0, b = 0.0;
  Eigen::VectorXd x;
  Eigen::VectorXcd s, d;
  double bulk_residual_s = 0.0, bulk_residual_d = 0.0;
  double jump_residual_s = 0.0, jump_residual_d = 0.0;
  double window_lo = 0.0, window_hi = 0.0;  // admissible Omega^2 range
};

// half_width < 0 picks 10 c / a; points must be odd so the grid contains 0.
ImpurityMode impurity_mode(const ContinuumParams& params, double Omega,
                           double half_width = -1.0, int points = 4001);

enum class Boundary { Absorbing, Periodic };

struct FdGrid {
  double x_min = -1.0, x_max = 1.0;
  int points = 0;
};

struct FdConfig {
  FdGrid grid;
  double t_end = 0.0;
  double dt = 0.0;
  Boundary boundary = Boundary::Absorbing;
  double sponge_fraction = 0.1;  // absorbing runs damp the outer fraction per side
  int store_every = 0;           // 0 keeps only the final frame
};

struct FieldFrame {
  double t = 0.0;
  Eigen::VectorXcd S, D;
};

struct FdResult {
  Eigen::VectorXd x;
  std::vector<FieldFrame> frames;  // always ends with the final state
  double cfl = 0.0;
};

// Leapfrog integration of the coupled fields
//   S_tt + (omega^2 + eps) S - c^2 S_xx = -2 gamma(x) D_t
//   D_tt + (omega^2 - eps) D - c^2 D_xx = -2 gamma(x) S_t
// with the first-order couplings handled by a centred implicit 2x2 solve per
// grid point.  Enforces the Courant bound c dt/dx <= 0.5.
FdResult fd_wave_solver(const ContinuumParams& params,
                        const std::function<double(double)>& gamma_of_x,
                        const Eigen::VectorXcd& S0, const Eigen::VectorXcd& St0,
                        const Eigen::VectorXcd& D0, const Eigen::VectorXcd& Dt0,
                        const FdConfig& config);

// Dispersion of the spatially uniform, gamma = 0 problem.  branch +1 is the
// S field, -1 the D field.  The discrete form is the symbol of the
// second-difference operator on spacing delta and converges at rate delta^2.
double wave_dispersion_sq(const ContinuumParams& params, double k, int branch);
double chain_dispersion_sq(const ContinuumParams& params, double k, int branch,
                           double delta);

std::string field_frame_csv(const FdResult& result, const FieldFrame& frame);
std::string field_frames_json(const FdResult& result);

}  // namespace ptosc

#endif
