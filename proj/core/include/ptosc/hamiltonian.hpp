#ifndef PTOSC_HAMILTONIAN_HPP
#define PTOSC_HAMILTONIAN_HPP

#include <vector>

#include "ptosc/chain.hpp"

namespace ptosc {

// Equivalent Hamiltonian representations of the same chain dynamics.
//
//  Sum      - bilinear momentum ladder p_j p_{j+1} plus coordinate couplings;
//             for non-uniform or odd chains the mirror-paired general form is
//             used instead (its value differs from the uniform ladder form,
//             the induced equations of motion do not).
//  Product  - factorized form sum_j f_j f_{j+1} with f_j = p_j plus gamma
//             times an alternating partial sum of opposite-parity coordinates.
//             Only defined for uniform even chains.
//  Gauge    - sum representation with momenta shifted by a symmetric bilinear
//             form in the coordinates, p_m -> p_m + a_mn x_n (and p_n by
//             a_mn x_m).  Coordinate dynamics is unchanged.
enum class RepKind { Sum, Product, Gauge };

struct GaugePair {
  int m = 1, n = 2;  // 1-based oscillator indices, m < n
  double a = 0.0;
};

struct HamiltonianRep {
  RepKind kind = RepKind::Sum;
  std::vector<GaugePair> gauge;

  static HamiltonianRep sum() { return {RepKind::Sum, {}}; }
  static HamiltonianRep product() { return {RepKind::Product, {}}; }
  static HamiltonianRep gauged(std::vector<GaugePair> pairs) {
    return {RepKind::Gauge, std::move(pairs)};
  }
};

// Hessian Q of the quadratic Hamiltonian H(xi) = xi^T Q xi / 2 over the phase
// vector xi = (x_1..x_n, p_1..p_n).  All representation logic lives here.
Eigen::MatrixXd hamiltonian_matrix(const ChainSpec& spec, const HamiltonianRep& rep);

double eval_hamiltonian(const ChainSpec& spec, const HamiltonianRep& rep,
                        const PhaseState& state);

// Hamilton's equations (xdot, pdot) at a phase point.
PhaseState equations_of_motion(const ChainSpec& spec, const HamiltonianRep& rep,
                               const PhaseState& state);

// Canonical second-order form of the dynamics:
//   xddot_j = -omega_j^2 x_j -+ 2 gamma_j xdot_j - eps (x_{j-1} + x_{j+1}),
// lossy oscillators take the upper sign.  Every representation must induce
// exactly this acceleration.
Eigen::VectorXd second_order_rhs(const ChainSpec& spec, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& xdot);

// Acceleration implied by a representation at a phase point, computed by
// differentiating Hamilton's equations (the Hessian is constant, so this is
// exact).  Equals second_order_rhs at (x, xdot-of-the-rep) for a correct Q.
Eigen::VectorXd rep_acceleration(const ChainSpec& spec, const HamiltonianRep& rep,
                                 const PhaseState& state);

// Lagrangian of the uniform even chain.  The gamma cross term is transposed
// relative to the naive reading so that the Euler-Lagrange equations land on
// the same loss/gain assignment as second_order_rhs (odd-index lossy) rather
// than on the parity-reflected chain.
double eval_lagrangian(const ChainSpec& spec, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& xdot);

// Conserved bilinear energy of the uniform even chain.  Independent of gamma.
double conserved_energy(const ChainSpec& spec, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& xdot);

// Generic quadratic-form helpers shared with the planar trio.
double quadratic_value(const Eigen::MatrixXd& Q, const Eigen::VectorXd& xi);
// J * Q * xi with J the symplectic unit; returns (xdot, pdot) stacked.
Eigen::VectorXd hamiltonian_flow(const Eigen::MatrixXd& Q, const Eigen::VectorXd& xi);

}  // namespace ptosc

#endif
