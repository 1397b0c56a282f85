#ifndef PTOSC_CHAIN_HPP
#define PTOSC_CHAIN_HPP

#include <Eigen/Dense>
#include <string>

namespace ptosc {

enum class Parity { Even, Odd };

// Description of a linear chain of 2N (even) or 2N+1 (odd) coupled
// oscillators with balanced loss and gain.  Parameters are stored per mirror
// pair k = 1..N, where k = 1 is the outermost pair and k = N the innermost.
// Oscillator j and its mirror partner share omega_k and gamma_k; the bond
// between oscillators j and j+1 carries epsilon_min(j, n-j).  Odd-indexed
// oscillators on the left half are lossy, even-indexed ones have gain, and
// the mirror partner always carries the opposite sign.  Odd chains have a
// neutral centre oscillator with unit natural frequency and no loss or gain.
struct ChainSpec {
  int n_pairs = 1;
  Parity parity = Parity::Even;
  Eigen::VectorXd omegas;    // length n_pairs
  Eigen::VectorXd gammas;    // length n_pairs, nonnegative amplitudes
  Eigen::VectorXd epsilons;  // length n_pairs
  bool uniform = false;

  int size() const { return parity == Parity::Even ? 2 * n_pairs : 2 * n_pairs + 1; }

  // Per-oscillator accessors, 1-based oscillator index j in [1, size()].
  double omega_at(int j) const;
  double gamma_at(int j) const;         // unsigned amplitude
  double gamma_signed_at(int j) const;  // +gamma for loss, -gamma for gain, 0 at centre
  // Coupling on the bond (j, j+1), 1-based j in [1, size()-1].
  double bond_epsilon(int j) const;
};

// Validates and normalizes a chain description.  Throws InvalidArgument on
// bad sizes or parameter signs.
ChainSpec make_chain(int n_pairs, Parity parity, Eigen::VectorXd omegas,
                     Eigen::VectorXd gammas, Eigen::VectorXd epsilons);

// All pairs share the same (omega, gamma, epsilon).
ChainSpec build_uniform_chain(int n_pairs, double omega, double gamma, double epsilon,
                              Parity parity = Parity::Even);

// Point in phase space: coordinates and canonical momenta of every oscillator.
struct PhaseState {
  Eigen::VectorXd x;
  Eigen::VectorXd p;
  double t = 0.0;
};

PhaseState make_state(Eigen::VectorXd x, Eigen::VectorXd p, double t = 0.0);

// Parity reflection about the chain centre: x_k -> -x_{n+1-k}, p_k -> -p_{n+1-k}.
PhaseState apply_parity(const PhaseState& s);

// Time reversal: momenta change sign.  velocity_sense documents whether the
// second block holds canonical momenta or coordinate velocities; the flip is
// the same either way.
PhaseState apply_time_reversal(const PhaseState& s, bool velocity_sense = false);

// JSON round trip for ChainSpec.  Scalars broadcast to length n_pairs on load.
std::string chain_to_json(const ChainSpec& spec);
ChainSpec chain_from_json(const std::string& text);

}  // namespace ptosc

#endif
