#ifndef PTOSC_DYNAMICS_HPP
#define PTOSC_DYNAMICS_HPP

#include <string>
#include <vector>

#include "ptosc/chain.hpp"
#include "ptosc/hamiltonian.hpp"
#include "ptosc/trio.hpp"

namespace ptosc {

struct Trajectory {
  double dt = 0.0;
  std::vector<double> t;
  Eigen::MatrixXd states;      // row per sample, columns (x_1..x_n, p_1..p_n)
  Eigen::MatrixXd velocities;  // xdot at each sample
  std::vector<double> hamiltonian;
  std::vector<double> energy;  // conserved bilinear energy; empty if undefined
  std::vector<double> max_abs;
  bool has_energy = false;

  int dof() const { return static_cast<int>(states.cols()) / 2; }
  int samples() const { return static_cast<int>(states.rows()); }
};

// Classical RK4 on Hamilton's equations with fixed step.  Requires
// dt * max|lambda| < 0.1 against a spectral estimate; violations throw
// InvalidArgument with a suggested step.
Trajectory integrate(const ChainSpec& spec, const HamiltonianRep& rep,
                     const PhaseState& initial, double t_end, double dt);
Trajectory integrate(const TrioParams& trio, const PhaseState& initial, double t_end,
                     double dt);

struct DriftReport {
  double energy_drift = 0.0;       // max relative deviation from the initial value
  double hamiltonian_drift = 0.0;
};
DriftReport conservation_report(const Trajectory& traj);

// Peak frequencies of one coordinate signal from a Hann-windowed periodogram
// (zero-padded to a power of two).  bin_width = 2 pi / (samples dt) is the
// resolution set by the signal duration; padding only interpolates below it.
// Trajectories whose late-time amplitude grew by more than growth_threshold
// relative to the early window return growth = true and no peaks.
struct FrequencyReport {
  bool growth = false;
  std::vector<double> peaks;  // rad / time, ascending
  double bin_width = 0.0;
};
FrequencyReport frequency_extract(const Trajectory& traj, int coord_index = 0,
                                  double growth_threshold = 20.0);

// CSV columns: t, x_1..x_n, p_1..p_n, E (when defined), H.
std::string trajectory_csv(const Trajectory& traj);
void emit_trajectory_csv(const Trajectory& traj, const std::string& path);

}  // namespace ptosc

#endif
