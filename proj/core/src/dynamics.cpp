#include "ptosc/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "ptosc/errors.hpp"
#include "ptosc/io_util.hpp"
#include "ptosc/spectral.hpp"

namespace ptosc {

namespace {

using EnergyFn = std::function<double(const Eigen::VectorXd&, const Eigen::VectorXd&)>;

Trajectory integrate_quadratic(const Eigen::MatrixXd& Q, const PhaseState& initial,
                               double t_end, double dt, double lambda_max,
                               const EnergyFn& energy_fn) {
  if (!(dt > 0.0) || !(t_end > 0.0))
    throw InvalidArgument("t_end and dt must be positive");
  if (dt * lambda_max >= 0.1) {
    const double suggested = lambda_max > 0.0 ? 0.05 / lambda_max : dt;
    throw InvalidArgument("time step too large for the fastest mode; dt below " +
                          g17(suggested) + " keeps dt*max|lambda| under 0.1");
  }
  const int n = static_cast<int>(initial.x.size());
  if (initial.p.size() != n || 2 * n != Q.rows())
    throw InvalidArgument("state dimension does not match the system");

  // M = J Q applied as two block rows; the flow is linear with constant M.
  Eigen::MatrixXd m(2 * n, 2 * n);
  m.topRows(n) = Q.bottomRows(n);
  m.bottomRows(n) = -Q.topRows(n);

  const int steps = static_cast<int>(std::llround(t_end / dt));
  if (steps < 1) throw InvalidArgument("t_end must cover at least one step");

  Trajectory traj;
  traj.dt = dt;
  traj.t.resize(steps + 1);
  traj.states.resize(steps + 1, 2 * n);
  traj.velocities.resize(steps + 1, n);
  traj.hamiltonian.resize(steps + 1);
  traj.max_abs.resize(steps + 1);
  traj.has_energy = static_cast<bool>(energy_fn);
  if (traj.has_energy) traj.energy.resize(steps + 1);

  Eigen::VectorXd xi(2 * n);
  xi << initial.x, initial.p;
  Eigen::VectorXd k1(2 * n), k2(2 * n), k3(2 * n), k4(2 * n);
  for (int s = 0; s <= steps; ++s) {
    traj.t[s] = initial.t + s * dt;
    traj.states.row(s) = xi;
    k1.noalias() = m * xi;
    traj.velocities.row(s) = k1.head(n);
    traj.hamiltonian[s] = 0.5 * xi.dot(Q * xi);
    traj.max_abs[s] = xi.cwiseAbs().maxCoeff();
    if (traj.has_energy) traj.energy[s] = energy_fn(xi.head(n), k1.head(n));
    if (s == steps) break;
    k2.noalias() = m * (xi + (0.5 * dt) * k1);
    k3.noalias() = m * (xi + (0.5 * dt) * k2);
    k4.noalias() = m * (xi + dt * k3);
    xi += (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return traj;
}

}  // namespace

Trajectory integrate(const ChainSpec& spec, const HamiltonianRep& rep,
                     const PhaseState& initial, double t_end, double dt) {
  if (initial.x.size() != spec.size())
    throw InvalidArgument("state dimension does not match the chain");
  const Eigen::MatrixXd Q = hamiltonian_matrix(spec, rep);
  const double lambda_max = qep_spectrum(spec).max_abs();
  EnergyFn energy_fn;
  if (spec.parity == Parity::Even && spec.uniform) {
    ChainSpec copy = spec;
    energy_fn = [copy](const Eigen::VectorXd& x, const Eigen::VectorXd& v) {
      return conserved_energy(copy, x, v);
    };
  }
  return integrate_quadratic(Q, initial, t_end, dt, lambda_max, energy_fn);
}

Trajectory integrate(const TrioParams& trio, const PhaseState& initial, double t_end,
                     double dt) {
  const Eigen::MatrixXd Q = trio_hamiltonian_matrix(trio);
  const double lambda_max = trio_spectrum(trio).max_abs();
  return integrate_quadratic(Q, initial, t_end, dt, lambda_max, EnergyFn());
}

DriftReport conservation_report(const Trajectory& traj) {
  DriftReport report;
  if (traj.samples() == 0) return report;
  auto rel_drift = [&](const std::vector<double>& series) {
    if (series.empty()) return 0.0;
    const double ref = series.front();
    const double denom = std::abs(ref) > 0.0 ? std::abs(ref) : 1.0;
    double worst = 0.0;
    for (double v : series) worst = std::max(worst, std::abs(v - ref) / denom);
    return worst;
  };
  if (traj.has_energy) report.energy_drift = rel_drift(traj.energy);
  report.hamiltonian_drift = rel_drift(traj.hamiltonian);
  return report;
}

namespace {

void fft_inplace(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

}  // namespace

FrequencyReport frequency_extract(const Trajectory& traj, int coord_index,
                                  double growth_threshold) {
  const int n = traj.samples();
  if (n < 16) throw InvalidArgument("trajectory too short for a spectral estimate");
  if (coord_index < 0 || coord_index >= traj.dof())
    throw InvalidArgument("coordinate index out of range");

  Eigen::VectorXd signal = traj.states.col(coord_index);
  FrequencyReport report;
  report.bin_width = 2.0 * std::numbers::pi / (n * traj.dt);

  const int window = std::max(1, n / 10);
  const double early = signal.head(window).cwiseAbs().maxCoeff();
  const double late = signal.tail(window).cwiseAbs().maxCoeff();
  if (late > growth_threshold * std::max(early, 1e-300)) {
    report.growth = true;
    return report;
  }

  signal.array() -= signal.mean();
  std::size_t nfft = 1;
  while (nfft < static_cast<std::size_t>(n)) nfft <<= 1;
  std::vector<std::complex<double>> buf(nfft, 0.0);
  for (int i = 0; i < n; ++i) {
    const double hann =
        0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * i / (n - 1)));
    buf[static_cast<std::size_t>(i)] = signal[i] * hann;
  }
  fft_inplace(buf);

  const std::size_t half = nfft / 2;
  std::vector<double> power(half + 1);
  double pmax = 0.0;
  for (std::size_t k = 0; k <= half; ++k) {
    power[k] = std::norm(buf[k]);
    pmax = std::max(pmax, power[k]);
  }
  if (pmax == 0.0) return report;

  const double df = 2.0 * std::numbers::pi / (static_cast<double>(nfft) * traj.dt);
  for (int found = 0; found < 7; ++found) {
    std::size_t imax = 0;
    for (std::size_t k = 1; k <= half; ++k)
      if (power[k] > power[imax]) imax = k;
    if (power[imax] < 1e-4 * pmax) break;
    report.peaks.push_back(df * static_cast<double>(imax));
    const std::size_t clear = 6 * nfft / static_cast<std::size_t>(n) + 6;
    const std::size_t lo = imax > clear ? imax - clear : 0;
    const std::size_t hi = std::min(half, imax + clear);
    for (std::size_t k = lo; k <= hi; ++k) power[k] = 0.0;
  }
  std::sort(report.peaks.begin(), report.peaks.end());
  return report;
}

std::string trajectory_csv(const Trajectory& traj) {
  const int n = traj.dof();
  std::string out = "t";
  for (int j = 1; j <= n; ++j) out += ",x_" + std::to_string(j);
  for (int j = 1; j <= n; ++j) out += ",p_" + std::to_string(j);
  if (traj.has_energy) out += ",E";
  out += ",H\n";
  for (int s = 0; s < traj.samples(); ++s) {
    out += g17(traj.t[s]);
    for (int c = 0; c < 2 * n; ++c) {
      out += ",";
      out += g17(traj.states(s, c));
    }
    if (traj.has_energy) {
      out += ",";
      out += g17(traj.energy[s]);
    }
    out += ",";
    out += g17(traj.hamiltonian[s]);
    out += "\n";
  }
  return out;
}

void emit_trajectory_csv(const Trajectory& traj, const std::string& path) {
  atomic_write(path, trajectory_csv(traj));
}

}  // namespace ptosc
