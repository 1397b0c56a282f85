#ifndef PTOSC_TEST_HELPERS_HPP
#define PTOSC_TEST_HELPERS_HPP

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "ptosc/chain.hpp"
#include "ptosc/dynamics.hpp"
#include "ptosc/hamiltonian.hpp"

namespace ptosc::test {

inline std::mt19937& rng() {
  static std::mt19937 gen(987654321u);
  return gen;
}

inline double uniform(double lo, double hi) {
  std::uniform_real_distribution<double> dist(lo, hi);
  return dist(rng());
}

inline Eigen::VectorXd random_vector(int n, double lo, double hi) {
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v[i] = uniform(lo, hi);
  return v;
}

// Non-uniform chain with well-separated positive frequencies.
inline ChainSpec random_chain(int n_pairs, Parity parity) {
  return make_chain(n_pairs, parity, random_vector(n_pairs, 0.6, 1.8),
                    random_vector(n_pairs, 0.0, 0.3), random_vector(n_pairs, -0.8, 0.8));
}

inline PhaseState random_state(int dof) {
  return make_state(random_vector(dof, -1.0, 1.0), random_vector(dof, -1.0, 1.0));
}

// Central-difference gradient of a scalar function of one vector argument.
// Exact (up to roundoff) for quadratic functions.
template <typename F>
Eigen::VectorXd grad_central(F f, const Eigen::VectorXd& v, double h = 1e-4) {
  Eigen::VectorXd g(v.size());
  Eigen::VectorXd w = v;
  for (int i = 0; i < v.size(); ++i) {
    w[i] = v[i] + h;
    const double fp = f(w);
    w[i] = v[i] - h;
    const double fm = f(w);
    w[i] = v[i];
    g[i] = (fp - fm) / (2.0 * h);
  }
  return g;
}

// Max residual of xddot + 2 gamma_s xdot + omega^2 x + eps (x_l + x_r) = 0
// over the interior samples of a trajectory, with both derivatives taken by
// fourth-order central differences so the stencil error sits far below the
// bound under test.
inline double ode_residual(const ChainSpec& spec, const Eigen::MatrixXd& xs, double dt) {
  const int n = static_cast<int>(xs.cols());
  const int samples = static_cast<int>(xs.rows());
  double worst = 0.0;
  for (int s = 2; s + 2 < samples; ++s) {
    for (int j = 0; j < n; ++j) {
      const double xm2 = xs(s - 2, j), xm1 = xs(s - 1, j), x0 = xs(s, j),
                   xp1 = xs(s + 1, j), xp2 = xs(s + 2, j);
      const double xdot = (xm2 - 8.0 * xm1 + 8.0 * xp1 - xp2) / (12.0 * dt);
      const double xddot =
          (-xm2 + 16.0 * xm1 - 30.0 * x0 + 16.0 * xp1 - xp2) / (12.0 * dt * dt);
      double coupling = 0.0;
      if (j > 0) coupling += spec.bond_epsilon(j) * xs(s, j - 1);
      if (j + 1 < n) coupling += spec.bond_epsilon(j + 1) * xs(s, j + 1);
      const double r = xddot + 2.0 * spec.gamma_signed_at(j + 1) * xdot +
                       spec.omega_at(j + 1) * spec.omega_at(j + 1) * x0 + coupling;
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

inline double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const int n = static_cast<int>(a.size());
  double ma = 0.0, mb = 0.0;
  for (int i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (int i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  return sab / std::sqrt(saa * sbb);
}

// Windowed amplitude envelope of one column of a sample matrix.
inline std::vector<double> envelope(const Eigen::MatrixXd& xs, int col, int windows) {
  const int samples = static_cast<int>(xs.rows());
  std::vector<double> env(windows, 0.0);
  for (int w = 0; w < windows; ++w) {
    const int lo = samples * w / windows;
    const int hi = samples * (w + 1) / windows;
    for (int s = lo; s < hi; ++s) env[w] = std::max(env[w], std::abs(xs(s, col)));
  }
  return env;
}

}  // namespace ptosc::test

#endif
