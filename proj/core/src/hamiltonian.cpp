#include "ptosc/hamiltonian.hpp"

#include <cmath>

#include "ptosc/errors.hpp"

namespace ptosc {

namespace {

// Momentum-ladder form for the uniform even chain:
//   H = sum p_j p_{j+1} + gamma sum (-1)^j x_j p_j + (eps/2) sum x_j^2
//     + (w^2-g^2) sum_jj (-1)^jj sum_k x_{2k-1} x_{2jj+2k}
Eigen::MatrixXd sum_uniform_even(const ChainSpec& spec) {
  const int N = spec.n_pairs;
  const int n = 2 * N;
  const double w = spec.omegas[0], g = spec.gammas[0], e = spec.epsilons[0];
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  auto X = [](int j) { return j - 1; };
  auto P = [n](int j) { return n + j - 1; };
  auto addsym = [&Q](int i, int j, double c) {
    Q(i, j) += c;
    Q(j, i) += c;
  };
  for (int j = 1; j < n; ++j) addsym(P(j), P(j + 1), 1.0);
  for (int j = 1; j <= n; ++j) {
    Q(X(j), X(j)) += e;
    addsym(X(j), P(j), j % 2 == 0 ? g : -g);
  }
  for (int jj = 0; jj < N; ++jj)
    for (int k = 1; k <= N - jj; ++k)
      addsym(X(2 * k - 1), X(2 * jj + 2 * k), (jj % 2 == 0 ? 1.0 : -1.0) * (w * w - g * g));
  return Q;
}

// Mirror-paired form with per-pair parameters, 2N oscillators.
Eigen::MatrixXd sum_general_even(const ChainSpec& spec) {
  const int N = spec.n_pairs;
  const int n = 2 * N;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  auto X = [](int j) { return j - 1; };
  auto P = [n](int j) { return n + j - 1; };
  auto addsym = [&Q](int i, int j, double c) {
    Q(i, j) += c;
    Q(j, i) += c;
  };
  for (int k = 1; k <= N; ++k) {
    const double sk = (k % 2 == 0) ? 1.0 : -1.0;
    const double gk = spec.gammas[k - 1];
    addsym(X(k), P(k), sk * gk);
    addsym(X(2 * N + 1 - k), P(2 * N + 1 - k), -sk * gk);
    addsym(P(k), P(2 * N + 1 - k), 1.0);
    addsym(X(k), X(2 * N + 1 - k),
           spec.omegas[k - 1] * spec.omegas[k - 1] - gk * gk);
  }
  for (int k = 1; k < N; ++k) {
    addsym(X(k), X(2 * N - k), spec.epsilons[k - 1]);
    addsym(X(k + 1), X(2 * N + 1 - k), spec.epsilons[k - 1]);
  }
  Q(X(N), X(N)) += spec.epsilons[N - 1];
  Q(X(N + 1), X(N + 1)) += spec.epsilons[N - 1];
  return Q;
}

// Mirror-paired form with a neutral unit-frequency centre, 2N+1 oscillators.
Eigen::MatrixXd sum_general_odd(const ChainSpec& spec) {
  const int N = spec.n_pairs;
  const int n = 2 * N + 1;
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  auto X = [](int j) { return j - 1; };
  auto P = [n](int j) { return n + j - 1; };
  auto addsym = [&Q](int i, int j, double c) {
    Q(i, j) += c;
    Q(j, i) += c;
  };
  for (int k = 1; k <= N; ++k) {
    const double sk = (k % 2 == 0) ? 1.0 : -1.0;
    const double gk = spec.gammas[k - 1];
    addsym(X(k), P(k), sk * gk);
    addsym(X(2 * N + 2 - k), P(2 * N + 2 - k), -sk * gk);
    addsym(P(k), P(2 * N + 2 - k), 1.0);
    addsym(X(k), X(2 * N + 2 - k),
           spec.omegas[k - 1] * spec.omegas[k - 1] - gk * gk);
    addsym(X(k), X(2 * N + 1 - k), spec.epsilons[k - 1]);
    addsym(X(k + 1), X(2 * N + 2 - k), spec.epsilons[k - 1]);
  }
  Q(X(N + 1), X(N + 1)) += 1.0;
  Q(P(N + 1), P(N + 1)) += 1.0;
  return Q;
}

// Factorized form: H = sum f_j f_{j+1} + coordinate couplings, with
// f_j = p_j + gamma times an alternating partial sum of opposite-parity
// coordinates (forward for odd j, backward for even j).
Eigen::MatrixXd product_uniform_even(const ChainSpec& spec) {
  const int N = spec.n_pairs;
  const int n = 2 * N;
  const double w = spec.omegas[0], g = spec.gammas[0], e = spec.epsilons[0];
  Eigen::MatrixXd F = Eigen::MatrixXd::Zero(n, 2 * n);
  for (int j = 1; j <= n; ++j) {
    F(j - 1, n + j - 1) = 1.0;
    if (j % 2 == 1) {
      double sgn = 1.0;
      for (int k = j + 1; k <= n; k += 2) {
        F(j - 1, k - 1) = g * sgn;
        sgn = -sgn;
      }
    } else {
      double sgn = -1.0;
      for (int k = j - 1; k >= 1; k -= 2) {
        F(j - 1, k - 1) = g * sgn;
        sgn = -sgn;
      }
    }
  }
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  for (int j = 0; j + 1 < n; ++j)
    Q += F.row(j).transpose() * F.row(j + 1) + F.row(j + 1).transpose() * F.row(j);
  for (int j = 0; j < n; ++j) Q(j, j) += e;
  for (int jj = 0; jj < N; ++jj)
    for (int k = 1; k <= N - jj; ++k) {
      const int i1 = 2 * k - 2, i2 = 2 * jj + 2 * k - 1;
      const double v = (jj % 2 == 0 ? 1.0 : -1.0) * w * w;
      Q(i1, i2) += v;
      Q(i2, i1) += v;
    }
  return Q;
}

Eigen::MatrixXd gauge_matrix(const ChainSpec& spec, const HamiltonianRep& rep) {
  const int n = spec.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
  for (const GaugePair& gp : rep.gauge) {
    if (gp.m < 1 || gp.n <= gp.m || gp.n > n)
      throw InvalidArgument("gauge pair indices must satisfy 1 <= m < n <= chain size");
    A(gp.m - 1, gp.n - 1) += gp.a;
    A(gp.n - 1, gp.m - 1) += gp.a;
  }
  return A;
}

Eigen::VectorXd stack(const PhaseState& state) {
  Eigen::VectorXd xi(state.x.size() + state.p.size());
  xi << state.x, state.p;
  return xi;
}

void check_dimension(const ChainSpec& spec, const PhaseState& state) {
  if (state.x.size() != spec.size() || state.p.size() != spec.size())
    throw InvalidArgument("state dimension does not match the chain");
}

}  // namespace

Eigen::MatrixXd hamiltonian_matrix(const ChainSpec& spec, const HamiltonianRep& rep) {
  switch (rep.kind) {
    case RepKind::Sum:
      if (spec.parity == Parity::Odd) return sum_general_odd(spec);
      return spec.uniform ? sum_uniform_even(spec) : sum_general_even(spec);
    case RepKind::Product:
      if (spec.parity != Parity::Even || !spec.uniform)
        throw Unsupported("product form is defined for uniform even chains only");
      return product_uniform_even(spec);
    case RepKind::Gauge: {
      const int n = spec.size();
      Eigen::MatrixXd Q = hamiltonian_matrix(spec, HamiltonianRep::sum());
      Eigen::MatrixXd T = Eigen::MatrixXd::Identity(2 * n, 2 * n);
      T.block(n, 0, n, n) = gauge_matrix(spec, rep);
      return T.transpose() * Q * T;
    }
  }
  throw InvalidArgument("unknown Hamiltonian representation");
}

double eval_hamiltonian(const ChainSpec& spec, const HamiltonianRep& rep,
                        const PhaseState& state) {
  check_dimension(spec, state);
  return quadratic_value(hamiltonian_matrix(spec, rep), stack(state));
}

PhaseState equations_of_motion(const ChainSpec& spec, const HamiltonianRep& rep,
                               const PhaseState& state) {
  check_dimension(spec, state);
  const int n = spec.size();
  Eigen::VectorXd flow = hamiltonian_flow(hamiltonian_matrix(spec, rep), stack(state));
  PhaseState d;
  d.x = flow.head(n);
  d.p = flow.tail(n);
  d.t = state.t;
  return d;
}

Eigen::VectorXd second_order_rhs(const ChainSpec& spec, const Eigen::VectorXd& x,
                                 const Eigen::VectorXd& xdot) {
  const int n = spec.size();
  if (x.size() != n || xdot.size() != n)
    throw InvalidArgument("state dimension does not match the chain");
  Eigen::VectorXd acc(n);
  for (int j = 1; j <= n; ++j) {
    const double w = spec.omega_at(j);
    double a = -w * w * x[j - 1] - 2.0 * spec.gamma_signed_at(j) * xdot[j - 1];
    if (j > 1) a -= spec.bond_epsilon(j - 1) * x[j - 2];
    if (j < n) a -= spec.bond_epsilon(j) * x[j];
    acc[j - 1] = a;
  }
  return acc;
}

Eigen::VectorXd rep_acceleration(const ChainSpec& spec, const HamiltonianRep& rep,
                                 const PhaseState& state) {
  check_dimension(spec, state);
  const int n = spec.size();
  const Eigen::MatrixXd Q = hamiltonian_matrix(spec, rep);
  const Eigen::VectorXd d = hamiltonian_flow(Q, stack(state));
  return hamiltonian_flow(Q, d).head(n);
}

double eval_lagrangian(const ChainSpec& spec, const Eigen::VectorXd& x,
                       const Eigen::VectorXd& xdot) {
  if (spec.parity != Parity::Even || !spec.uniform)
    throw Unsupported("the Lagrangian form is defined for uniform even chains only");
  const int N = spec.n_pairs;
  const int n = 2 * N;
  if (x.size() != n || xdot.size() != n)
    throw InvalidArgument("state dimension does not match the chain");
  const double w = spec.omegas[0], g = spec.gammas[0], e = spec.epsilons[0];
  double L = 0.0;
  for (int jj = 0; jj < N; ++jj) {
    const double s = (jj % 2 == 0) ? 1.0 : -1.0;
    for (int k = 1; k <= N - jj; ++k) {
      const int a = 2 * k - 2, b = 2 * jj + 2 * k - 1;
      L += s * (g * (x[a] * xdot[b] - xdot[a] * x[b]) - w * w * x[a] * x[b] +
                xdot[a] * xdot[b]);
    }
  }
  L -= 0.5 * e * x.squaredNorm();
  return L;
}

double conserved_energy(const ChainSpec& spec, const Eigen::VectorXd& x,
                        const Eigen::VectorXd& xdot) {
  if (spec.parity != Parity::Even || !spec.uniform)
    throw Unsupported("the bilinear invariant is defined for uniform even chains only");
  const int n = 2 * spec.n_pairs;
  if (x.size() != n || xdot.size() != n)
    throw InvalidArgument("state dimension does not match the chain");
  const double w = spec.omegas[0], e = spec.epsilons[0];
  double E = 0.0;
  for (int j = 0; j + 1 < n; ++j) E += xdot[j] * xdot[j + 1] + w * w * x[j] * x[j + 1];
  E += 0.5 * e * (x[0] * x[0] + x[n - 1] * x[n - 1]);
  for (int j = 1; j + 1 < n; ++j) E += e * x[j] * x[j];
  for (int j = 0; j + 2 < n; ++j) E += e * x[j] * x[j + 2];
  return E;
}

double quadratic_value(const Eigen::MatrixXd& Q, const Eigen::VectorXd& xi) {
  if (Q.rows() != Q.cols() || Q.rows() != xi.size())
    throw InvalidArgument("quadratic form dimension mismatch");
  return 0.5 * xi.dot(Q * xi);
}

Eigen::VectorXd hamiltonian_flow(const Eigen::MatrixXd& Q, const Eigen::VectorXd& xi) {
  if (Q.rows() != Q.cols() || Q.rows() != xi.size() || Q.rows() % 2 != 0)
    throw InvalidArgument("flow requires an even-dimensional square form");
  const Eigen::Index n = Q.rows() / 2;
  const Eigen::VectorXd grad = Q * xi;
  Eigen::VectorXd out(2 * n);
  out.head(n) = grad.tail(n);
  out.tail(n) = -grad.head(n);
  return out;
}

}  // namespace ptosc
