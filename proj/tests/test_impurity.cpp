#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "ptosc/errors.hpp"
#include "ptosc/impurity.hpp"

using namespace ptosc;
using namespace ptosc::test;

namespace {

ContinuumParams base_params() {
  ContinuumParams p;
  p.c = 1.0;
  p.omega2 = 1.0;
  p.epsilon = 0.5;
  p.gamma = 0.3;
  return p;
}

// Cosine similarity of two nonnegative profiles.
double cosine(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  return u.dot(v) / (u.norm() * v.norm());
}

}  // namespace

TEST_SUITE("impurity") {

TEST_CASE("spring chain parameters map to the continuum set") {
  // mu1 nu1^2 = mu2 nu2^2 = 0.5 splits the background frequency evenly
  ContinuumParams p =
      continuum_parameters(1.0, 1.0, 0.2, 2.0, 0.5, 0.125, 2.0);
  CHECK(p.c == doctest::Approx(1.0));
  CHECK(p.gamma == doctest::Approx(0.2));
  CHECK(p.omega2 == doctest::Approx(1.0));
  CHECK(p.epsilon == doctest::Approx(-0.5));
  // negative epsilon leaves no admissible mode window
  CHECK_THROWS_AS(impurity_mode(p, 1.0), NoPseudoBoundState);

  CHECK(continuum_parameters(2.0, 1.0, 0.0, 1.0, 1.0, 0.5, 1.0).gamma == 0.0);
  CHECK(continuum_parameters(1.0, 1.0, 0.1, 1.0, 1.0, 0.0, 1.0).epsilon == 0.0);
  CHECK_THROWS_AS(continuum_parameters(0.0, 1.0, 0.1, 1.0, 1.0, 1.0, 1.0),
                  InvalidArgument);
  CHECK_THROWS_AS(continuum_parameters(1.0, -1.0, 0.1, 1.0, 1.0, 1.0, 1.0),
                  InvalidArgument);
}

TEST_CASE("pinned mode at the centre of the window") {
  ImpurityMode m = impurity_mode(base_params(), 1.0);
  const double r = std::sqrt(0.5);
  CHECK(m.a == doctest::Approx(r).epsilon(1e-14));
  CHECK(m.b == doctest::Approx(r).epsilon(1e-14));
  CHECK(m.window_lo == doctest::Approx(0.5));
  CHECK(m.window_hi == doctest::Approx(1.5));
  CHECK(m.bulk_residual_s < 1e-12);
  CHECK(m.bulk_residual_d < 1e-12);
  CHECK(m.jump_residual_s < 1e-12);
  CHECK(m.jump_residual_d < 1e-12);
  // normalization and default half-width
  const int mid = static_cast<int>(m.x.size()) / 2;
  CHECK(m.x[mid] == 0.0);
  CHECK(std::abs(m.s[mid] - std::complex<double>(1.0, 0.0)) < 1e-14);
  CHECK(m.x[m.x.size() - 1] == doctest::Approx(10.0 / m.a));
}

TEST_CASE("sign bookkeeping of the decay and oscillation rates") {
  for (int trial = 0; trial < 100; ++trial) {
    ContinuumParams p;
    p.c = uniform(0.5, 2.0);
    p.omega2 = uniform(0.5, 2.0);
    p.epsilon = uniform(0.1, 0.8 * p.omega2);
    p.gamma = uniform(0.05, 0.5);
    const double lo = p.omega2 - p.epsilon, hi = p.omega2 + p.epsilon;
    const double Omega = std::sqrt(uniform(lo + 0.05 * (hi - lo), hi - 0.05 * (hi - lo)));
    ImpurityMode m = impurity_mode(p, Omega, -1.0, 201);
    CHECK(m.a * m.a + m.b * m.b ==
          doctest::Approx(2.0 * p.epsilon).epsilon(1e-12));
    CHECK(m.a * m.a - m.b * m.b ==
          doctest::Approx(2.0 * (p.omega2 - Omega * Omega)).epsilon(1e-11));
    CHECK(m.bulk_residual_s < 1e-12);
    CHECK(m.bulk_residual_d < 1e-12);
    CHECK(m.jump_residual_s < 1e-12);
    CHECK(m.jump_residual_d < 1e-12);
  }
}

TEST_CASE("the mode is an exact parity-time eigenstate") {
  ImpurityMode m = impurity_mode(base_params(), 1.05, 8.0, 501);
  const int n = static_cast<int>(m.x.size());
  for (int j = 0; j < n; ++j) {
    const int jm = n - 1 - j;  // grid is symmetric about the origin
    CHECK(std::abs(std::conj(m.s[jm]) - m.s[j]) < 1e-12);
    CHECK(std::abs(std::conj(m.d[jm]) + m.d[j]) < 1e-12);
  }
  // s decays monotonically away from the impurity, d keeps oscillating
  const int mid = n / 2;
  for (int j = mid; j + 1 < n; ++j) CHECK(std::abs(m.s[j + 1]) <= std::abs(m.s[j]));
  double outer = 0.0, inner = 0.0;
  for (int j = 0; j < n; ++j) {
    if (std::abs(m.x[j]) > 4.0)
      outer = std::max(outer, std::abs(m.d[j]));
    else
      inner = std::max(inner, std::abs(m.d[j]));
  }
  CHECK(outer > 0.5 * inner);
}

TEST_CASE("the cusp at the impurity has the analytic slope") {
  ImpurityMode m = impurity_mode(base_params(), 1.1, 4.0, 4001);
  const int mid = static_cast<int>(m.x.size()) / 2;
  const double h = m.x[mid + 1] - m.x[mid];
  // one-sided slopes of s converge to -+ a / c
  const double right = (std::abs(m.s[mid + 1]) - std::abs(m.s[mid])) / h;
  const double left = (std::abs(m.s[mid]) - std::abs(m.s[mid - 1])) / h;
  CHECK(right == doctest::Approx(-m.a).epsilon(1e-2));
  CHECK(left == doctest::Approx(m.a).epsilon(1e-2));
}

TEST_CASE("omega outside the window names both constraints") {
  ContinuumParams p = base_params();
  CHECK_THROWS_WITH_AS(impurity_mode(p, 1.3), doctest::Contains("a^2"),
                       NoPseudoBoundState);
  CHECK_THROWS_AS(impurity_mode(p, 0.5), NoPseudoBoundState);
  CHECK_THROWS_AS(impurity_mode(p, 0.0), InvalidArgument);
  CHECK_THROWS_AS(impurity_mode(p, 1.0, -1.0, 200), InvalidArgument);  // even grid
  CHECK_THROWS_AS(impurity_mode(p, 1.0, -1.0, 3), InvalidArgument);    // too short
  ContinuumParams lossless = base_params();
  lossless.gamma = 0.0;
  CHECK_THROWS_AS(impurity_mode(lossless, 1.0), InvalidArgument);
}

TEST_CASE("dispersion helpers and their discrete limit") {
  ContinuumParams p = base_params();
  const double k = 1.7;
  CHECK(wave_dispersion_sq(p, k, +1) ==
        doctest::Approx(p.omega2 + p.epsilon + p.c * p.c * k * k));
  CHECK(wave_dispersion_sq(p, k, -1) ==
        doctest::Approx(p.omega2 - p.epsilon + p.c * p.c * k * k));
  // second-difference symbol converges at rate delta^2
  const double exact = wave_dispersion_sq(p, k, +1);
  const double e1 = std::abs(chain_dispersion_sq(p, k, +1, 0.1) - exact);
  const double e2 = std::abs(chain_dispersion_sq(p, k, +1, 0.05) - exact);
  CHECK(e1 / e2 > 3.5);
  CHECK(e1 / e2 < 4.5);
}

TEST_CASE("zero fields stay zero under the solver") {
  ContinuumParams p = base_params();
  FdConfig cfg;
  cfg.grid = {-5.0, 5.0, 128};
  cfg.t_end = 1.0;
  cfg.dt = 0.01;
  cfg.boundary = Boundary::Periodic;
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(128);
  FdResult r = fd_wave_solver(p, [](double) { return 0.0; }, z, z, z, z, cfg);
  REQUIRE(!r.frames.empty());
  CHECK(r.frames.back().S.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.frames.back().D.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.frames.back().t == doctest::Approx(1.0));
}

TEST_CASE("courant bound and grid size are enforced") {
  ContinuumParams p = base_params();
  FdConfig cfg;
  cfg.grid = {-1.0, 1.0, 128};
  cfg.t_end = 1.0;
  cfg.dt = 0.5;  // dx is about 0.0157, so c dt/dx is far beyond 0.5
  Eigen::VectorXcd z = Eigen::VectorXcd::Zero(128);
  CHECK_THROWS_WITH_AS(fd_wave_solver(p, [](double) { return 0.0; }, z, z, z, z, cfg),
                       doctest::Contains("Courant"), InvalidArgument);
  cfg.dt = 1e-3;
  cfg.grid.points = 8;
  Eigen::VectorXcd small = Eigen::VectorXcd::Zero(8);
  CHECK_THROWS_AS(
      fd_wave_solver(p, [](double) { return 0.0; }, small, small, small, small, cfg),
      InvalidArgument);
}

TEST_CASE("plane waves oscillate at the analytic dispersion") {
  // gamma = 0 decouples S and D; launch one plane-wave mode per field and
  // read the oscillation frequency off the modal phase slope
  ContinuumParams p;
  p.c = 1.0;
  p.omega2 = 1.0;
  p.epsilon = 0.3;
  p.gamma = 0.0;
  const double L = 8.0 * std::numbers::pi;
  const int nx = 512;
  FdConfig cfg;
  cfg.grid = {0.0, L, nx};
  cfg.dt = 0.4 * (L / nx);
  cfg.t_end = 20.0;
  cfg.boundary = Boundary::Periodic;
  cfg.store_every = 1;
  const double dx = L / nx;
  for (int mode : {2, 4, 6}) {
    const double k = 2.0 * std::numbers::pi * mode / L;
    Eigen::VectorXcd S0(nx), St0(nx), D0(nx), Dt0(nx);
    const double Os = std::sqrt(wave_dispersion_sq(p, k, +1));
    const double Od = std::sqrt(wave_dispersion_sq(p, k, -1));
    const std::complex<double> i(0.0, 1.0);
    for (int j = 0; j < nx; ++j) {
      const std::complex<double> phase = std::exp(i * (k * j * dx));
      S0[j] = phase;
      St0[j] = -i * Os * phase;
      D0[j] = phase;
      Dt0[j] = -i * Od * phase;
    }
    FdResult r = fd_wave_solver(p, [](double) { return 0.0; }, S0, St0, D0, Dt0, cfg);
    // project every stored frame onto the launched mode and fit the phase
    auto fit_freq = [&](auto field_of) {
      double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
      double prev = 0.0, offset = 0.0;
      int count = 0;
      for (const FieldFrame& f : r.frames) {
        std::complex<double> amp = 0.0;
        const Eigen::VectorXcd& field = field_of(f);
        for (int j = 0; j < nx; ++j)
          amp += std::exp(-i * (k * j * dx)) * field[j];
        double ph = std::arg(amp);
        if (count > 0) {
          while (ph + offset - prev > std::numbers::pi) offset -= 2.0 * std::numbers::pi;
          while (ph + offset - prev < -std::numbers::pi) offset += 2.0 * std::numbers::pi;
        }
        ph += offset;
        prev = ph;
        st += f.t;
        sy += ph;
        stt += f.t * f.t;
        sty += f.t * ph;
        ++count;
      }
      return -(count * sty - st * sy) / (count * stt - st * st);
    };
    const double Os_fd = fit_freq([](const FieldFrame& f) -> const Eigen::VectorXcd& {
      return f.S;
    });
    const double Od_fd = fit_freq([](const FieldFrame& f) -> const Eigen::VectorXcd& {
      return f.D;
    });
    CHECK(std::abs(Os_fd * Os_fd - Os * Os) / (Os * Os) < 0.01);
    CHECK(std::abs(Od_fd * Od_fd - Od * Od) / (Od * Od) < 0.01);
  }
}

TEST_CASE("a narrow impurity traps the predicted hump") {
  // localized gamma spike approximating the point impurity; seed with the
  // analytic mode and check the field keeps its shape
  ContinuumParams p;
  p.c = 1.0;
  p.omega2 = 1.0;
  p.epsilon = 0.5;
  p.gamma = 0.2;
  const double Omega = 1.0;
  const int nx = 2001;
  ImpurityMode mode = impurity_mode(p, Omega, 40.0, nx);
  FdConfig cfg;
  cfg.grid = {-40.0, 40.0, nx};
  const double dx = 80.0 / (nx - 1);
  cfg.dt = 0.4 * dx;
  cfg.t_end = 30.0;
  cfg.boundary = Boundary::Absorbing;
  cfg.sponge_fraction = 0.1;
  const double width = 4.0 * dx;
  auto gamma_of_x = [&](double x) {
    // Gaussian of unit integral times gamma
    return p.gamma * std::exp(-0.5 * x * x / (width * width)) /
           (width * std::sqrt(2.0 * std::numbers::pi));
  };
  // mode phases follow the exp(+i Omega t) carrier, so the launch
  // velocities take +i Omega; the opposite sign detunes the impurity
  // coupling and the hump leaks away
  const std::complex<double> i(0.0, 1.0);
  Eigen::VectorXcd S0 = mode.s;
  Eigen::VectorXcd St0 = i * Omega * mode.s;
  Eigen::VectorXcd D0 = mode.d;
  Eigen::VectorXcd Dt0 = i * Omega * mode.d;
  FdResult r = fd_wave_solver(p, gamma_of_x, S0, St0, D0, Dt0, cfg);
  const Eigen::VectorXcd& S = r.frames.back().S;
  // compare |S| with the analytic envelope over the trapping region
  std::vector<double> got, want;
  for (int j = 0; j < nx; ++j) {
    if (std::abs(r.x[j]) > 5.0 / mode.a) continue;
    got.push_back(std::abs(S[j]));
    want.push_back(std::abs(mode.s[j]));
  }
  Eigen::VectorXd gv = Eigen::Map<Eigen::VectorXd>(got.data(), got.size());
  Eigen::VectorXd wv = Eigen::Map<Eigen::VectorXd>(want.data(), want.size());
  CHECK(cosine(gv, wv) > 0.9);
  // the hump stays centred on the impurity
  int argmax = 0;
  for (int j = 1; j < nx; ++j)
    if (std::abs(S[j]) > std::abs(S[argmax])) argmax = j;
  CHECK(std::abs(r.x[argmax]) < 2.0);
}

TEST_CASE("frame storage respects store_every and always keeps the end") {
  ContinuumParams p = base_params();
  FdConfig cfg;
  cfg.grid = {-5.0, 5.0, 64};
  cfg.t_end = 0.5;
  cfg.dt = 0.01;
  cfg.boundary = Boundary::Periodic;
  Eigen::VectorXcd z = Eigen::VectorXcd::Ones(64);
  FdResult once = fd_wave_solver(p, [](double) { return 0.0; }, z, z, z, z, cfg);
  CHECK(once.frames.size() == 1);
  cfg.store_every = 10;
  FdResult many = fd_wave_solver(p, [](double) { return 0.0; }, z, z, z, z, cfg);
  CHECK(many.frames.size() > 2);
  CHECK(many.frames.front().t == doctest::Approx(0.0));
  CHECK(many.frames.back().t == doctest::Approx(0.5));

  std::string csv = field_frame_csv(many, many.frames.back());
  CHECK(csv.rfind("x,re_s,im_s,re_d,im_d\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 64);
}

}  // TEST_SUITE
