#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>

#include "helpers.hpp"
#include "ptosc/errors.hpp"
#include "ptosc/hamiltonian.hpp"
#include "ptosc/trio.hpp"

using namespace ptosc;
using namespace ptosc::test;

namespace {

TrioParams random_trio() {
  TrioParams t;
  t.omega = uniform(0.6, 1.4);
  t.gamma = uniform(0.0, 0.4);
  t.eps1 = uniform(-0.6, 0.6);
  t.eps2 = uniform(-0.6, 0.6);
  return t;
}

// Secular determinant of the trio at frequency lambda.
std::complex<double> trio_det(const TrioParams& t, std::complex<double> lambda) {
  const std::complex<double> i(0.0, 1.0);
  Eigen::Matrix3cd m;
  const double w2 = t.omega * t.omega;
  m << lambda * lambda - w2 - 2.0 * i * lambda * t.gamma, t.eps1, t.eps2,
      t.eps1, lambda * lambda - 1.0, t.eps1,
      t.eps2, t.eps1, lambda * lambda - w2 + 2.0 * i * lambda * t.gamma;
  return m.determinant();
}

}  // namespace

TEST_SUITE("trio") {

TEST_CASE("cubic coefficients match their defining formulas") {
  for (int trial = 0; trial < 100; ++trial) {
    TrioParams t = random_trio();
    CubicCoeffs c = CubicCoeffs::from(t);
    const double w2 = t.omega * t.omega, g2 = t.gamma * t.gamma;
    const double e1 = t.eps1, e2 = t.eps2;
    CHECK(c.alpha == doctest::Approx(1.0 + 2.0 * w2 - 4.0 * g2).epsilon(1e-12));
    CHECK(c.beta == doctest::Approx(w2 * w2 + 2.0 * w2 - 2.0 * e1 * e1 - e2 * e2 -
                                    4.0 * g2)
                        .epsilon(1e-12));
    CHECK(c.sigma == doctest::Approx(w2 * w2 - 2.0 * e1 * e1 * (e2 + w2) - e2 * e2)
                         .epsilon(1e-12));
    CHECK(c.eval(0.0) == doctest::Approx(-c.sigma));
  }
}

TEST_CASE("secular determinant factors through the cubic in lambda squared") {
  for (int trial = 0; trial < 100; ++trial) {
    TrioParams t = random_trio();
    CubicCoeffs c = CubicCoeffs::from(t);
    const std::complex<double> lambda(uniform(-2.0, 2.0), uniform(-2.0, 2.0));
    const std::complex<double> mu = lambda * lambda;
    const std::complex<double> cubic =
        mu * mu * mu - c.alpha * mu * mu + c.beta * mu - c.sigma;
    const std::complex<double> det = trio_det(t, lambda);
    CHECK(std::abs(det - cubic) < 1e-10 * std::max(1.0, std::abs(cubic)));
  }
}

TEST_CASE("decoupled trio has the bare frequencies") {
  TrioParams t{0.8, 0.0, 0.0, 0.0};
  Spectrum s = trio_spectrum(t);
  std::vector<std::complex<double>> expected = {{-1.0, 0.0}, {-0.8, 0.0}, {-0.8, 0.0},
                                                {0.8, 0.0},  {0.8, 0.0},  {1.0, 0.0}};
  // the repeated outer frequency is a double root, so the companion solver
  // only delivers about half precision here
  CHECK(multiset_distance(s.lambdas, expected) < 1e-7);
  // a hair of coupling splits the degeneracy and restores a clean phase
  CHECK(trio_classify(TrioParams{0.8, 0.0, 0.01, 0.0}) == Phase::Unbroken);
}

TEST_CASE("six frequencies annihilate the secular determinant") {
  TrioParams t{0.8, 0.1, 0.1, 0.3};
  Spectrum s = trio_spectrum(t);
  REQUIRE(s.lambdas.size() == 6);
  for (const auto& l : s.lambdas)
    CHECK(std::abs(trio_det(t, l)) < 1e-10 * std::max(1.0, std::pow(std::abs(l), 6)));
}

TEST_CASE("cubic and qep spectra agree at random parameters") {
  for (int trial = 0; trial < 100; ++trial) {
    TrioParams t = random_trio();
    Spectrum a = trio_spectrum(t);
    Spectrum q = trio_qep_spectrum(t);
    REQUIRE(a.lambdas.size() == 6);
    REQUIRE(q.lambdas.size() == 6);
    CHECK(multiset_distance(a.lambdas, q.lambdas) < 1e-8);
  }
}

TEST_CASE("spectra close under negation and conjugation") {
  for (int trial = 0; trial < 30; ++trial) {
    Spectrum s = trio_spectrum(random_trio());
    std::vector<std::complex<double>> negated, conjugated;
    for (const auto& l : s.lambdas) {
      negated.push_back(-l);
      conjugated.push_back(std::conj(l));
    }
    CHECK(multiset_distance(s.lambdas, negated) < 1e-8);
    CHECK(multiset_distance(s.lambdas, conjugated) < 1e-8);
  }
}

TEST_CASE("hamilton's equations reproduce the stated equations of motion") {
  for (double omega2 : {1.0, 1.3}) {
    for (int trial = 0; trial < 50; ++trial) {
      TrioParams t = random_trio();
      Eigen::MatrixXd Q = trio_hamiltonian_matrix(t, omega2);
      CHECK((Q - Q.transpose()).cwiseAbs().maxCoeff() == 0.0);
      Eigen::VectorXd xi = random_vector(6, -1.0, 1.0);
      Eigen::VectorXd flow = hamiltonian_flow(Q, xi);
      // velocities from the flow, then accelerations by applying it twice
      Eigen::VectorXd xi2(6);
      xi2 << flow.head(3), flow.tail(3);
      Eigen::VectorXd acc = hamiltonian_flow(Q, xi2).head(3);
      const double x = xi[0], y = xi[1], z = xi[2];
      const double xd = flow[0], zd = flow[2];
      const double w2 = t.omega * t.omega;
      CHECK(acc[0] == doctest::Approx(-w2 * x - 2.0 * t.gamma * xd + t.eps1 * y +
                                      t.eps2 * z)
                          .epsilon(1e-12));
      CHECK(acc[1] == doctest::Approx(-omega2 * omega2 * y + t.eps1 * (x + z))
                          .epsilon(1e-12));
      CHECK(acc[2] == doctest::Approx(-w2 * z + 2.0 * t.gamma * zd + t.eps1 * y +
                                      t.eps2 * x)
                          .epsilon(1e-12));
    }
  }
}

TEST_CASE("classification by roots and by critical points agree") {
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    TrioParams t = random_trio();
    CHECK(trio_classify(t) == trio_classify_critical(t));
    ++checked;
  }
  CHECK(checked == 300);
}

TEST_CASE("five phase regions along the pinned slice") {
  TrioParams base{0.8, 0.10, 0.10, 0.0};
  auto intervals = trio_intervals(base, 0.0, 0.70);
  REQUIRE(intervals.size() == 5);
  CHECK(intervals.front().lo == 0.0);
  CHECK(intervals.back().hi == doctest::Approx(0.70));
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    CHECK(intervals[i].lo == intervals[i - 1].hi);
    CHECK(intervals[i].phase != intervals[i - 1].phase);
  }
  // the slice starts broken at eps2 = 0 for these parameters
  CHECK(intervals[0].phase == Phase::Broken);
}

TEST_CASE("imaginary-part trace vanishes on exactly the unbroken intervals") {
  ImTrace trace = trio_im_lambda_trace(0.8, 0.10, 0.10, 0.0, 0.70, 256);
  REQUIRE(trace.eps2.size() == 256);
  REQUIRE(trace.im.size() == 256);
  int runs = 0;
  bool in_zero_run = false;
  for (std::size_t i = 0; i < trace.eps2.size(); ++i) {
    double max_im = 0.0;
    for (double v : trace.im[i]) max_im = std::max(max_im, std::abs(v));
    const bool zero = max_im <= 1e-9;
    if (zero && !in_zero_run) ++runs;
    in_zero_run = zero;
    // rows are sorted ascending
    for (int k = 1; k < 6; ++k) CHECK(trace.im[i][k] >= trace.im[i][k - 1]);
    // zero rows coincide with the unbroken classification
    TrioParams t{0.8, 0.10, 0.10, trace.eps2[i]};
    CHECK(zero == (trio_classify(t) == Phase::Unbroken));
  }
  CHECK(runs == 2);  // two disjoint unbroken windows on this slice
}

TEST_CASE("strong loss wipes out the unbroken region") {
  PhaseDiagram empty = trio_phase_diagram(0.8, 2.0, 0.0, 0.7, 0.0, 0.7, 32);
  CHECK(empty.unbroken_count == 0);
}

TEST_CASE("phase diagram counts match the mask") {
  PhaseDiagram d = trio_phase_diagram(0.8, 0.10, 0.0, 0.7, 0.0, 0.7, 32);
  int count = 0;
  for (int i = 0; i < 32; ++i)
    for (int j = 0; j < 32; ++j)
      if (d.at(i, j)) ++count;
  CHECK(count == d.unbroken_count);
  CHECK(d.unbroken_count > 0);
  REQUIRE(d.eps1_grid.size() == 32);
  CHECK(d.eps1_grid.front() == 0.0);
  CHECK(d.eps1_grid.back() == doctest::Approx(0.7));
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(trio_spectrum(TrioParams{-1.0, 0.1, 0.1, 0.1}), InvalidArgument);
  CHECK_THROWS_AS(trio_spectrum(TrioParams{1.0, -0.1, 0.1, 0.1}), InvalidArgument);
  CHECK_THROWS_AS(trio_hamiltonian_matrix(TrioParams{1.0, 0.1, 0.1, 0.1}, 0.0),
                  InvalidArgument);
  CHECK_THROWS_AS(trio_phase_diagram(0.8, 0.1, 0.0, 0.7, 0.0, 0.7, 16), InvalidArgument);
  CHECK_THROWS_AS(trio_im_lambda_trace(0.8, 0.1, 0.1, 0.0, 0.7, 32), InvalidArgument);
  CHECK_THROWS_AS(trio_intervals(TrioParams{0.8, 0.1, 0.1, 0.0}, 0.7, 0.0),
                  InvalidArgument);
}

TEST_CASE("csv emitters carry headers and one row per grid point") {
  PhaseDiagram d = trio_phase_diagram(0.8, 0.10, 0.0, 0.7, 0.0, 0.7, 32);
  std::string csv = phase_diagram_csv(d);
  CHECK(csv.rfind("eps1,eps2,unbroken\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 32 * 32);
  ImTrace trace = trio_im_lambda_trace(0.8, 0.10, 0.10, 0.0, 0.70, 64);
  std::string tcsv = im_trace_csv(trace);
  CHECK(tcsv.rfind("eps2,", 0) == 0);
  CHECK(std::count(tcsv.begin(), tcsv.end(), '\n') == 1 + 64);
}

}  // TEST_SUITE
