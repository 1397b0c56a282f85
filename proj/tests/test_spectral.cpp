#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "helpers.hpp"
#include "ptosc/errors.hpp"
#include "ptosc/spectral.hpp"

using namespace ptosc;
using namespace ptosc::test;

namespace {

std::int64_t binomial(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Multiset closure of a spectrum under a pointwise map.
double closure_distance(const std::vector<std::complex<double>>& lambdas,
                        std::complex<double> (*map)(const std::complex<double>&)) {
  std::vector<std::complex<double>> mapped;
  mapped.reserve(lambdas.size());
  for (const auto& l : lambdas) mapped.push_back(map(l));
  return multiset_distance(lambdas, mapped);
}

}  // namespace

TEST_SUITE("spectral") {

TEST_CASE("recursion reproduces the exact coefficient tables") {
  using T = std::vector<std::int64_t>;
  CHECK(charpoly(1).coeffs == T{-1, 1});
  CHECK(charpoly(2).coeffs == T{1, -3, 1});
  CHECK(charpoly(3).coeffs == T{-1, 6, -5, 1});
  CHECK(charpoly(4).coeffs == T{1, -10, 15, -7, 1});
  CHECK(charpoly(5).coeffs == T{-1, 15, -35, 28, -9, 1});
}

TEST_CASE("coefficients follow the closed binomial pattern") {
  for (int n = 1; n <= 30; ++n) {
    CharPoly p = charpoly(n);
    REQUIRE(static_cast<int>(p.coeffs.size()) == n + 1);
    CHECK(p.coeffs.back() == 1);                        // monic in chi
    CHECK(p.coeffs.front() == ((n % 2) ? -1 : 1));      // constant term (-1)^n
    for (int k = 0; k <= n; ++k) {
      const std::int64_t expected =
          ((n - k) % 2 ? -1 : 1) * binomial(n + k, n - k);
      CHECK(p.coeffs[k] == expected);
    }
  }
}

TEST_CASE("coefficient arithmetic overflows past 47 pairs") {
  CHECK_NOTHROW(charpoly(47));
  CHECK_THROWS_AS(charpoly(48), OverflowError);
  CHECK_THROWS_AS(charpoly(-1), InvalidArgument);
  CHECK(charpoly(0).coeffs == std::vector<std::int64_t>{1});  // recursion base
}

TEST_CASE("printable form matches the golden strings") {
  CHECK(charpoly(1).str() == "-e^2 + x");
  CHECK(charpoly(2).str() == "e^4 - 3 x e^2 + x^2");
  CHECK(charpoly(3).str() == "-e^6 + 6 x e^4 - 5 x^2 e^2 + x^3");
}

TEST_CASE("pinned evaluations") {
  CHECK(charpoly(3).evaluate(2.0, 1.0) == doctest::Approx(-1.0).epsilon(1e-14));
  // chi = eps^2 is the single-pair root
  CHECK(charpoly(1).evaluate(0.49, 0.7) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("closed forms agree with the recursion") {
  for (int n = 1; n <= 12; ++n) {
    for (int trial = 0; trial < 100; ++trial) {
      const double eps = uniform(0.1, 1.5);
      const double chi = uniform(8.0 * eps * eps, 8.0 * eps * eps + 6.0);
      const double ref = charpoly(n).evaluate(chi, eps);
      const double scale = std::max(1.0, std::abs(ref));
      CHECK(std::abs(charpoly_sum_form(n, chi, eps) - ref) / scale < 1e-10);
      CHECK(std::abs(charpoly_product_form(n, chi, eps) - ref) / scale < 1e-10);
    }
  }
}

TEST_CASE("closed forms cover the degenerate branches") {
  // vanishing coupling collapses the polynomial to chi^N
  for (int n : {1, 3, 5}) {
    CHECK(charpoly_sum_form(n, 2.3, 0.0) == doctest::Approx(std::pow(2.3, n)));
    CHECK(charpoly_product_form(n, 2.3, 0.0) == doctest::Approx(std::pow(2.3, n)));
  }
  // chi = 4 eps^2 puts the product-form discriminant at zero exactly
  for (int n : {2, 4, 7}) {
    const double eps = 0.8;
    const double chi = 4.0 * eps * eps;
    const double ref = charpoly(n).evaluate(chi, eps);
    CHECK(charpoly_product_form(n, chi, eps) ==
          doctest::Approx(ref).epsilon(1e-10).scale(std::max(1.0, std::abs(ref))));
  }
}

TEST_CASE("trigonometric roots of the reduced eigencondition") {
  ZRoots r1 = analytic_z_roots(1);
  REQUIRE(r1.z2_distinct.size() == 1);
  CHECK(r1.z2_distinct[0] == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(r1.z_min == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r1.z_max == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(r1.candidates.size() == 6);

  ZRoots r2 = analytic_z_roots(2);
  REQUIRE(r2.z2_distinct.size() == 2);
  const double s5 = std::sqrt(5.0);
  CHECK(std::sqrt(r2.z2_distinct[0]) == doctest::Approx((s5 - 1.0) / 4.0).epsilon(1e-12));
  CHECK(std::sqrt(r2.z2_distinct[1]) == doctest::Approx((s5 + 1.0) / 4.0).epsilon(1e-12));

  for (int n = 1; n <= 8; ++n) {
    ZRoots r = analytic_z_roots(n);
    CHECK(static_cast<int>(r.candidates.size()) == 4 * n + 2);
    CHECK(static_cast<int>(r.genuine.size()) == 4 * n);
    REQUIRE(static_cast<int>(r.z2_distinct.size()) == n);
    CHECK(std::is_sorted(r.z2_distinct.begin(), r.z2_distinct.end()));
    // no spurious unit roots survive and magnitudes stay inside (0, 1)
    for (double z : r.genuine) CHECK(std::abs(std::abs(z) - 1.0) > 1e-9);
    CHECK(r.z_max < 1.0);
    CHECK(r.z_min > 0.0);
    // each distinct z^2 is a root of the characteristic polynomial under
    // chi = 4 eps^2 z^2, at any coupling
    CharPoly p = charpoly(n);
    for (double z2 : r.z2_distinct) {
      const double eps = 1.3;
      CHECK(std::abs(p.evaluate(4.0 * eps * eps * z2, eps)) < 1e-9);
    }
  }
}

TEST_CASE("quartic with balanced loss and gain matches the chain closed form") {
  Spectrum q = quartic_frequencies(0.2, 0.2, 1.0, 0.5);
  Spectrum a = analytic_spectrum(1, 1.0, 0.1, 0.5);
  CHECK(multiset_distance(q.lambdas, a.lambdas) < 1e-10);
  CHECK(q.phase == Phase::Unbroken);
}

TEST_CASE("quartic degenerates to doubled natural frequencies") {
  Spectrum q = quartic_frequencies(0.0, 0.0, 1.3, 0.0);
  REQUIRE(q.lambdas.size() == 4);
  std::vector<std::complex<double>> expected = {
      {-1.3, 0.0}, {-1.3, 0.0}, {1.3, 0.0}, {1.3, 0.0}};
  // double roots cost half the digits through the companion solver
  CHECK(multiset_distance(q.lambdas, expected) < 1e-7);
}

TEST_CASE("quartic roots satisfy the quartic") {
  for (int trial = 0; trial < 50; ++trial) {
    const double mu = uniform(0.0, 0.5), nu = uniform(0.0, 0.5);
    const double omega = uniform(0.7, 1.5), eps = uniform(-1.0, 1.0);
    Spectrum q = quartic_frequencies(mu, nu, omega, eps);
    const std::complex<double> i(0.0, 1.0);
    for (const auto& l : q.lambdas) {
      const std::complex<double> val =
          std::pow(l, 4) - i * (mu - nu) * std::pow(l, 3) -
          (2.0 * omega * omega - mu * nu) * l * l +
          i * omega * omega * (mu - nu) * l + std::pow(omega, 4) - eps * eps;
      CHECK(std::abs(val) < 1e-10 * std::max(1.0, std::pow(std::abs(l), 4)));
    }
  }
}

TEST_CASE("closed-form spectrum satisfies the factorized eigencondition") {
  for (int n = 1; n <= 6; ++n) {
    const double omega = uniform(0.7, 1.4);
    const double gamma = uniform(0.0, 0.4 * omega);
    const double eps = uniform(0.05, 1.2);
    Spectrum s = analytic_spectrum(n, omega, gamma, eps);
    REQUIRE(static_cast<int>(s.lambdas.size()) == 4 * n);
    CharPoly p = charpoly(n);
    double scale = 0.0;
    for (int k = 0; k <= n; ++k)
      scale += std::abs(static_cast<double>(p.coeffs[k])) *
               std::pow(4.0 * std::norm(s.lambdas[0]), k) *
               std::pow(eps, 2.0 * (n - k));
    for (const auto& l : s.lambdas) {
      const std::complex<double> chi = chi_of_lambda(l, omega, gamma);
      CHECK(std::abs(p.evaluate(chi, eps)) < 1e-9 * std::max(1.0, scale));
    }
  }
}

TEST_CASE("analytic and qep spectra agree on uniform even chains") {
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 1 + static_cast<int>(uniform(0.0, 5.999));
    const double omega = uniform(0.5, 2.0);
    const double gamma = uniform(0.0, 0.5 * omega);
    const double eps = uniform(-1.5, 1.5);
    Spectrum a = analytic_spectrum(n, omega, gamma, eps);
    Spectrum q = qep_spectrum(build_uniform_chain(n, omega, gamma, eps));
    CHECK(multiset_distance(a.lambdas, q.lambdas) < 1e-7);
  }
}

TEST_CASE("spectra close under negation and conjugation") {
  for (int trial = 0; trial < 20; ++trial) {
    ChainSpec c = random_chain(1 + trial % 4, trial % 2 ? Parity::Odd : Parity::Even);
    Spectrum s = qep_spectrum(c);
    CHECK(closure_distance(s.lambdas, +[](const std::complex<double>& l) {
            return -l;
          }) < 1e-8);
    CHECK(closure_distance(s.lambdas, +[](const std::complex<double>& l) {
            return std::conj(l);
          }) < 1e-8);
  }
}

TEST_CASE("qep spectrum count and determinant residual") {
  for (Parity parity : {Parity::Even, Parity::Odd}) {
    ChainSpec c = random_chain(3, parity);
    Spectrum s = qep_spectrum(c);
    CHECK(static_cast<int>(s.lambdas.size()) == 2 * c.size());
    for (const auto& l : s.lambdas) {
      double scale = 1.0;
      for (const auto& other : s.lambdas) {
        const double d = std::abs(l - other);
        if (d > 0.0) scale *= std::max(1.0, d);
      }
      CHECK(std::abs(char_det(c, l)) < 1e-8 * scale);
    }
  }
}

TEST_CASE("hermitian limit yields a real spectrum") {
  ZRoots r = analytic_z_roots(3);
  const double omega = 1.2;
  const double safe_eps = omega * omega / (2.0 * r.z_max) - 0.05;
  Spectrum s = qep_spectrum(build_uniform_chain(3, omega, 0.0, safe_eps));
  CHECK(s.phase == Phase::Unbroken);
  CHECK(s.max_abs_imag < 1e-10);
}

TEST_CASE("phase classification at the pinned single-pair points") {
  CHECK(analytic_spectrum(1, 1.0, 0.1, 0.5).phase == Phase::Unbroken);
  CHECK(analytic_spectrum(1, 1.0, 0.1, 0.1).phase == Phase::Broken);
  CHECK(analytic_spectrum(1, 1.0, 0.1, 1.5).phase == Phase::Broken);
}

TEST_CASE("spectra come back sorted by real then imaginary part") {
  Spectrum s = qep_spectrum(build_uniform_chain(3, 1.0, 0.1, 0.3));
  for (std::size_t i = 1; i < s.lambdas.size(); ++i) {
    const auto &a = s.lambdas[i - 1], &b = s.lambdas[i];
    CHECK((a.real() < b.real() ||
           (a.real() == b.real() && a.imag() <= b.imag())));
  }
}

TEST_CASE("companion roots recover a known cubic") {
  // (z - 1)(z - 2)(z + 3) = z^3 - 7 z + 6
  std::vector<std::complex<double>> coeffs = {6.0, -7.0, 0.0, 1.0};
  auto roots = companion_roots(coeffs);
  std::vector<std::complex<double>> expected = {{-3.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
  CHECK(multiset_distance(roots, expected) < 1e-10);
  CHECK(companion_roots({{1.0, 0.0}}).empty());  // constants have no roots
}

TEST_CASE("multiset distance basics") {
  std::vector<std::complex<double>> a = {{1.0, 0.0}, {2.0, 0.0}};
  std::vector<std::complex<double>> b = {{2.0, 0.0}, {1.0, 1e-3}};
  CHECK(multiset_distance(a, b) == doctest::Approx(1e-3).epsilon(1e-9));
  CHECK_THROWS_AS(multiset_distance(a, {{1.0, 0.0}}), InvalidArgument);
}

TEST_CASE("real-frequency tolerance is relative above unit magnitude") {
  CHECK(is_real_frequency({1.0, 0.5e-9}));
  CHECK(!is_real_frequency({1.0, 2e-9}));
  CHECK(is_real_frequency({100.0, 5e-8}));  // scaled by |lambda|
  CHECK(classify({{1.0, 0.0}, {2.0, 3e-9}}) == Phase::Broken);
}

}  // TEST_SUITE
