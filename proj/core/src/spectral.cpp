#include "ptosc/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "ptosc/errors.hpp"

namespace ptosc {

namespace {

std::int64_t checked_add(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_add_overflow(a, b, &r))
    throw OverflowError("characteristic polynomial coefficient exceeds 64-bit range");
  return r;
}

std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
  std::int64_t r;
  if (__builtin_mul_overflow(a, b, &r))
    throw OverflowError("characteristic polynomial coefficient exceeds 64-bit range");
  return r;
}

Spectrum finish_spectrum(std::vector<std::complex<double>> lambdas, double imag_tol,
                         SpectralMethod method) {
  std::sort(lambdas.begin(), lambdas.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });
  Spectrum s;
  s.max_abs_imag = 0.0;
  for (const auto& l : lambdas)
    s.max_abs_imag = std::max(s.max_abs_imag, std::abs(l.imag()));
  s.phase = classify(lambdas, imag_tol);
  s.lambdas = std::move(lambdas);
  s.imag_tol = imag_tol;
  s.method = method;
  return s;
}

double eval_recursion(int n_pairs, double chi, double eps) {
  const double e2 = eps * eps;
  double p0 = 1.0, p1 = chi - e2;
  if (n_pairs == 0) return p0;
  for (int n = 2; n <= n_pairs; ++n) {
    const double next = (chi - 2.0 * e2) * p1 - e2 * e2 * p0;
    p0 = p1;
    p1 = next;
  }
  return p1;
}

}  // namespace

bool is_real_frequency(std::complex<double> lambda, double imag_tol) {
  return std::abs(lambda.imag()) <= imag_tol * std::max(1.0, std::abs(lambda));
}

Phase classify(const std::vector<std::complex<double>>& lambdas, double imag_tol) {
  for (const auto& l : lambdas)
    if (!is_real_frequency(l, imag_tol)) return Phase::Broken;
  return Phase::Unbroken;
}

double Spectrum::max_abs() const {
  double m = 0.0;
  for (const auto& l : lambdas) m = std::max(m, std::abs(l));
  return m;
}

double CharPoly::evaluate(double chi, double eps) const {
  const double e2 = eps * eps;
  double result = 0.0;
  double chipow = 1.0;
  std::vector<double> e2pow(coeffs.size());
  e2pow[coeffs.size() - 1] = 1.0;
  for (int k = static_cast<int>(coeffs.size()) - 2; k >= 0; --k)
    e2pow[k] = e2pow[k + 1] * e2;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    result += static_cast<double>(coeffs[k]) * chipow * e2pow[k];
    chipow *= chi;
  }
  return result;
}

std::complex<double> CharPoly::evaluate(std::complex<double> chi, double eps) const {
  const double e2 = eps * eps;
  std::complex<double> result = 0.0;
  std::complex<double> chipow = 1.0;
  std::vector<double> e2pow(coeffs.size());
  e2pow[coeffs.size() - 1] = 1.0;
  for (int k = static_cast<int>(coeffs.size()) - 2; k >= 0; --k)
    e2pow[k] = e2pow[k + 1] * e2;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    result += static_cast<double>(coeffs[k]) * chipow * e2pow[k];
    chipow *= chi;
  }
  return result;
}

std::string CharPoly::str() const {
  std::string out;
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    const std::int64_t c = coeffs[k];
    if (c == 0) continue;
    const std::int64_t mag = c < 0 ? -c : c;
    if (out.empty()) {
      if (c < 0) out += "-";
    } else {
      out += c < 0 ? " - " : " + ";
    }
    std::string term;
    const int epow = 2 * (n_pairs - static_cast<int>(k));
    const bool has_var = k > 0 || epow > 0;
    if (mag != 1 || !has_var) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%lld", static_cast<long long>(mag));
      term = buf;
    }
    if (k >= 1) {
      if (!term.empty()) term += " ";
      term += "x";
      if (k > 1) {
        char buf[16];
        std::snprintf(buf, sizeof(buf), "^%d", static_cast<int>(k));
        term += buf;
      }
    }
    if (epow > 0) {
      if (!term.empty()) term += " ";
      char buf[16];
      std::snprintf(buf, sizeof(buf), "e^%d", epow);
      term += buf;
    }
    out += term;
  }
  if (out.empty()) out = "0";
  return out;
}

CharPoly charpoly(int n_pairs) {
  if (n_pairs < 0) throw InvalidArgument("n_pairs must be nonnegative");
  std::vector<std::int64_t> prev2{1};       // degree 0
  std::vector<std::int64_t> prev{-1, 1};    // degree 1
  if (n_pairs == 0) return {0, prev2};
  if (n_pairs == 1) return {1, prev};
  for (int n = 2; n <= n_pairs; ++n) {
    std::vector<std::int64_t> c(n + 1, 0);
    for (int k = 0; k <= n; ++k) {
      std::int64_t v = 0;
      if (k >= 1) v = checked_add(v, prev[k - 1]);
      if (k <= n - 1) v = checked_add(v, checked_mul(-2, prev[k]));
      if (k <= n - 2) v = checked_add(v, -prev2[k]);
      c[k] = v;
    }
    prev2 = std::move(prev);
    prev = std::move(c);
  }
  return {n_pairs, prev};
}

double charpoly_sum_form(int n_pairs, double chi, double eps) {
  if (n_pairs < 0) throw InvalidArgument("n_pairs must be nonnegative");
  auto fact = [](int m) {
    double f = 1.0;
    for (int i = 2; i <= m; ++i) f *= i;
    return f;
  };
  double total = 0.0;
  for (int k = 0; k <= n_pairs; ++k) {
    double dfact = 1.0;  // (2(N-k)-1)!!
    for (int m = 2 * (n_pairs - k) - 1; m >= 1; m -= 2) dfact *= m;
    const double coef = std::pow(4.0, k - n_pairs) * fact(2 * n_pairs - k) *
                        (std::pow(2.0, n_pairs - k) / dfact) /
                        (fact(n_pairs - k) * fact(k));
    total += (k % 2 == 0 ? 1.0 : -1.0) * coef * std::pow(chi, n_pairs - k) *
             std::pow(eps, 2 * k);
  }
  return total;
}

double charpoly_product_form(int n_pairs, double chi, double eps) {
  if (n_pairs < 0) throw InvalidArgument("n_pairs must be nonnegative");
  if (eps == 0.0) return std::pow(chi, n_pairs);
  const std::complex<double> y(-chi / (4.0 * eps * eps), 0.0);
  const std::complex<double> delta = std::sqrt(y * (y + 1.0));
  if (std::abs(delta) < 1e-300) return eval_recursion(n_pairs, chi, eps);
  // The two bases multiply to exactly 1; evaluate powers of the larger one
  // and take reciprocals so neither factor underflows or cancels.
  const std::complex<double> u1 = 1.0 + 2.0 * y - 2.0 * delta;
  const std::complex<double> u2 = 1.0 + 2.0 * y + 2.0 * delta;
  const bool pick1 = std::abs(u1) >= std::abs(u2);
  const std::complex<double> u = pick1 ? u1 : u2;
  const std::complex<double> un = std::pow(u, n_pairs);
  const std::complex<double> val =
      pick1 ? un * (delta - y) + (delta + y) / un : (delta - y) / un + un * (delta + y);
  const double sign = (n_pairs % 2 == 0) ? 1.0 : -1.0;
  return (std::pow(eps, 2 * n_pairs) / (2.0 * delta) * sign * val).real();
}

double chi_of_lambda(double lambda, double omega, double gamma) {
  const double l2 = lambda * lambda;
  return l2 * l2 + l2 * (4.0 * gamma * gamma - 2.0 * omega * omega) +
         omega * omega * omega * omega;
}

std::complex<double> chi_of_lambda(std::complex<double> lambda, double omega,
                                   double gamma) {
  const std::complex<double> l2 = lambda * lambda;
  return l2 * l2 + l2 * (4.0 * gamma * gamma - 2.0 * omega * omega) +
         omega * omega * omega * omega;
}

ZRoots analytic_z_roots(int n_pairs) {
  if (n_pairs < 1) throw InvalidArgument("n_pairs must be at least 1");
  ZRoots out;
  const double denom = 4.0 * n_pairs + 2.0;
  for (int k = 0; k <= 4 * n_pairs + 1; ++k)
    out.candidates.push_back(std::sin(std::numbers::pi * (2 * k + 1) / denom));
  for (double z : out.candidates)
    if (std::abs(std::abs(z) - 1.0) > 1e-12) out.genuine.push_back(z);
  for (int k = 0; k < n_pairs; ++k) {
    const double z = std::sin(std::numbers::pi * (2 * k + 1) / denom);
    out.z2_distinct.push_back(z * z);
  }
  out.z_min = std::sin(std::numbers::pi / denom);
  out.z_max = std::sin(std::numbers::pi * (2 * n_pairs - 1) / denom);
  return out;
}

std::vector<std::complex<double>> companion_roots(
    const std::vector<std::complex<double>>& coeffs) {
  int d = static_cast<int>(coeffs.size()) - 1;
  while (d > 0 && coeffs[d] == std::complex<double>(0.0)) --d;
  if (d <= 0) return {};
  Eigen::MatrixXcd cm = Eigen::MatrixXcd::Zero(d, d);
  for (int i = 1; i < d; ++i) cm(i, i - 1) = 1.0;
  for (int i = 0; i < d; ++i) cm(i, d - 1) = -coeffs[i] / coeffs[d];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(cm, false);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("companion matrix eigenvalue iteration did not converge");
  const auto& ev = es.eigenvalues();
  return {ev.data(), ev.data() + ev.size()};
}

Spectrum quartic_frequencies(double mu, double nu, double omega, double epsilon,
                             double imag_tol) {
  if (!(omega > 0.0)) throw InvalidArgument("omega must be positive");
  const std::complex<double> i(0.0, 1.0);
  const double w2 = omega * omega;
  const std::vector<std::complex<double>> coeffs = {
      w2 * w2 - epsilon * epsilon, i * w2 * (mu - nu), -(2.0 * w2 - mu * nu),
      -i * (mu - nu), 1.0};
  return finish_spectrum(companion_roots(coeffs), imag_tol, SpectralMethod::Quartic);
}

Spectrum analytic_spectrum(int n_pairs, double omega, double gamma, double epsilon,
                           double imag_tol) {
  if (n_pairs < 1) throw InvalidArgument("n_pairs must be at least 1");
  if (!(omega > 0.0)) throw InvalidArgument("omega must be positive");
  if (gamma < 0.0) throw InvalidArgument("gamma must be nonnegative");
  const ZRoots z = analytic_z_roots(n_pairs);
  const double w2 = omega * omega, g2 = gamma * gamma;
  std::vector<std::complex<double>> lambdas;
  lambdas.reserve(4 * n_pairs);
  for (double z2 : z.z2_distinct) {
    const std::complex<double> inner =
        std::sqrt(std::complex<double>(g2 * (g2 - w2) + epsilon * epsilon * z2));
    for (double s1 : {1.0, -1.0}) {
      const std::complex<double> l =
          std::sqrt(std::complex<double>(w2 - 2.0 * g2) + 2.0 * s1 * inner);
      lambdas.push_back(l);
      lambdas.push_back(-l);
    }
  }
  return finish_spectrum(std::move(lambdas), imag_tol, SpectralMethod::Analytic);
}

Spectrum qep_spectrum(const ChainSpec& spec, double imag_tol) {
  const int n = spec.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  a.topRightCorner(n, n).setIdentity();
  for (int j = 1; j <= n; ++j) {
    a(n + j - 1, n + j - 1) = -2.0 * spec.gamma_signed_at(j);
    a(n + j - 1, j - 1) = -spec.omega_at(j) * spec.omega_at(j);
    if (j > 1) a(n + j - 1, j - 2) = -spec.bond_epsilon(j - 1);
    if (j < n) a(n + j - 1, j) = -spec.bond_epsilon(j);
  }
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("linearized pencil eigenvalue iteration did not converge");
  std::vector<std::complex<double>> lambdas(2 * n);
  const std::complex<double> mi(0.0, -1.0);
  for (int i = 0; i < 2 * n; ++i) lambdas[i] = mi * es.eigenvalues()[i];
  return finish_spectrum(std::move(lambdas), imag_tol, SpectralMethod::Qep);
}

std::complex<double> char_det(const ChainSpec& spec, std::complex<double> lambda) {
  const int n = spec.size();
  const std::complex<double> i2(0.0, 2.0);
  std::complex<double> dprev = 1.0, d = 1.0;
  for (int j = 1; j <= n; ++j) {
    const double w = spec.omega_at(j);
    const std::complex<double> diag =
        lambda * lambda - w * w - i2 * lambda * spec.gamma_signed_at(j);
    std::complex<double> next = diag * d;
    if (j > 1) {
      const double e = spec.bond_epsilon(j - 1);
      next -= e * e * dprev;
    }
    dprev = d;
    d = next;
  }
  return d;
}

double multiset_distance(std::vector<std::complex<double>> a,
                         std::vector<std::complex<double>> b) {
  if (a.size() != b.size())
    throw InvalidArgument("multiset distance requires equal-size sets");
  double worst = 0.0;
  for (const auto& x : a) {
    std::size_t best = 0;
    double bestd = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < b.size(); ++i) {
      const double d = std::abs(x - b[i]);
      if (d < bestd) {
        bestd = d;
        best = i;
      }
    }
    worst = std::max(worst, bestd);
    b.erase(b.begin() + static_cast<std::ptrdiff_t>(best));
  }
  return worst;
}

}  // namespace ptosc
