#ifndef PTOSC_SPECTRAL_HPP
#define PTOSC_SPECTRAL_HPP

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ptosc/chain.hpp"

namespace ptosc {

inline constexpr double kDefaultImagTol = 1e-9;

enum class Phase { Unbroken, Broken };
enum class SpectralMethod { Analytic, Qep, Quartic, Sextic };

// A frequency lambda is treated as real when |Im lambda| <= tol * max(1, |lambda|).
bool is_real_frequency(std::complex<double> lambda, double imag_tol = kDefaultImagTol);
Phase classify(const std::vector<std::complex<double>>& lambdas,
               double imag_tol = kDefaultImagTol);

struct Spectrum {
  std::vector<std::complex<double>> lambdas;  // sorted by (Re, Im)
  Phase phase = Phase::Unbroken;
  double max_abs_imag = 0.0;
  double imag_tol = kDefaultImagTol;
  SpectralMethod method = SpectralMethod::Qep;

  double max_abs() const;
};

// Characteristic polynomial of the uniform even chain as a polynomial in
// chi = lambda^4 + lambda^2 (4 gamma^2 - 2 omega^2) + omega^4 and epsilon:
//   P_N = sum_k coeffs[k] chi^k eps^{2(N-k)}.
// Coefficients are exact integers; they overflow int64 beyond n_pairs = 47,
// which throws OverflowError (checked arithmetic, bound asserted in tests).
struct CharPoly {
  int n_pairs = 0;
  std::vector<std::int64_t> coeffs;  // index k multiplies chi^k

  double evaluate(double chi, double eps) const;
  std::complex<double> evaluate(std::complex<double> chi, double eps) const;
  // e.g. "-e^6 + 6 x e^4 - 5 x^2 e^2 + x^3" (chi printed as x, epsilon as e)
  std::string str() const;
};

// Three-term recursion P_N = (chi - 2 eps^2) P_{N-1} - eps^4 P_{N-2}.
CharPoly charpoly(int n_pairs);

// Independent closed-form evaluations of the same polynomial.
// Sum form: binomial-type coefficients with the half-integer Gamma function
// rewritten through double factorials.  Product form: the two-base closed
// expression in y = -chi/(4 eps^2); the degenerate discriminant case falls
// back to the recursion.
double charpoly_sum_form(int n_pairs, double chi, double eps);
double charpoly_product_form(int n_pairs, double chi, double eps);

double chi_of_lambda(double lambda, double omega, double gamma);
std::complex<double> chi_of_lambda(std::complex<double> lambda, double omega, double gamma);

// Trigonometric roots z of the reduced uniform-chain eigencondition.  The
// candidate family is sin(pi (2k+1) / (4N+2)), k = 0..4N+1; |z| = 1 entries
// are spurious.  The genuine z^2 values (N of them) are the roots of
// charpoly(N) under chi = 4 eps^2 z^2.
struct ZRoots {
  std::vector<double> candidates;   // all 4N+2 values
  std::vector<double> genuine;      // spurious |z| = 1 removed
  std::vector<double> z2_distinct;  // N distinct squared values, ascending
  double z_min = 0.0, z_max = 0.0;  // extremes of |z| over the genuine set
};
ZRoots analytic_z_roots(int n_pairs);

// Roots of a dense polynomial sum_i coeffs[i] z^i via the companion matrix.
std::vector<std::complex<double>> companion_roots(
    const std::vector<std::complex<double>>& coeffs);

// Frequencies of the two-oscillator system with independent loss mu and gain
// nu: the quartic lambda^4 - i(mu-nu) lambda^3 - (2 omega^2 - mu nu) lambda^2
// + i omega^2 (mu-nu) lambda + omega^4 - eps^2 = 0.
Spectrum quartic_frequencies(double mu, double nu, double omega, double epsilon,
                             double imag_tol = kDefaultImagTol);

// Uniform even chain, closed form: for each genuine z^2,
//   lambda^2 = omega^2 - 2 gamma^2 +- 2 sqrt(gamma^2 (gamma^2 - omega^2) + eps^2 z^2).
Spectrum analytic_spectrum(int n_pairs, double omega, double gamma, double epsilon,
                           double imag_tol = kDefaultImagTol);

// Any chain: quadratic eigenvalue problem of the second-order system,
// linearized to a double-size companion pencil.
Spectrum qep_spectrum(const ChainSpec& spec, double imag_tol = kDefaultImagTol);

// Determinant of the alternating tridiagonal frequency matrix at lambda
// (diagonal lambda^2 - omega_j^2 -+ 2i lambda gamma_j, off-diagonal -eps),
// evaluated by the continuant recurrence.  Zero exactly at eigenfrequencies.
std::complex<double> char_det(const ChainSpec& spec, std::complex<double> lambda);

// Greedy nearest-pair matching distance between two frequency multisets.
double multiset_distance(std::vector<std::complex<double>> a,
                         std::vector<std::complex<double>> b);

}  // namespace ptosc

#endif
