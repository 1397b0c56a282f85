#include "ptosc/trio.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>

#include "interval_util.hpp"
#include "ptosc/errors.hpp"
#include "ptosc/io_util.hpp"
#include "ptosc/parallel.hpp"

namespace ptosc {

namespace {

void validate(const TrioParams& t) {
  if (!(t.omega > 0.0)) throw InvalidArgument("omega must be positive");
  if (t.gamma < 0.0) throw InvalidArgument("gamma must be nonnegative");
}

}  // namespace

CubicCoeffs CubicCoeffs::from(const TrioParams& t) {
  const double w2 = t.omega * t.omega, g2 = t.gamma * t.gamma;
  CubicCoeffs c;
  c.alpha = 1.0 + 2.0 * w2 - 4.0 * g2;
  c.beta = w2 * w2 + 2.0 * w2 - 2.0 * t.eps1 * t.eps1 - t.eps2 * t.eps2 - 4.0 * g2;
  c.sigma = w2 * w2 - 2.0 * t.eps1 * t.eps1 * (t.eps2 + w2) - t.eps2 * t.eps2;
  return c;
}

double CubicCoeffs::eval(double mu) const {
  return ((mu - alpha) * mu + beta) * mu - sigma;
}

Eigen::MatrixXd trio_hamiltonian_matrix(const TrioParams& t, double omega2) {
  validate(t);
  if (!(omega2 > 0.0)) throw InvalidArgument("centre frequency must be positive");
  const double w2sq = omega2 * omega2;
  const double w1sq = t.omega * t.omega, g = t.gamma;
  // Order (x, y, z, p, q, r).
  Eigen::MatrixXd Q = Eigen::MatrixXd::Zero(6, 6);
  Q(4, 4) = 0.5 * w2sq;                          // (w2^2/4) q^2
  Q(3, 5) = Q(5, 3) = 0.5 * w2sq;                // (w2^2/2) p r
  Q(1, 1) = 2.0;                                 // y^2
  Q(0, 2) = Q(2, 0) = 2.0 * (w1sq - g * g) / w2sq;
  Q(0, 1) = Q(1, 0) = -2.0 * t.eps1 / w2sq;
  Q(1, 2) = Q(2, 1) = -2.0 * t.eps1 / w2sq;
  Q(0, 0) = Q(2, 2) = -2.0 * t.eps2 / w2sq;
  Q(2, 5) = Q(5, 2) = g;                         // gamma z r
  Q(0, 3) = Q(3, 0) = -g;                        // -gamma x p
  return Q;
}

Spectrum trio_spectrum(const TrioParams& t, double imag_tol) {
  validate(t);
  const CubicCoeffs c = CubicCoeffs::from(t);
  const std::vector<std::complex<double>> coeffs = {-c.sigma, c.beta, -c.alpha, 1.0};
  std::vector<std::complex<double>> lambdas;
  lambdas.reserve(6);
  for (const std::complex<double>& mu : companion_roots(coeffs)) {
    const std::complex<double> l = std::sqrt(mu);
    lambdas.push_back(l);
    lambdas.push_back(-l);
  }
  std::sort(lambdas.begin(), lambdas.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });
  Spectrum s;
  s.lambdas = std::move(lambdas);
  s.imag_tol = imag_tol;
  s.method = SpectralMethod::Sextic;
  s.max_abs_imag = 0.0;
  for (const auto& l : s.lambdas)
    s.max_abs_imag = std::max(s.max_abs_imag, std::abs(l.imag()));
  s.phase = trio_classify(t, imag_tol);
  return s;
}

Spectrum trio_qep_spectrum(const TrioParams& t, double imag_tol) {
  validate(t);
  const double w2 = t.omega * t.omega;
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(6, 6);
  a.topRightCorner(3, 3).setIdentity();
  Eigen::Matrix3d K;
  K << w2, -t.eps1, -t.eps2, -t.eps1, 1.0, -t.eps1, -t.eps2, -t.eps1, w2;
  a.bottomLeftCorner(3, 3) = -K;
  a(3, 3) = -2.0 * t.gamma;
  a(5, 5) = 2.0 * t.gamma;
  Eigen::EigenSolver<Eigen::MatrixXd> es(a, false);
  if (es.info() != Eigen::Success)
    throw NumericalFailure("linearized pencil eigenvalue iteration did not converge");
  std::vector<std::complex<double>> lambdas(6);
  const std::complex<double> mi(0.0, -1.0);
  for (int i = 0; i < 6; ++i) lambdas[i] = mi * es.eigenvalues()[i];
  std::sort(lambdas.begin(), lambdas.end(),
            [](const std::complex<double>& x, const std::complex<double>& y) {
              if (x.real() != y.real()) return x.real() < y.real();
              return x.imag() < y.imag();
            });
  Spectrum s;
  s.max_abs_imag = 0.0;
  for (const auto& l : lambdas) s.max_abs_imag = std::max(s.max_abs_imag, std::abs(l.imag()));
  s.phase = classify(lambdas, imag_tol);
  s.lambdas = std::move(lambdas);
  s.imag_tol = imag_tol;
  s.method = SpectralMethod::Qep;
  return s;
}

Phase trio_classify(const TrioParams& t, double imag_tol) {
  validate(t);
  const CubicCoeffs c = CubicCoeffs::from(t);
  const std::vector<std::complex<double>> coeffs = {-c.sigma, c.beta, -c.alpha, 1.0};
  for (const std::complex<double>& mu : companion_roots(coeffs)) {
    const bool real = std::abs(mu.imag()) <= imag_tol * std::max(1.0, std::abs(mu));
    if (!real || mu.real() <= imag_tol) return Phase::Broken;
  }
  return Phase::Unbroken;
}

Phase trio_classify_critical(const TrioParams& t) {
  validate(t);
  const CubicCoeffs c = CubicCoeffs::from(t);
  const double disc = c.alpha * c.alpha - 3.0 * c.beta;
  if (disc <= 0.0) return Phase::Broken;
  // For an upward cubic the smaller critical point is the local maximum.
  const double mu_max = (c.alpha - std::sqrt(disc)) / 3.0;
  const double mu_min = (c.alpha + std::sqrt(disc)) / 3.0;
  const bool unbroken =
      mu_max > 0.0 && c.sigma > 0.0 && c.eval(mu_max) > 0.0 && c.eval(mu_min) < 0.0;
  return unbroken ? Phase::Unbroken : Phase::Broken;
}

std::vector<PhaseInterval> trio_intervals(const TrioParams& base, double eps2_lo,
                                          double eps2_hi, int grid_points,
                                          double refine_tol) {
  if (!(eps2_hi > eps2_lo)) throw InvalidArgument("eps2 range must be increasing");
  if (grid_points < 16) throw InvalidArgument("grid_points must be at least 16");
  validate(base);
  auto phase_at = [&](double e2) {
    TrioParams t = base;
    t.eps2 = e2;
    return trio_classify(t);
  };
  std::vector<double> grid(grid_points);
  std::vector<Phase> phases(grid_points);
  for (int i = 0; i < grid_points; ++i)
    grid[i] = eps2_lo + (eps2_hi - eps2_lo) * i / (grid_points - 1);
  for (int i = 0; i < grid_points; ++i) phases[i] = phase_at(grid[i]);
  return detail::group_and_refine(grid, phases, phase_at, refine_tol);
}

PhaseDiagram trio_phase_diagram(double omega, double gamma, double eps1_lo,
                                double eps1_hi, double eps2_lo, double eps2_hi,
                                int resolution) {
  if (resolution < 32) throw InvalidArgument("resolution must be at least 32 per axis");
  if (!(eps1_hi > eps1_lo) || !(eps2_hi > eps2_lo))
    throw InvalidArgument("coupling ranges must be increasing");
  PhaseDiagram d;
  d.eps1_grid.resize(resolution);
  d.eps2_grid.resize(resolution);
  for (int i = 0; i < resolution; ++i) {
    d.eps1_grid[i] = eps1_lo + (eps1_hi - eps1_lo) * i / (resolution - 1);
    d.eps2_grid[i] = eps2_lo + (eps2_hi - eps2_lo) * i / (resolution - 1);
  }
  d.unbroken.assign(static_cast<std::size_t>(resolution) * resolution, 0);
  parallel_for(resolution, [&](int i1) {
    TrioParams t;
    t.omega = omega;
    t.gamma = gamma;
    for (int i2 = 0; i2 < resolution; ++i2) {
      t.eps1 = d.eps1_grid[i1];
      t.eps2 = d.eps2_grid[i2];
      if (trio_classify(t) == Phase::Unbroken)
        d.unbroken[static_cast<std::size_t>(i1) * resolution + i2] = 1;
    }
  });
  d.unbroken_count = 0;
  for (std::uint8_t u : d.unbroken) d.unbroken_count += u;
  return d;
}

ImTrace trio_im_lambda_trace(double omega, double gamma, double eps1, double eps2_lo,
                             double eps2_hi, int points) {
  if (points < 64) throw InvalidArgument("points must be at least 64");
  if (!(eps2_hi > eps2_lo)) throw InvalidArgument("eps2 range must be increasing");
  ImTrace trace;
  trace.eps2.resize(points);
  trace.im.resize(points);
  for (int i = 0; i < points; ++i) {
    TrioParams t;
    t.omega = omega;
    t.gamma = gamma;
    t.eps1 = eps1;
    t.eps2 = eps2_lo + (eps2_hi - eps2_lo) * i / (points - 1);
    trace.eps2[i] = t.eps2;
    const Spectrum s = trio_spectrum(t);
    std::array<double, 6> im{};
    for (int k = 0; k < 6; ++k) im[static_cast<std::size_t>(k)] = s.lambdas[k].imag();
    std::sort(im.begin(), im.end());
    trace.im[i] = im;
  }
  return trace;
}

std::string phase_diagram_csv(const PhaseDiagram& d) {
  std::string out = "eps1,eps2,unbroken\n";
  for (std::size_t i1 = 0; i1 < d.eps1_grid.size(); ++i1)
    for (std::size_t i2 = 0; i2 < d.eps2_grid.size(); ++i2) {
      out += g17(d.eps1_grid[i1]);
      out += ",";
      out += g17(d.eps2_grid[i2]);
      out += ",";
      out += d.at(static_cast<int>(i1), static_cast<int>(i2)) ? "1" : "0";
      out += "\n";
    }
  return out;
}

std::string phase_diagram_json(const PhaseDiagram& d) {
  std::string out = "{\n  \"eps1_grid\": [";
  for (std::size_t i = 0; i < d.eps1_grid.size(); ++i) {
    if (i) out += ", ";
    out += g17(d.eps1_grid[i]);
  }
  out += "],\n  \"eps2_grid\": [";
  for (std::size_t i = 0; i < d.eps2_grid.size(); ++i) {
    if (i) out += ", ";
    out += g17(d.eps2_grid[i]);
  }
  out += "],\n  \"unbroken_count\": " + std::to_string(d.unbroken_count);
  out += ",\n  \"unbroken\": [\n";
  for (std::size_t i1 = 0; i1 < d.eps1_grid.size(); ++i1) {
    out += "    [";
    for (std::size_t i2 = 0; i2 < d.eps2_grid.size(); ++i2) {
      if (i2) out += ",";
      out += d.at(static_cast<int>(i1), static_cast<int>(i2)) ? "1" : "0";
    }
    out += i1 + 1 < d.eps1_grid.size() ? "],\n" : "]\n";
  }
  out += "  ]\n}\n";
  return out;
}

std::string im_trace_csv(const ImTrace& t) {
  std::string out = "eps2,im1,im2,im3,im4,im5,im6\n";
  for (std::size_t i = 0; i < t.eps2.size(); ++i) {
    out += g17(t.eps2[i]);
    for (double v : t.im[i]) {
      out += ",";
      out += g17(v);
    }
    out += "\n";
  }
  return out;
}

}  // namespace ptosc
