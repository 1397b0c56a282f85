#include "ptosc/impurity.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "ptosc/errors.hpp"
#include "ptosc/io_util.hpp"

namespace ptosc {

namespace {

using Cplx = std::complex<double>;

void validate(const ContinuumParams& p) {
  if (!(p.c > 0.0)) throw InvalidArgument("wave speed must be positive");
  if (!(p.omega2 > 0.0)) throw InvalidArgument("background frequency must be positive");
}

}  // namespace

ContinuumParams continuum_parameters(double rho, double k, double Gamma, double mu1,
                                     double nu1, double mu2, double nu2) {
  if (!(rho > 0.0)) throw InvalidArgument("mass density must be positive");
  if (!(k > 0.0)) throw InvalidArgument("spring stiffness must be positive");
  ContinuumParams p;
  p.c = std::sqrt(k / rho);
  p.gamma = Gamma / rho;
  p.omega2 = (mu1 * nu1 * nu1 + mu2 * nu2 * nu2) / rho;
  p.epsilon = -mu2 * nu2 * nu2 / rho;
  return p;
}

ImpurityMode impurity_mode(const ContinuumParams& params, double Omega,
                           double half_width, int points) {
  validate(params);
  if (!(Omega > 0.0)) throw InvalidArgument("mode frequency must be positive");
  if (params.gamma == 0.0)
    throw InvalidArgument("a localized mode needs a nonzero impurity strength");
  if (points < 5 || points % 2 == 0)
    throw InvalidArgument("points must be odd and at least 5 so the grid contains 0");

  const double w2 = params.omega2, eps = params.epsilon, c = params.c;
  const double window_lo = w2 - eps, window_hi = w2 + eps;
  const double a2 = w2 - Omega * Omega + eps;
  const double b2 = Omega * Omega - w2 + eps;
  if (!(a2 > 0.0) || !(b2 > 0.0))
    throw NoPseudoBoundState(
        "no localized mode: need a^2 = omega^2 - Omega^2 + eps > 0 and "
        "b^2 = Omega^2 - omega^2 + eps > 0, i.e. Omega^2 in (" +
        g17(window_lo) + ", " + g17(window_hi) + ")");

  ImpurityMode mode;
  mode.Omega = Omega;
  mode.a = std::sqrt(a2);
  mode.b = std::sqrt(b2);
  mode.window_lo = window_lo;
  mode.window_hi = window_hi;
  if (half_width <= 0.0) half_width = 10.0 * c / mode.a;

  mode.x.resize(points);
  mode.s.resize(points);
  mode.d.resize(points);
  const Cplx i(0.0, 1.0);
  const double cos_amp = mode.a * c / (params.gamma * Omega);
  const double sin_amp = params.gamma * Omega / (mode.b * c);
  for (int j = 0; j < points; ++j) {
    const double x = -half_width + 2.0 * half_width * j / (points - 1);
    mode.x[j] = x;
    mode.s[j] = std::exp(-mode.a * std::abs(x) / c);
    mode.d[j] = i * (cos_amp * std::cos(mode.b * x / c) +
                     sin_amp * std::sin(mode.b * std::abs(x) / c));
  }

  // Bulk residuals of the stationary equations away from the impurity, with
  // the curvature taken analytically: s'' = (a/c)^2 s and d'' = -(b/c)^2 d.
  double rs = 0.0, rd = 0.0;
  for (int j = 0; j < points; ++j) {
    if (mode.x[j] == 0.0) continue;
    rs = std::max(rs, std::abs((w2 + eps - Omega * Omega - a2) * mode.s[j]));
    rd = std::max(rd, std::abs((w2 - eps - Omega * Omega + b2) * mode.d[j]));
  }
  mode.bulk_residual_s = rs;
  mode.bulk_residual_d = rd;

  // Derivative jumps across x = 0 against the delta-impurity couplings,
  // using the one-sided analytic derivatives.
  const Cplx ds_jump = Cplx(-2.0 * mode.a / c, 0.0);
  const Cplx dd_jump = i * 2.0 * params.gamma * Omega / (c * c);
  const Cplx s0(1.0, 0.0);
  const Cplx d0 = i * cos_amp;
  mode.jump_residual_s = std::abs(c * c * ds_jump - 2.0 * params.gamma * i * Omega * d0);
  mode.jump_residual_d = std::abs(c * c * dd_jump - 2.0 * params.gamma * i * Omega * s0);
  return mode;
}

FdResult fd_wave_solver(const ContinuumParams& params,
                        const std::function<double(double)>& gamma_of_x,
                        const Eigen::VectorXcd& S0, const Eigen::VectorXcd& St0,
                        const Eigen::VectorXcd& D0, const Eigen::VectorXcd& Dt0,
                        const FdConfig& config) {
  validate(params);
  const int nx = config.grid.points;
  if (nx < 16) throw InvalidArgument("grid needs at least 16 points");
  if (!(config.grid.x_max > config.grid.x_min))
    throw InvalidArgument("grid range must be increasing");
  if (!(config.dt > 0.0) || !(config.t_end > 0.0))
    throw InvalidArgument("t_end and dt must be positive");
  if (S0.size() != nx || St0.size() != nx || D0.size() != nx || Dt0.size() != nx)
    throw InvalidArgument("initial fields must match the grid size");
  if (config.sponge_fraction < 0.0 || config.sponge_fraction > 0.45)
    throw InvalidArgument("sponge_fraction must lie in [0, 0.45]");

  const bool periodic = config.boundary == Boundary::Periodic;
  const double span = config.grid.x_max - config.grid.x_min;
  const double dx = periodic ? span / nx : span / (nx - 1);
  const double cfl = params.c * config.dt / dx;
  if (cfl > 0.5 + 1e-12)
    throw InvalidArgument("Courant number " + g17(cfl) +
                          " exceeds 0.5; reduce dt or refine the grid");

  FdResult result;
  result.cfl = cfl;
  result.x.resize(nx);
  for (int j = 0; j < nx; ++j) result.x[j] = config.grid.x_min + j * dx;

  Eigen::ArrayXd g(nx);
  for (int j = 0; j < nx; ++j) g[j] = gamma_of_x(result.x[j]);

  // Quadratic sponge ramp over the outer fraction of an absorbing grid.
  Eigen::ArrayXd sig = Eigen::ArrayXd::Zero(nx);
  if (!periodic && config.sponge_fraction > 0.0) {
    const int wdt = static_cast<int>(nx * config.sponge_fraction);
    for (int j = 0; j < wdt; ++j) {
      const double r = wdt > 1 ? static_cast<double>(j) / (wdt - 1) : 1.0;
      sig[wdt - 1 - j] = r * r * 8.0;
      sig[nx - wdt + j] = r * r * 8.0;
    }
  }

  const double w2 = params.omega2, eps = params.epsilon;
  const double c2 = params.c * params.c, dt = config.dt;
  using ArrC = Eigen::ArrayXcd;
  auto lap = [&](const ArrC& u) {
    ArrC v = ArrC::Zero(nx);
    if (periodic) {
      for (int j = 0; j < nx; ++j) {
        const int jm = j == 0 ? nx - 1 : j - 1;
        const int jp = j == nx - 1 ? 0 : j + 1;
        v[j] = (u[jp] - 2.0 * u[j] + u[jm]) / (dx * dx);
      }
    } else {
      for (int j = 1; j + 1 < nx; ++j)
        v[j] = (u[j + 1] - 2.0 * u[j] + u[j - 1]) / (dx * dx);
    }
    return v;
  };

  ArrC S = S0.array(), D = D0.array();
  const ArrC as0 = c2 * lap(S) - (w2 + eps) * S;
  const ArrC ad0 = c2 * lap(D) - (w2 - eps) * D;
  ArrC Sp = S - dt * St0.array() + 0.5 * dt * dt * (as0 - 2.0 * g * Dt0.array());
  ArrC Dp = D - dt * Dt0.array() + 0.5 * dt * dt * (ad0 - 2.0 * g * St0.array());

  const Eigen::ArrayXd aa = 1.0 + sig * (dt / 2.0);
  const Eigen::ArrayXd bb = g * dt;
  const Eigen::ArrayXd det = aa * aa - bb * bb;
  if (det.abs().minCoeff() < 1e-12)
    throw NumericalFailure("implicit coupling solve is singular; reduce dt");
  const ArrC aaC = aa.cast<Cplx>(), bbC = bb.cast<Cplx>();
  const ArrC sigC = (sig * (dt / 2.0)).cast<Cplx>();
  const ArrC detC = det.cast<Cplx>();

  const int steps = static_cast<int>(std::llround(config.t_end / dt));
  if (steps < 1) throw InvalidArgument("t_end must cover at least one step");

  auto push_frame = [&](double t, const ArrC& s_arr, const ArrC& d_arr) {
    FieldFrame f;
    f.t = t;
    f.S = s_arr.matrix();
    f.D = d_arr.matrix();
    result.frames.push_back(std::move(f));
  };
  if (config.store_every > 0) push_frame(0.0, S, D);

  // Time stepping is sequential; the per-step spatial work is whole-array
  // vectorized.  The first-derivative couplings use a centred implicit
  // 2x2 solve per grid point to keep the scheme second order.
  for (int s = 1; s <= steps; ++s) {
    const ArrC as = c2 * lap(S) - (w2 + eps) * S;
    const ArrC ad = c2 * lap(D) - (w2 - eps) * D;
    const ArrC rs = 2.0 * S - Sp + dt * dt * as + sigC * Sp + bbC * Dp;
    const ArrC rd = 2.0 * D - Dp + dt * dt * ad + sigC * Dp + bbC * Sp;
    const ArrC Snew = (aaC * rs - bbC * rd) / detC;
    const ArrC Dnew = (aaC * rd - bbC * rs) / detC;
    Sp = S;
    Dp = D;
    S = Snew;
    D = Dnew;
    if (config.store_every > 0 && s % config.store_every == 0)
      push_frame(s * dt, S, D);
  }
  if (result.frames.empty() || result.frames.back().t != steps * dt)
    push_frame(steps * dt, S, D);
  return result;
}

double wave_dispersion_sq(const ContinuumParams& params, double k, int branch) {
  validate(params);
  if (branch != 1 && branch != -1) throw InvalidArgument("branch must be +1 or -1");
  return params.omega2 + branch * params.epsilon + params.c * params.c * k * k;
}

double chain_dispersion_sq(const ContinuumParams& params, double k, int branch,
                           double delta) {
  validate(params);
  if (branch != 1 && branch != -1) throw InvalidArgument("branch must be +1 or -1");
  if (!(delta > 0.0)) throw InvalidArgument("spacing must be positive");
  const double s = std::sin(0.5 * k * delta);
  return params.omega2 + branch * params.epsilon +
         4.0 * params.c * params.c * s * s / (delta * delta);
}

std::string field_frame_csv(const FdResult& result, const FieldFrame& frame) {
  std::string out = "x,re_s,im_s,re_d,im_d\n";
  for (Eigen::Index j = 0; j < result.x.size(); ++j) {
    out += g17(result.x[j]);
    out += ",";
    out += g17(frame.S[j].real());
    out += ",";
    out += g17(frame.S[j].imag());
    out += ",";
    out += g17(frame.D[j].real());
    out += ",";
    out += g17(frame.D[j].imag());
    out += "\n";
  }
  return out;
}

std::string field_frames_json(const FdResult& result) {
  std::string out = "{\n  \"cfl\": " + g17(result.cfl) + ",\n  \"x\": [";
  for (Eigen::Index j = 0; j < result.x.size(); ++j) {
    if (j) out += ", ";
    out += g17(result.x[j]);
  }
  out += "],\n  \"frames\": [\n";
  for (std::size_t f = 0; f < result.frames.size(); ++f) {
    const FieldFrame& frame = result.frames[f];
    out += "    {\"t\": " + g17(frame.t);
    auto emit = [&](const char* key, auto getter) {
      out += ", \"";
      out += key;
      out += "\": [";
      for (Eigen::Index j = 0; j < frame.S.size(); ++j) {
        if (j) out += ", ";
        out += g17(getter(j));
      }
      out += "]";
    };
    emit("re_s", [&](Eigen::Index j) { return frame.S[j].real(); });
    emit("im_s", [&](Eigen::Index j) { return frame.S[j].imag(); });
    emit("re_d", [&](Eigen::Index j) { return frame.D[j].real(); });
    emit("im_d", [&](Eigen::Index j) { return frame.D[j].imag(); });
    out += f + 1 < result.frames.size() ? "},\n" : "}\n";
  }
  out += "  ]\n}\n";
  return out;
}

}  // namespace ptosc
