#include "ptosc/chain.hpp"

#include <cmath>
#include <utility>

#include <json.hpp>

#include "ptosc/errors.hpp"

namespace ptosc {

namespace {

int pair_index(int j, int n) { return std::min(j, n + 1 - j); }

bool all_equal(const Eigen::VectorXd& v) {
  for (Eigen::Index i = 1; i < v.size(); ++i)
    if (v[i] != v[0]) return false;
  return true;
}

}  // namespace

double ChainSpec::omega_at(int j) const {
  const int n = size();
  if (j < 1 || j > n) throw InvalidArgument("oscillator index out of range");
  if (parity == Parity::Odd && j == n_pairs + 1) return 1.0;  // neutral centre
  return omegas[pair_index(j, n) - 1];
}

double ChainSpec::gamma_at(int j) const {
  const int n = size();
  if (j < 1 || j > n) throw InvalidArgument("oscillator index out of range");
  if (parity == Parity::Odd && j == n_pairs + 1) return 0.0;
  return gammas[pair_index(j, n) - 1];
}

double ChainSpec::gamma_signed_at(int j) const {
  const int n = size();
  if (j < 1 || j > n) throw InvalidArgument("oscillator index out of range");
  if (parity == Parity::Odd && j == n_pairs + 1) return 0.0;
  const int k = pair_index(j, n);
  // Left member of an odd pair is lossy; the mirror partner flips sign.
  const double s = (k % 2 == 1) ? 1.0 : -1.0;
  return (j == k ? s : -s) * gammas[k - 1];
}

double ChainSpec::bond_epsilon(int j) const {
  const int n = size();
  if (j < 1 || j > n - 1) throw InvalidArgument("bond index out of range");
  return epsilons[std::min(j, n - j) - 1];
}

ChainSpec make_chain(int n_pairs, Parity parity, Eigen::VectorXd omegas,
                     Eigen::VectorXd gammas, Eigen::VectorXd epsilons) {
  if (n_pairs < 1) throw InvalidArgument("n_pairs must be at least 1");
  if (omegas.size() != n_pairs || gammas.size() != n_pairs || epsilons.size() != n_pairs)
    throw InvalidArgument("omegas, gammas and epsilons must each have one entry per pair");
  for (int i = 0; i < n_pairs; ++i) {
    if (!(omegas[i] > 0.0) || !std::isfinite(omegas[i]))
      throw InvalidArgument("natural frequencies must be positive");
    if (!(gammas[i] >= 0.0) || !std::isfinite(gammas[i]))
      throw InvalidArgument("loss/gain amplitudes must be nonnegative");
    if (!std::isfinite(epsilons[i])) throw InvalidArgument("couplings must be finite");
  }
  ChainSpec s;
  s.n_pairs = n_pairs;
  s.parity = parity;
  s.uniform = all_equal(omegas) && all_equal(gammas) && all_equal(epsilons);
  s.omegas = std::move(omegas);
  s.gammas = std::move(gammas);
  s.epsilons = std::move(epsilons);
  return s;
}

ChainSpec build_uniform_chain(int n_pairs, double omega, double gamma, double epsilon,
                              Parity parity) {
  if (n_pairs < 1) throw InvalidArgument("n_pairs must be at least 1");
  return make_chain(n_pairs, parity, Eigen::VectorXd::Constant(n_pairs, omega),
                    Eigen::VectorXd::Constant(n_pairs, gamma),
                    Eigen::VectorXd::Constant(n_pairs, epsilon));
}

PhaseState make_state(Eigen::VectorXd x, Eigen::VectorXd p, double t) {
  if (x.size() != p.size())
    throw InvalidArgument("coordinates and momenta must have equal length");
  PhaseState s;
  s.x = std::move(x);
  s.p = std::move(p);
  s.t = t;
  return s;
}

PhaseState apply_parity(const PhaseState& s) {
  PhaseState out;
  out.x = -s.x.reverse();
  out.p = -s.p.reverse();
  out.t = s.t;
  return out;
}

PhaseState apply_time_reversal(const PhaseState& s, bool /*velocity_sense*/) {
  // The second block flips sign whether it stores momenta or velocities.
  PhaseState out;
  out.x = s.x;
  out.p = -s.p;
  out.t = -s.t;
  return out;
}

std::string chain_to_json(const ChainSpec& spec) {
  nlohmann::json j;
  j["n_pairs"] = spec.n_pairs;
  j["parity"] = spec.parity == Parity::Even ? "even" : "odd";
  auto to_vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  j["omega"] = to_vec(spec.omegas);
  j["gamma"] = to_vec(spec.gammas);
  j["epsilon"] = to_vec(spec.epsilons);
  return j.dump(2);
}

ChainSpec chain_from_json(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("malformed chain JSON: ") + e.what());
  }
  try {
    const int n_pairs = j.at("n_pairs").get<int>();
    if (n_pairs < 1) throw InvalidArgument("n_pairs must be at least 1");
    const std::string parity_name = j.at("parity").get<std::string>();
    Parity parity;
    if (parity_name == "even")
      parity = Parity::Even;
    else if (parity_name == "odd")
      parity = Parity::Odd;
    else
      throw InvalidArgument("parity must be \"even\" or \"odd\"");
    auto read_vec = [&](const char* key) {
      const nlohmann::json& v = j.at(key);
      Eigen::VectorXd out(n_pairs);
      if (v.is_number()) {
        out.setConstant(v.get<double>());  // scalar broadcast
      } else if (v.is_array()) {
        if (static_cast<int>(v.size()) != n_pairs)
          throw InvalidArgument(std::string(key) + " must have one entry per pair");
        for (int i = 0; i < n_pairs; ++i) out[i] = v[i].get<double>();
      } else {
        throw InvalidArgument(std::string(key) + " must be a number or an array");
      }
      return out;
    };
    return make_chain(n_pairs, parity, read_vec("omega"), read_vec("gamma"),
                      read_vec("epsilon"));
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("incomplete chain JSON: ") + e.what());
  }
}

}  // namespace ptosc
