#include "maxkvc/state.hpp"

#include <cmath>

#include "maxkvc/rng.hpp"
#include "json.hpp"

namespace maxkvc {

std::string StateVector::to_json() const {
  nlohmann::json j;
  j["n"] = index.n();
  j["k"] = index.k();
  auto& re = j["re"] = nlohmann::json::array();
  auto& im = j["im"] = nlohmann::json::array();
  for (Eigen::Index i = 0; i < amplitudes.size(); ++i) {
    re.push_back(amplitudes[i].real());
    im.push_back(amplitudes[i].imag());
  }
  return j.dump();
}

StateVector StateVector::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  SubspaceIndex index(j.at("n").get<int>(), j.at("k").get<int>());
  const auto& re = j.at("re");
  const auto& im = j.at("im");
  if (re.size() != index.dim() || im.size() != index.dim())
    throw std::invalid_argument("StateVector: amplitude count != C(n,k)");
  StateVector state{index, Eigen::VectorXcd(index.dim())};
  for (std::size_t i = 0; i < re.size(); ++i)
    state.amplitudes[static_cast<Eigen::Index>(i)] =
        Complex(re[i].get<double>(), im[i].get<double>());
  return state;
}

StateVector dicke_state(const SubspaceIndex& index) {
  StateVector state{index, Eigen::VectorXcd(index.dim())};
  state.amplitudes.setConstant(
      Complex(1.0 / std::sqrt(static_cast<double>(index.dim())), 0.0));
  return state;
}

StateVector basis_k_state(const SubspaceIndex& index, Bitstring x) {
  StateVector state{index, Eigen::VectorXcd::Zero(index.dim())};
  state.amplitudes[static_cast<Eigen::Index>(index.rank(x))] = 1.0;
  return state;
}

StateVector random_k_state(const SubspaceIndex& index, std::uint64_t seed) {
  Rng rng(seed);
  const std::uint64_t i = rng.uniform_index(index.dim());
  return basis_k_state(index, index.unrank(i));
}

}  // namespace maxkvc
