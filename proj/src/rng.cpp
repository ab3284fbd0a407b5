#include "mmn/rng.hpp"

#include <random>

#include "mmn/errors.hpp"

namespace mmn {

void sample_dirichlet(StreamRng& rng, std::span<const double> alphas, std::span<double> out) {
  if (alphas.size() != out.size()) throw DomainError("sample_dirichlet: size mismatch");
  double total = 0.0;
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    std::gamma_distribution<double> g(alphas[i], 1.0);
    out[i] = g(rng);
    total += out[i];
  }
  for (double& v : out) v /= total;
}

}  // namespace mmn
