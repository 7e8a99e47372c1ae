#include "eseek/common.hpp"

#include <cmath>

namespace eseek {

WeylSequence::WeylSequence(std::size_t dim) {
  static const double primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  alphas_.resize(dim);
  for (std::size_t d = 0; d < dim; ++d) {
    const double root = std::sqrt(primes[d % (sizeof(primes) / sizeof(primes[0]))]);
    alphas_[d] = root - std::floor(root);
  }
}

void WeylSequence::point(std::size_t index, std::span<double> out) const {
  for (std::size_t d = 0; d < out.size(); ++d) {
    const double v = static_cast<double>(index + 1) * alphas_[d];
    out[d] = v - std::floor(v);
  }
}

}  // namespace eseek
