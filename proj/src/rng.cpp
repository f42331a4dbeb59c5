#include "graphssl/rng.hpp"

namespace graphssl {

std::vector<std::int32_t> sample_without_replacement(
    const std::vector<std::int32_t>& pool, std::size_t k, SplitRng& rng) {
  if (k > pool.size()) {
    throw std::invalid_argument(
        "sample_without_replacement: k exceeds pool size");
  }
  std::vector<std::int32_t> scratch = pool;
  std::vector<std::int32_t> out;
  out.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + rng.below(scratch.size() - i);
    std::swap(scratch[i], scratch[j]);
    out.push_back(scratch[i]);
  }
  return out;
}

}  // namespace graphssl
