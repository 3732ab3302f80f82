#include <numeric>

#include "idt/ann.hpp"
#include "idt/error.hpp"

namespace idt::ann {

Rng::Rng(std::uint64_t seed) : engine_(seed) {}

std::uint64_t Rng::next() { return engine_(); }

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

std::size_t Rng::below(std::size_t n) {
  require(n > 0, ErrorKind::InvalidArgument, "Rng::below needs n > 0");
  // Rejection sampling removes modulo bias.
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t v = next();
  while (v >= limit) v = next();
  return static_cast<std::size_t>(v % n);
}

SplitDataset split(const std::vector<Example>& data, std::uint64_t seed) {
  const std::size_t n = data.size();
  require(n >= 10, ErrorKind::InsufficientData, "split needs at least 10 examples");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(seed);
  for (std::size_t i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);

  const std::size_t n_train = (70 * n + 99) / 100;
  const std::size_t n_val = (15 * n + 99) / 100;
  SplitDataset out;
  out.seed = seed;
  for (std::size_t k = 0; k < n; ++k) {
    const Example& e = data[order[k]];
    if (k < n_train) {
      out.training.push_back(e);
    } else if (k < n_train + n_val) {
      out.validation.push_back(e);
    } else {
      out.testing.push_back(e);
    }
  }
  return out;
}

}  // namespace idt::ann
