#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <utility>

namespace metaelo {

// std::mt19937_64 output is fixed by the standard; the distributions are not,
// so bounded draws and shuffles are done here to keep results portable.
inline std::uint64_t uniform_below(std::mt19937_64& gen, std::uint64_t bound) {
  // Lemire-style rejection on the low end removes modulo bias.
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    std::uint64_t x = gen();
    if (x >= threshold) return x % bound;
  }
}

template <typename T>
void seeded_shuffle(std::span<T> items, std::mt19937_64& gen) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniform_below(gen, i));
    using std::swap;
    swap(items[i - 1], items[j]);
  }
}

}  // namespace metaelo
