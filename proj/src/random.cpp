#include "gmmds/random.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

namespace gmmds {

std::vector<std::uint64_t> sample_distinct(Rng& rng, std::uint64_t universe, std::size_t count) {
  if (count > universe) throw std::invalid_argument("cannot draw more distinct values than the universe holds");
  std::vector<std::uint64_t> out;
  out.reserve(count);
  if (universe <= 4 * count + 64) {
    std::vector<std::uint64_t> pool(universe);
    std::iota(pool.begin(), pool.end(), 0);
    for (std::size_t i = 0; i < count; ++i) {
      std::swap(pool[i], pool[i + uniform_below(rng, universe - i)]);
      out.push_back(pool[i]);
    }
    return out;
  }
  std::unordered_set<std::uint64_t> seen;
  while (out.size() < count) {
    const std::uint64_t x = uniform_below(rng, universe);
    if (seen.insert(x).second) out.push_back(x);
  }
  return out;
}

}  // namespace gmmds
