#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace tauberlab {

// Eventually periodic trajectory over state indices: the state at integer
// step k is prefix[k] while k < |prefix| and cycle[(k - |prefix|) mod |cycle|]
// afterwards. Continuous time flattens onto the steps, z(k+t) = z(k) for
// t in (0,1), which is what makes infinite-horizon sums exactly summable.
struct LassoProcess {
  std::vector<int> prefix;
  std::vector<int> cycle;  // must be non-empty

  bool valid() const { return !cycle.empty(); }
};

inline int state_at_step(const LassoProcess& z, std::size_t k) {
  if (z.cycle.empty()) throw std::invalid_argument("lasso cycle is empty");
  if (k < z.prefix.size()) return z.prefix[k];
  return z.cycle[(k - z.prefix.size()) % z.cycle.size()];
}

inline int state_at(const LassoProcess& z, double t) {
  if (!(t >= 0.0)) throw std::invalid_argument("state_at: time must be non-negative");
  return state_at_step(z, static_cast<std::size_t>(std::floor(t)));
}

}  // namespace tauberlab
