// Seeded RNG with platform-independent output, so fixed seeds reproduce
// identical trials everywhere.
#pragma once

#include <cstdint>
#include <vector>

namespace ssc {

class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {}

  // splitmix64
  uint64_t next() {
    uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0, n), unbiased
  uint64_t below(uint64_t n) {
    const uint64_t limit = ~uint64_t{0} - (~uint64_t{0} % n + 1) % n;
    uint64_t v;
    do {
      v = next();
    } while (v > limit);
    return v % n;
  }

  // uniform in [lo, hi] inclusive
  int range(int lo, int hi) {
    return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (size_t i = v.size(); i > 1; --i) {
      const size_t j = static_cast<size_t>(below(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // k distinct values from [0, n), in selection order
  std::vector<int> sample(int n, int k) {
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = i;
    std::vector<int> out;
    out.reserve(k);
    for (int i = 0; i < k; ++i) {
      const int j = i + static_cast<int>(below(static_cast<uint64_t>(n - i)));
      std::swap(pool[i], pool[j]);
      out.push_back(pool[i]);
    }
    return out;
  }

 private:
  uint64_t state_;
};

}  // namespace ssc
