#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fairshare {

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace detail

// mt19937-64 stream with inverse-CDF sampling so that draws are identical
// across standard libraries; replication streams derive from the master
// seed by fixed offsets.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(detail::splitmix64(seed)) {}

  static std::uint64_t derive(std::uint64_t master, std::uint64_t stream,
                              std::uint64_t substream = 0) {
    std::uint64_t s = detail::splitmix64(master);
    s = detail::splitmix64(s ^ (stream * 0x9e3779b97f4a7c15ULL));
    s = detail::splitmix64(s ^ (substream * 0xd1b54a32d192ed03ULL));
    return s;
  }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform in (0,1); never returns an endpoint.
  double uniform01() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  double exponential(double rate) { return -std::log(uniform01()) / rate; }

  double erlang(int stages, double mean) {
    double sum = 0.0;
    const double stage_rate = static_cast<double>(stages) / mean;
    for (int k = 0; k < stages; ++k) sum += exponential(stage_rate);
    return sum;
  }

  // Index in [0, weights.size()) with probability proportional to weight.
  template <typename Container>
  std::size_t pick_weighted(const Container& weights, double total) {
    double x = uniform01() * total;
    std::size_t last = 0;
    for (std::size_t k = 0; k < weights.size(); ++k) {
      last = k;
      x -= weights[k];
      if (x <= 0.0) return k;
    }
    return last;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace fairshare
