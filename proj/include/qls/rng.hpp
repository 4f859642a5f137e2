#pragma once

#include <cstdint>
#include <random>

namespace qls {

// Deterministic per-stream RNG. A (root_seed, stream_id) pair always yields
// the same sequence within one build, so parallel sweeps stay reproducible
// regardless of scheduling.
class SeededRng {
public:
  SeededRng(std::uint64_t root_seed, std::uint64_t stream_id = 0)
      : root_seed_(root_seed), stream_id_(stream_id),
        engine_(mix(mix(root_seed + 0x9e3779b97f4a7c15ULL) ^ mix(stream_id + 0xbf58476d1ce4e5b9ULL))) {}

  // Derive an independent child stream, e.g. one per trial.
  SeededRng stream(std::uint64_t id) const { return SeededRng(mix(root_seed_ ^ mix(id)), id); }

  std::uint64_t root_seed() const { return root_seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::mt19937_64& engine() { return engine_; }

  double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double gaussian() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
  }
  bool bernoulli(double p) { return uniform() < p; }

  // Sample an index from an (unnormalized is tolerated to 1e-9) probability vector.
  template <typename Vec>
  int discrete(const Vec& probs) {
    double r = uniform();
    double acc = 0.0;
    int last = 0;
    for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
      if (probs[i] <= 0) continue;
      acc += probs[i];
      last = i;
      if (r < acc) return i;
    }
    return last;
  }

private:
  // splitmix64 finalizer; avalanche step for stream derivation.
  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  std::uint64_t root_seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace qls
