#ifndef PERCOLAB_RNG_HPP_
#define PERCOLAB_RNG_HPP_

#include <cmath>
#include <cstdint>
#include <limits>

namespace percolab {

// SplitMix64 output function.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// What a stream is used for. Streams with different purposes but the same
// (seed, trial, cell) are independent.
enum class Purpose : std::uint64_t {
  Points = 1,
  Marks = 2,
  Thinning = 3,
  Partition = 4,
  Measure = 5,
  Transport = 6,
  Sampling = 7,
  Net = 8,
};

//! Counter-based random stream. The starting state is a pure function of
//! (seed, trial, cell, purpose), so results never depend on scheduling order.
//! Satisfies UniformRandomBitGenerator and can drive <random> distributions.
class Stream {
 public:
  using result_type = std::uint64_t;

  constexpr explicit Stream(std::uint64_t state) noexcept : state_(state) {}

  static constexpr result_type min() noexcept { return 0; }
  static constexpr result_type max() noexcept {
    return std::numeric_limits<result_type>::max();
  }

  constexpr result_type operator()() noexcept {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  //! Uniform double in [0, 1) with 53 bits of resolution.
  double uniform() noexcept {
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
  }

  //! Uniform double in (0, 1].
  double uniform_open_low() noexcept { return 1.0 - uniform(); }

  //! Exponential variate with the given rate (> 0).
  double exponential(double rate) noexcept {
    return -std::log(uniform_open_low()) / rate;
  }

  //! Uniform integer in [0, n), n > 0. Lemire-style multiply keeps the bias
  //! below 2^-64 * n, negligible at desk scale.
  std::uint64_t below(std::uint64_t n) noexcept {
    return static_cast<std::uint64_t>(
        (static_cast<unsigned __int128>((*this)()) * n) >> 64);
  }

 private:
  std::uint64_t state_;
};

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t trial,
                                    std::uint64_t cell,
                                    Purpose purpose) noexcept {
  std::uint64_t h = mix64(seed + 0x632be59bd9b4e019ULL);
  h = mix64(h ^ (trial + 0x8cb92ba72f3d8dd7ULL));
  h = mix64(h ^ (cell + 0xd1b54a32d192ed03ULL));
  h = mix64(h ^ static_cast<std::uint64_t>(purpose));
  return h;
}

constexpr Stream make_stream(std::uint64_t seed, std::uint64_t trial,
                             std::uint64_t cell, Purpose purpose) noexcept {
  return Stream(derive_seed(seed, trial, cell, purpose));
}

// Seed of trial `trial` under a master seed; used when a whole sampler call
// represents one trial.
constexpr std::uint64_t trial_seed(std::uint64_t master,
                                   std::uint64_t trial) noexcept {
  return derive_seed(master, trial, 0, Purpose::Sampling);
}

}  // namespace percolab

#endif  // PERCOLAB_RNG_HPP_
