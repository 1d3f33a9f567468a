#pragma once

#include <array>
#include <cstdint>
#include <limits>

namespace levysg {

/// Philox4x64-10 counter-based generator.  The stream is fully determined by
/// the 128-bit key; the counter is incremented before each 4-word block, so
/// output matches numpy's Philox for the same key.
class Philox4x64 {
 public:
  using result_type = std::uint64_t;

  Philox4x64(std::uint64_t key0, std::uint64_t key1) : key_{key0, key1} {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    if (pos_ >= 4) {
      advance();
      block_ = generate(ctr_, key_);
      pos_ = 0;
    }
    return block_[pos_++];
  }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }
  /// Uniform on the open interval (0, 1).
  double uniform_open() { return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53; }
  double normal();
  double exponential();

  static std::array<std::uint64_t, 4> generate(std::array<std::uint64_t, 4> ctr,
                                               std::array<std::uint64_t, 2> key);

 private:
  void advance() {
    for (auto& c : ctr_)
      if (++c != 0) break;
  }

  std::array<std::uint64_t, 2> key_;
  std::array<std::uint64_t, 4> ctr_{0, 0, 0, 0};
  std::array<std::uint64_t, 4> block_{};
  int pos_ = 4;
  bool has_spare_ = false;
  double spare_ = 0;
};

}  // namespace levysg
