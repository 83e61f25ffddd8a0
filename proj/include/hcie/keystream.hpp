#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hcie/error.hpp"
#include "hcie/image.hpp"

namespace hcie {

inline constexpr int kMinPrecision = 4;
inline constexpr int kMaxPrecision = 32;

/// Secret key: logistic-map seed and control parameter at L-bit precision.
///
/// x0 is an unsigned fixed-point fraction with L fractional bits (0 < x0 < 1);
/// mu has 2 integer bits and L-2 fractional bits (0 < mu <= 4, so the raw
/// value ranges over [1, 2^L]). Together they hold 2L secret bits.
struct Key {
  std::uint64_t x0_raw = 0;
  std::uint64_t mu_raw = 0;
  int precision = 32;  ///< L

  void validate() const {
    require(precision >= kMinPrecision && precision <= kMaxPrecision, errc::domain,
            "precision must be in [" + std::to_string(kMinPrecision) + ", " +
                std::to_string(kMaxPrecision) + "]");
    const std::uint64_t one = 1ull << precision;
    require(x0_raw >= 1 && x0_raw < one, errc::domain, "x0 must satisfy 0 < x0 < 1");
    require(mu_raw >= 1 && mu_raw <= one, errc::domain, "mu must satisfy 0 < mu <= 4");
  }

  double x0() const noexcept { return static_cast<double>(x0_raw) / static_cast<double>(1ull << precision); }
  double mu() const noexcept {
    return static_cast<double>(mu_raw) / static_cast<double>(1ull << (precision - 2));
  }

  /// Truncating conversion from decimal values.
  static Key from_doubles(double x0, double mu, int precision) {
    require(precision >= kMinPrecision && precision <= kMaxPrecision, errc::domain,
            "precision out of range");
    Key k;
    k.precision = precision;
    k.x0_raw = static_cast<std::uint64_t>(x0 * static_cast<double>(1ull << precision));
    k.mu_raw = static_cast<std::uint64_t>(mu * static_cast<double>(1ull << (precision - 2)));
    k.validate();
    return k;
  }

  friend bool operator==(const Key&, const Key&) = default;
};

/// One logistic-map step mu*x*(1-x) in L-bit fixed point. The product
/// x*(1-x) is truncated back to L fractional bits, then the multiplication
/// by mu is truncated the same way; a result of exactly 1.0 is clamped to
/// the largest representable fraction.
inline std::uint64_t logistic_next(std::uint64_t x, std::uint64_t mu, int precision) {
  const std::uint64_t one = 1ull << precision;
  const std::uint64_t t = (x * (one - x)) >> precision;  // <= 2^(L-2)
  std::uint64_t next = (t * mu) >> (precision - 2);
  if (next >= one) next = one - 1;
  return next;
}

/// Pseudo-random bit sequence with a consume cursor.
class BitStream {
 public:
  BitStream() = default;
  explicit BitStream(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {}

  std::size_t length() const noexcept { return bits_.size(); }
  std::size_t cursor() const noexcept { return cursor_; }
  std::size_t remaining() const noexcept { return bits_.size() - cursor_; }

  /// Returns the next `count` bits and advances the cursor. Running out of
  /// bits signals a stream-length computation bug upstream.
  std::vector<std::uint8_t> take(std::size_t count) {
    require(cursor_ + count <= bits_.size(), errc::stream,
            "keystream exhausted: requested " + std::to_string(count) + " bits with " +
                std::to_string(remaining()) + " remaining");
    std::vector<std::uint8_t> out(bits_.begin() + cursor_, bits_.begin() + cursor_ + count);
    cursor_ += count;
    return out;
  }

  std::uint8_t bit(std::size_t index) const noexcept { return bits_[index]; }

 private:
  std::vector<std::uint8_t> bits_;
  std::size_t cursor_ = 0;
};

/// Iterates the logistic map from x0 and extracts the first 8 bits of each
/// new state's binary expansion, most significant bit first, until
/// `bit_count` bits are collected. A state at precision below 8 contributes
/// its whole fraction followed by zeros (its expansion past L bits is zero).
inline BitStream generate_bitstream(const Key& key, std::size_t bit_count) {
  key.validate();
  std::vector<std::uint8_t> bits;
  bits.reserve((bit_count + 7) / 8 * 8);
  std::uint64_t x = key.x0_raw;
  const std::size_t iterations = (bit_count + 7) / 8;
  for (std::size_t i = 0; i < iterations; ++i) {
    x = logistic_next(x, key.mu_raw, key.precision);
    const std::uint8_t byte = static_cast<std::uint8_t>(
        (key.precision >= 8 ? x >> (key.precision - 8) : x << (8 - key.precision)) & 0xFF);
    for (int b = 7; b >= 0; --b) bits.push_back((byte >> b) & 1u);
  }
  bits.resize(bit_count);
  return BitStream(std::move(bits));
}

/// Total bits one encryption consumes: (1 + K) * (3*S_M + 3*S_N - 2) * rounds.
inline std::size_t required_stream_bits(const PublicParams& params, int rows, int cols) {
  params.validate_for(rows, cols);
  return static_cast<std::size_t>(1 + params.block_count(rows, cols)) * params.bits_per_permutation();
}

}  // namespace hcie
