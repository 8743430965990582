#pragma once

// Fixed-point encoding between real vectors and concatenated bit strings, and
// the gray / inverse-gray transforms applied to the whole string.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dgo {

/// Ordered sequence of binary digits. Index 0 is the most significant bit of
/// the concatenated vector.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t length) : bits_(length, 0) {}

  /// Parses a string of '0' / '1' characters.
  static BitString from_string(std::string_view text) {
    BitString out(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] != '0' && text[i] != '1')
        throw std::invalid_argument("BitString: expected '0' or '1', got '" +
                                    std::string(1, text[i]) + "'");
      out.bits_[i] = static_cast<std::uint8_t>(text[i] - '0');
    }
    return out;
  }

  /// `width` low bits of `value`, most significant first.
  static BitString from_uint(std::uint64_t value, std::size_t width) {
    if (width > 64) throw std::invalid_argument("BitString::from_uint: width > 64");
    BitString out(width);
    for (std::size_t i = 0; i < width; ++i)
      out.bits_[width - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1U);
    return out;
  }

  std::uint64_t to_uint() const {
    if (bits_.size() > 64) throw std::out_of_range("BitString::to_uint: length > 64");
    return slice_to_uint(0, bits_.size());
  }

  /// Unsigned integer of bits [first, first + width), MSB first.
  std::uint64_t slice_to_uint(std::size_t first, std::size_t width) const {
    std::uint64_t v = 0;
    for (std::size_t i = first; i < first + width; ++i) v = (v << 1) | bits_[i];
    return v;
  }

  void write_uint(std::size_t first, std::size_t width, std::uint64_t value) {
    for (std::size_t i = 0; i < width; ++i)
      bits_[first + width - 1 - i] = static_cast<std::uint8_t>((value >> i) & 1U);
  }

  std::string to_string() const {
    std::string out(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) out[i] = bits_[i] ? '1' : '0';
    return out;
  }

  std::size_t size() const noexcept { return bits_.size(); }
  bool empty() const noexcept { return bits_.empty(); }

  bool operator[](std::size_t i) const noexcept { return bits_[i] != 0; }
  void set(std::size_t i, bool value) noexcept { bits_[i] = value ? 1 : 0; }
  void flip(std::size_t i) noexcept { bits_[i] ^= 1U; }

  /// Inverts bits [first, last).
  void flip_range(std::size_t first, std::size_t last) noexcept {
    for (std::size_t i = first; i < last; ++i) bits_[i] ^= 1U;
  }

  BitString& operator^=(const BitString& other) {
    if (other.size() != size()) throw std::invalid_argument("BitString xor: length mismatch");
    for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] ^= other.bits_[i];
    return *this;
  }
  friend BitString operator^(BitString lhs, const BitString& rhs) { return lhs ^= rhs; }

  std::size_t popcount() const noexcept {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), 1));
  }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// g[0] = s[0]; g[k] = s[k-1] xor s[k].
inline BitString to_gray(const BitString& s) {
  BitString g(s.size());
  bool prev = false;
  for (std::size_t k = 0; k < s.size(); ++k) {
    g.set(k, prev != s[k]);
    prev = s[k];
  }
  return g;
}

/// Prefix-xor scan: s[0] = g[0]; s[k] = s[k-1] xor g[k].
inline BitString from_gray(const BitString& g) {
  BitString s(g.size());
  bool acc = false;
  for (std::size_t k = 0; k < g.size(); ++k) {
    acc = acc != g[k];
    s.set(k, acc);
  }
  return s;
}

struct Bounds {
  double lo;
  double hi;
  friend bool operator==(const Bounds&, const Bounds&) = default;
};

/// Per-dimension affine grid over a box. Each dimension owns `bits_per_var`
/// consecutive bits read as an unsigned index k in [0, 2^b - 1]; index 0 maps
/// to lo and index 2^b - 1 maps to hi.
class Quantizer {
 public:
  static constexpr unsigned kMaxBitsPerVar = 52;  // indices stay exact in a double

  Quantizer(std::vector<Bounds> bounds, unsigned bits_per_var)
      : bounds_(std::move(bounds)), bits_(bits_per_var) {
    if (bounds_.empty()) throw std::invalid_argument("Quantizer: dims must be positive");
    if (bits_ < 1 || bits_ > kMaxBitsPerVar)
      throw std::invalid_argument("Quantizer: bits_per_var must be in [1, 52], got " +
                                  std::to_string(bits_));
    for (const auto& b : bounds_)
      if (!(std::isfinite(b.lo) && std::isfinite(b.hi) && b.lo < b.hi))
        throw std::invalid_argument("Quantizer: bounds require finite lo < hi");
  }

  std::size_t dims() const noexcept { return bounds_.size(); }
  unsigned bits_per_var() const noexcept { return bits_; }
  std::size_t length() const noexcept { return dims() * bits_; }
  const std::vector<Bounds>& bounds() const noexcept { return bounds_; }
  std::uint64_t max_index() const noexcept { return (std::uint64_t{1} << bits_) - 1; }

  double grid_step(std::size_t dim) const {
    return (bounds_.at(dim).hi - bounds_.at(dim).lo) / static_cast<double>(max_index());
  }

  Quantizer with_bits(unsigned bits_per_var) const { return Quantizer(bounds_, bits_per_var); }

  std::uint64_t index_of(std::size_t dim, double x) const {
    const auto [lo, hi] = bounds_[dim];
    if (std::isnan(x)) x = lo;
    x = std::clamp(x, lo, hi);
    const double scaled = (x - lo) / (hi - lo) * static_cast<double>(max_index());
    const auto k = static_cast<std::uint64_t>(std::llround(scaled));
    return std::min(k, max_index());
  }

  double value_of(std::size_t dim, std::uint64_t index) const {
    const auto [lo, hi] = bounds_[dim];
    const double t = static_cast<double>(index) / static_cast<double>(max_index());
    return (1.0 - t) * lo + t * hi;
  }

  friend bool operator==(const Quantizer&, const Quantizer&) = default;

 private:
  std::vector<Bounds> bounds_;
  unsigned bits_;
};

/// Out-of-range coordinates are clamped to the box.
inline BitString encode_point(std::span<const double> x, const Quantizer& q) {
  if (x.size() != q.dims())
    throw std::invalid_argument("encode_point: expected " + std::to_string(q.dims()) +
                                " coordinates, got " + std::to_string(x.size()));
  BitString s(q.length());
  const unsigned b = q.bits_per_var();
  for (std::size_t j = 0; j < q.dims(); ++j) s.write_uint(j * b, b, q.index_of(j, x[j]));
  return s;
}

/// Writes the decoded coordinates into `x`, which must hold q.dims() values.
inline void decode_point_into(const BitString& s, const Quantizer& q, std::span<double> x) {
  if (s.size() != q.length())
    throw std::invalid_argument("decode_point: bit string length " + std::to_string(s.size()) +
                                " does not match quantizer length " +
                                std::to_string(q.length()));
  if (x.size() != q.dims()) throw std::invalid_argument("decode_point: output size mismatch");
  const unsigned b = q.bits_per_var();
  for (std::size_t j = 0; j < q.dims(); ++j) x[j] = q.value_of(j, s.slice_to_uint(j * b, b));
}

inline std::vector<double> decode_point(const BitString& s, const Quantizer& q) {
  std::vector<double> x(q.dims());
  decode_point_into(s, q, x);
  return x;
}

/// Re-expresses `s` on the finer grid of `to`.
inline BitString requantize(const BitString& s, const Quantizer& from, const Quantizer& to) {
  if (from.bounds() != to.bounds())
    throw std::invalid_argument("requantize: quantizers must share dims and bounds");
  if (to.bits_per_var() <= from.bits_per_var())
    throw std::invalid_argument("requantize: target resolution must be finer");
  return encode_point(decode_point(s, from), to);
}

}  // namespace dgo
