#pragma once

// Deterministic child generation: every child is the parent with one segment
// inverted in the gray-code domain.
//
// Two segment families are provided, each with exactly 2L-1 distinct nonzero
// masks for a string of length L:
//
//   kSegmentTree      nodes of a binary tree over [0, L): the whole string,
//                     its two halves, their halves, ... down to single bits,
//                     listed stage by stage (breadth first, left to right).
//   kSingleAndSuffix  the L single bits MSB to LSB, then the L-1 proper
//                     suffixes [i, L) longest to shortest.
//
// The gray transform is applied either to each variable's slice separately or
// to the entire concatenated string. With the whole-string transform a segment
// inside one variable also reflects every later variable.

#include <cstddef>
#include <deque>
#include <stdexcept>
#include <utility>
#include <vector>

#include "dgo/bitcodec.hpp"

namespace dgo {

enum class MaskFamily { kSegmentTree, kSingleAndSuffix };
enum class GrayScope { kPerVariable, kWholeString };

struct Neighborhood {
  MaskFamily family = MaskFamily::kSegmentTree;
  GrayScope gray = GrayScope::kPerVariable;

  friend bool operator==(const Neighborhood&, const Neighborhood&) = default;
};

/// Contiguous run of bits [first, last) to invert, with its ordinal in the
/// canonical mask order.
struct SegmentMask {
  std::size_t index;
  std::size_t first;
  std::size_t last;

  BitString bits(std::size_t length) const {
    BitString m(length);
    m.flip_range(first, last);
    return m;
  }

  friend bool operator==(const SegmentMask&, const SegmentMask&) = default;
};

inline std::vector<SegmentMask> segment_masks(std::size_t length,
                                              MaskFamily family = MaskFamily::kSegmentTree) {
  if (length == 0) throw std::invalid_argument("segment_masks: length must be positive");
  std::vector<SegmentMask> masks;
  masks.reserve(2 * length - 1);
  if (family == MaskFamily::kSingleAndSuffix) {
    for (std::size_t i = 0; i < length; ++i) masks.push_back({masks.size(), i, i + 1});
    for (std::size_t i = 0; i + 1 < length; ++i) masks.push_back({masks.size(), i, length});
    return masks;
  }
  // Every internal node splits at floor(mid), so the tree has L leaves and
  // L-1 internal nodes.
  std::deque<std::pair<std::size_t, std::size_t>> stage{{0, length}};
  while (!stage.empty()) {
    const auto [first, last] = stage.front();
    stage.pop_front();
    masks.push_back({masks.size(), first, last});
    if (last - first > 1) {
      const std::size_t mid = first + (last - first) / 2;
      stage.emplace_back(first, mid);
      stage.emplace_back(mid, last);
    }
  }
  return masks;
}

/// Gray transform of each `width`-bit slice independently.
inline BitString to_gray(const BitString& s, std::size_t width) {
  if (width == 0 || s.size() % width != 0)
    throw std::invalid_argument("to_gray: slice width must divide the string length");
  BitString g(s.size());
  for (std::size_t start = 0; start < s.size(); start += width) {
    bool prev = false;
    for (std::size_t k = start; k < start + width; ++k) {
      g.set(k, prev != s[k]);
      prev = s[k];
    }
  }
  return g;
}

inline BitString from_gray(const BitString& g, std::size_t width) {
  if (width == 0 || g.size() % width != 0)
    throw std::invalid_argument("from_gray: slice width must divide the string length");
  BitString s(g.size());
  for (std::size_t start = 0; start < g.size(); start += width) {
    bool acc = false;
    for (std::size_t k = start; k < start + width; ++k) {
      acc = acc != g[k];
      s.set(k, acc);
    }
  }
  return s;
}

namespace detail {

inline std::size_t gray_width(const BitString& s, std::size_t bits_per_var, GrayScope scope) {
  return scope == GrayScope::kWholeString ? s.size() : bits_per_var;
}

}  // namespace detail

/// from_gray(to_gray(parent) xor mask). Self-inverse for a fixed mask.
inline BitString apply_segment(const BitString& parent, const SegmentMask& mask,
                               std::size_t bits_per_var, GrayScope scope) {
  const std::size_t w = detail::gray_width(parent, bits_per_var, scope);
  BitString g = to_gray(parent, w);
  g.flip_range(mask.first, mask.last);
  return from_gray(g, w);
}

struct ChildSet {
  BitString parent;
  std::vector<BitString> children;

  std::size_t size() const noexcept { return children.size(); }
  const BitString& operator[](std::size_t i) const { return children[i]; }
};

/// All 2L-1 children of `parent` in canonical mask order. `bits_per_var` is
/// the slice width used by the per-variable gray transform.
inline ChildSet generate_children(const BitString& parent, std::size_t bits_per_var,
                                  const Neighborhood& nb = {}) {
  const auto masks = segment_masks(parent.size(), nb.family);
  const std::size_t w = detail::gray_width(parent, bits_per_var, nb.gray);
  const BitString gray = to_gray(parent, w);
  const std::size_t L = parent.size();
  ChildSet set{parent, {}};
  set.children.reserve(masks.size());
  // inverse transform of (gray xor mask), one pass per child
  for (const auto& m : masks) {
    BitString child(L);
    for (std::size_t start = 0; start < L; start += w) {
      bool acc = false;
      for (std::size_t k = start; k < start + w; ++k) {
        acc = acc != (gray[k] != (k >= m.first && k < m.last));
        child.set(k, acc);
      }
    }
    set.children.push_back(std::move(child));
  }
  return set;
}

}  // namespace dgo
