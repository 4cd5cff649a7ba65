#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace excesslex {

// Maps code points to dense ranks 0..k-1 in code point order.
struct DenseText {
  std::vector<std::uint32_t> symbols;
  std::vector<char32_t> alphabet;  // sorted
};

DenseText densify(std::u32string_view text);

// Order of the cyclic rotations of `s` (values < alphabet_size), by prefix
// doubling with counting sorts: O(n log n).
std::vector<std::uint32_t> sort_cyclic_shifts(std::span<const std::uint32_t> s, std::uint32_t alphabet_size);

// Suffix array of `s` (values < alphabet_size).
std::vector<std::uint32_t> suffix_array(std::span<const std::uint32_t> s, std::uint32_t alphabet_size);

// Kasai et al.: lcp[i] = LCP(suffix sa[i-1], suffix sa[i]); lcp[0] = 0.
std::vector<std::uint32_t> lcp_array(std::span<const std::uint32_t> s, std::span<const std::uint32_t> sa);

// Maximal length of a substring occurring at least twice (overlaps allowed).
std::size_t longest_repeat(std::u32string_view text);

}  // namespace excesslex
