#include "excesslex/suffix_array.hpp"

#include <algorithm>
#include <numeric>

namespace excesslex {

DenseText densify(std::u32string_view text) {
  DenseText out;
  out.alphabet.assign(text.begin(), text.end());
  std::sort(out.alphabet.begin(), out.alphabet.end());
  out.alphabet.erase(std::unique(out.alphabet.begin(), out.alphabet.end()), out.alphabet.end());
  out.symbols.reserve(text.size());
  for (char32_t cp : text) {
    out.symbols.push_back(static_cast<std::uint32_t>(
        std::lower_bound(out.alphabet.begin(), out.alphabet.end(), cp) - out.alphabet.begin()));
  }
  return out;
}

std::vector<std::uint32_t> sort_cyclic_shifts(std::span<const std::uint32_t> s, std::uint32_t alphabet_size) {
  const std::size_t n = s.size();
  std::vector<std::uint32_t> p(n), c(n), pn(n), cn(n);
  if (n == 0) return p;
  std::vector<std::uint32_t> cnt(std::max<std::size_t>(alphabet_size, n), 0);
  for (std::uint32_t v : s) ++cnt[v];
  for (std::size_t i = 1; i < alphabet_size; ++i) cnt[i] += cnt[i - 1];
  for (std::size_t i = n; i-- > 0;) p[--cnt[s[i]]] = static_cast<std::uint32_t>(i);
  c[p[0]] = 0;
  std::uint32_t classes = 1;
  for (std::size_t i = 1; i < n; ++i) {
    if (s[p[i]] != s[p[i - 1]]) ++classes;
    c[p[i]] = classes - 1;
  }
  for (std::size_t h = 1; h < n && classes < n; h <<= 1) {
    for (std::size_t i = 0; i < n; ++i) {
      pn[i] = static_cast<std::uint32_t>((p[i] + n - h % n) % n);
    }
    std::fill(cnt.begin(), cnt.begin() + classes, 0);
    for (std::size_t i = 0; i < n; ++i) ++cnt[c[pn[i]]];
    for (std::size_t i = 1; i < classes; ++i) cnt[i] += cnt[i - 1];
    for (std::size_t i = n; i-- > 0;) p[--cnt[c[pn[i]]]] = pn[i];
    cn[p[0]] = 0;
    classes = 1;
    for (std::size_t i = 1; i < n; ++i) {
      const std::uint32_t a1 = c[p[i]], a2 = c[(p[i] + h) % n];
      const std::uint32_t b1 = c[p[i - 1]], b2 = c[(p[i - 1] + h) % n];
      if (a1 != b1 || a2 != b2) ++classes;
      cn[p[i]] = classes - 1;
    }
    c.swap(cn);
  }
  return p;
}

std::vector<std::uint32_t> suffix_array(std::span<const std::uint32_t> s, std::uint32_t alphabet_size) {
  // A unique smallest sentinel turns cyclic order into suffix order.
  std::vector<std::uint32_t> t;
  t.reserve(s.size() + 1);
  for (std::uint32_t v : s) t.push_back(v + 1);
  t.push_back(0);
  auto order = sort_cyclic_shifts(t, alphabet_size + 1);
  order.erase(order.begin());
  return order;
}

std::vector<std::uint32_t> lcp_array(std::span<const std::uint32_t> s, std::span<const std::uint32_t> sa) {
  const std::size_t n = s.size();
  std::vector<std::uint32_t> rank(n), lcp(n, 0);
  for (std::size_t i = 0; i < n; ++i) rank[sa[i]] = static_cast<std::uint32_t>(i);
  std::size_t h = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (rank[i] == 0) {
      h = 0;
      continue;
    }
    const std::size_t j = sa[rank[i] - 1];
    while (i + h < n && j + h < n && s[i + h] == s[j + h]) ++h;
    lcp[rank[i]] = static_cast<std::uint32_t>(h);
    if (h > 0) --h;
  }
  return lcp;
}

std::size_t longest_repeat(std::u32string_view text) {
  if (text.size() < 2) return 0;
  const DenseText dense = densify(text);
  const auto sa = suffix_array(dense.symbols, static_cast<std::uint32_t>(dense.alphabet.size()));
  const auto lcp = lcp_array(dense.symbols, sa);
  return *std::max_element(lcp.begin(), lcp.end());
}

}  // namespace excesslex
