#include "longbranch/permutations.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace longbranch {

void check_valid(const Permutation& p) {
  const int m = p.size();
  if (m < 1) throw std::invalid_argument("permutation: must be non-empty");
  std::vector<bool> seen(static_cast<size_t>(m) + 1, false);
  for (int v : p.values) {
    if (v < 1 || v > m || seen[static_cast<size_t>(v)])
      throw std::invalid_argument("permutation: values must be a bijection on 1..m");
    seen[static_cast<size_t>(v)] = true;
  }
}

Permutation tree_to_permutation(const OrderedHistory& t) {
  Permutation p;
  p.values.reserve(static_cast<size_t>(t.leaf_count - 1));
  // In-order traversal; state 0 = descend left, 1 = emit and descend right.
  std::vector<std::pair<int, int>> stack;
  stack.emplace_back(t.root_rank(), 0);
  while (!stack.empty()) {
    auto& [rank, state] = stack.back();
    if (state == 0) {
      state = 1;
      if (const int left = t.node(rank).left; left != 0) stack.emplace_back(left, 0);
    } else {
      p.values.push_back(rank);
      const int right = t.node(rank).right;
      stack.pop_back();
      if (right != 0) stack.emplace_back(right, 0);
    }
  }
  return p;
}

OrderedHistory permutation_to_tree(const Permutation& p) {
  check_valid(p);
  const int m = p.size();
  OrderedHistory t;
  t.leaf_count = m + 1;
  t.nodes.resize(static_cast<size_t>(m) + 1);

  // Monotone stack: values on the stack decrease from bottom to top. A new
  // value adopts the last popped subtree as its left child and hangs as the
  // right child of the value below it; unfilled slots stay leaves.
  std::vector<int> stack;
  for (int v : p.values) {
    int last = 0;
    while (!stack.empty() && stack.back() < v) {
      last = stack.back();
      stack.pop_back();
    }
    t.nodes[static_cast<size_t>(v)].left = last;
    if (!stack.empty()) t.nodes[static_cast<size_t>(stack.back())].right = v;
    stack.push_back(v);
  }
  return t;
}

namespace {

int build_by_max_split(const std::vector<int>& values, int lo, int hi, OrderedHistory& t) {
  if (lo >= hi) return 0;
  const auto max_it = std::max_element(values.begin() + lo, values.begin() + hi);
  const int mid = static_cast<int>(max_it - values.begin());
  auto& node = t.nodes[static_cast<size_t>(*max_it)];
  node.left = build_by_max_split(values, lo, mid, t);
  node.right = build_by_max_split(values, mid + 1, hi, t);
  return *max_it;
}

}  // namespace

OrderedHistory permutation_to_tree_reference(const Permutation& p) {
  check_valid(p);
  OrderedHistory t;
  t.leaf_count = p.size() + 1;
  t.nodes.resize(static_cast<size_t>(p.size()) + 1);
  build_by_max_split(p.values, 0, p.size(), t);
  return t;
}

BranchLengthProfile non_peak_values(const Permutation& p) {
  const int m = p.size();
  BranchLengthProfile profile;
  profile.lengths.reserve(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) {
    const bool interior = i > 0 && i < m - 1;
    const bool peak = interior && p.values[static_cast<size_t>(i - 1)] < p.values[static_cast<size_t>(i)] &&
                      p.values[static_cast<size_t>(i)] > p.values[static_cast<size_t>(i + 1)];
    if (!peak) profile.lengths.push_back(p.values[static_cast<size_t>(i)]);
  }
  std::sort(profile.lengths.begin(), profile.lengths.end(), std::greater<>());
  return profile;
}

std::optional<int> kth_largest_non_peak(const Permutation& p, int k) {
  if (k < 1) throw std::invalid_argument("kth_largest_non_peak: k must be >= 1");
  const auto profile = non_peak_values(p);
  if (k > static_cast<int>(profile.lengths.size())) return std::nullopt;
  return profile.lengths[static_cast<size_t>(k - 1)];
}

Permutation random_permutation(int m, Rng& rng) {
  if (m < 1) throw std::invalid_argument("random_permutation: m must be >= 1");
  Permutation p;
  p.values.resize(static_cast<size_t>(m));
  for (int i = 0; i < m; ++i) p.values[static_cast<size_t>(i)] = i + 1;
  for (int i = m - 1; i > 0; --i) {
    const auto j = static_cast<size_t>(rng.below(static_cast<uint64_t>(i) + 1));
    std::swap(p.values[static_cast<size_t>(i)], p.values[j]);
  }
  return p;
}

std::string to_string(const Permutation& p) {
  std::string out;
  for (size_t i = 0; i < p.values.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(p.values[i]);
  }
  return out;
}

Permutation permutation_from_string(std::string_view text) {
  Permutation p;
  size_t pos = 0;
  while (pos < text.size()) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + text.size(), value);
    if (ec != std::errc()) throw std::invalid_argument("permutation: malformed text");
    p.values.push_back(value);
    pos = static_cast<size_t>(ptr - text.data());
    if (pos < text.size()) {
      if (text[pos] != ',') throw std::invalid_argument("permutation: expected comma");
      ++pos;
    }
  }
  check_valid(p);
  return p;
}

}  // namespace longbranch
