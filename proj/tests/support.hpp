#pragma once

#include <algorithm>
#include <functional>
#include <numeric>
#include <vector>

#include "longbranch/histories.hpp"
#include "longbranch/permutations.hpp"
#include "longbranch/rational.hpp"

namespace longbranch::testing {

inline Rational frac(long num, long den) { return make_rational(BigInt(num), BigInt(den)); }

/// All m! permutations of 1..m, in lexicographic order.
inline void for_each_permutation(int m, const std::function<void(const Permutation&)>& fn) {
  Permutation p;
  p.values.resize(static_cast<size_t>(m));
  std::iota(p.values.begin(), p.values.end(), 1);
  do {
    fn(p);
  } while (std::next_permutation(p.values.begin(), p.values.end()));
}

/// The worked size-8 example tree: pi = (2,6,4,5,3,1,7), profile
/// (7,4,3,2,1), three cherries. Built node by node, independent of the
/// bijection code under test.
inline OrderedHistory example_tree_n8() {
  OrderedHistory t;
  t.leaf_count = 8;
  t.nodes.resize(8);
  t.nodes[7] = {6, 0};
  t.nodes[6] = {2, 5};
  t.nodes[5] = {4, 3};
  t.nodes[4] = {0, 0};
  t.nodes[3] = {0, 1};
  t.nodes[2] = {0, 0};
  t.nodes[1] = {0, 0};
  return t;
}

/// Caterpillar with every internal node on the left spine.
inline OrderedHistory left_caterpillar(int n) {
  OrderedHistory t;
  t.leaf_count = n;
  t.nodes.resize(static_cast<size_t>(n));
  for (int r = 2; r <= n - 1; ++r) t.nodes[static_cast<size_t>(r)] = {r - 1, 0};
  return t;
}

}  // namespace longbranch::testing
