#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "longbranch/rational.hpp"
#include "longbranch/rng.hpp"

namespace longbranch {

/// Ranked ordered history: a full binary rooted plane tree with n leaves
/// and n-1 internal nodes bijectively labeled by the ranks 1..n-1, ranks
/// strictly decreasing from the root (rank n-1) toward the leaves.
///
/// Nodes live in a flat array indexed by rank; a child slot of 0 denotes a
/// leaf. The external branch under a leaf has length equal to the rank of
/// that leaf's parent, so length 1 is always present (the rank-1 node can
/// only have leaf children).
struct OrderedHistory {
  struct Node {
    int left = 0;   // child rank, 0 = leaf
    int right = 0;  // child rank, 0 = leaf
  };

  int leaf_count = 0;        // n >= 2
  std::vector<Node> nodes;   // nodes[1..n-1]; index 0 unused

  int root_rank() const { return leaf_count - 1; }
  const Node& node(int rank) const { return nodes[static_cast<size_t>(rank)]; }
};

/// Distinct external branch lengths, strictly decreasing; always ends in 1.
struct BranchLengthProfile {
  std::vector<int> lengths;

  bool operator==(const BranchLengthProfile&) const = default;
};

/// Throws std::invalid_argument if t violates an OrderedHistory invariant.
void check_valid(const OrderedHistory& t);

BranchLengthProfile external_branch_profile(const OrderedHistory& t);

/// Number of internal nodes with two leaf children.
int cherry_count(const OrderedHistory& t);

/// 2^(n-1-c(t)) / (n-1)!, the Yule probability of the underlying
/// (un-ordered) history.
Rational yule_probability(const OrderedHistory& t);

/// Canonical identity of the underlying un-ordered history: at every node
/// the two child encodings are ordered by (subtree size, encoding). Two
/// ordered histories share a key iff they are plane embeddings of the same
/// ranked history.
std::string canonical_shape_key(const OrderedHistory& t);

/// Newick-like text form with internal ranks as labels and anonymous
/// leaves written as 'x', e.g. "((x,x)1,x)2;" for the size-3 history.
std::string to_newick(const OrderedHistory& t);
OrderedHistory parse_newick(std::string_view text);

/// Uniform ordered history of size n: a uniform random permutation of
/// 1..n-1 pushed through the permutation/tree bijection.
OrderedHistory sample_uniform(int n, Rng& rng);
OrderedHistory sample_uniform(int n, uint64_t seed);

/// Top-down Yule growth: at step i one of the i pending lineages splits,
/// receiving rank n-i. Distributed identically to sample_uniform.
OrderedHistory sample_yule_growth(int n, Rng& rng);
OrderedHistory sample_yule_growth(int n, uint64_t seed);

/// Exhaustive-enumeration size limit; default 10, overridable with the
/// LONGBRANCH_ENUM_BOUND environment variable (read once per process).
int enumeration_bound();

/// Visits all (n-1)! ordered histories of size n exactly once.
/// Throws if n < 2 or n exceeds the bound.
void for_each_ordered(int n, const std::function<void(const OrderedHistory&)>& fn);
void for_each_ordered(int n, const std::function<void(const OrderedHistory&)>& fn, int bound);

}  // namespace longbranch
