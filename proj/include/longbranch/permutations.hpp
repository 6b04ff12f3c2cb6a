#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "longbranch/histories.hpp"
#include "longbranch/rng.hpp"

namespace longbranch {

/// A permutation of 1..m, stored one-based in `values`.
struct Permutation {
  std::vector<int> values;

  int size() const { return static_cast<int>(values.size()); }
  bool operator==(const Permutation&) const = default;
};

/// Throws std::invalid_argument unless values is a bijection on 1..m.
void check_valid(const Permutation& p);

/// In-order image of the history: (image of left subtree, root rank,
/// image of right subtree), empty for leaves. Size n-1 for n leaves.
Permutation tree_to_permutation(const OrderedHistory& t);

/// Inverse bijection, linear time via a monotone stack. The resulting
/// history has p.size()+1 leaves.
OrderedHistory permutation_to_tree(const Permutation& p);

/// Same map, by recursive maximum splitting; quadratic worst case. Kept as
/// the reference the fast path is checked against.
OrderedHistory permutation_to_tree_reference(const Permutation& p);

/// p(i) is a peak when 1 < i < m and p(i-1) < p(i) > p(i+1). The non-peak
/// values, sorted strictly decreasing, equal the external branch profile of
/// the corresponding history.
BranchLengthProfile non_peak_values(const Permutation& p);

/// k-th largest non-peak value, or nullopt when fewer than k exist.
std::optional<int> kth_largest_non_peak(const Permutation& p, int k);

/// Fisher-Yates shuffle of 1..m.
Permutation random_permutation(int m, Rng& rng);

/// One-line comma-separated form, e.g. "2,6,4,5,3,1,7".
std::string to_string(const Permutation& p);
Permutation permutation_from_string(std::string_view text);

}  // namespace longbranch
