#include "longbranch/histories.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <utility>

#include "longbranch/permutations.hpp"

namespace longbranch {

namespace {

int internal_count(const OrderedHistory& t) { return t.leaf_count - 1; }

void require(bool cond, const char* msg) {
  if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

void check_valid(const OrderedHistory& t) {
  const int n = t.leaf_count;
  require(n >= 2, "history: leaf count must be >= 2");
  require(static_cast<int>(t.nodes.size()) == n, "history: node array must have n entries");

  // Each rank except the root appears exactly once as a child, children
  // carry strictly smaller ranks, and every subtree is reachable.
  std::vector<int> parent(static_cast<size_t>(n), 0);
  int leaf_slots = 0;
  for (int r = 1; r <= internal_count(t); ++r) {
    for (int child : {t.node(r).left, t.node(r).right}) {
      if (child == 0) {
        ++leaf_slots;
        continue;
      }
      require(child >= 1 && child < r, "history: child rank must be smaller than parent rank");
      require(parent[static_cast<size_t>(child)] == 0, "history: rank used as a child twice");
      parent[static_cast<size_t>(child)] = r;
    }
  }
  require(leaf_slots == n, "history: leaf count mismatch");
  for (int r = 1; r < internal_count(t); ++r)
    require(parent[static_cast<size_t>(r)] != 0, "history: non-root rank without a parent");
  require(parent[static_cast<size_t>(internal_count(t))] == 0, "history: root must not have a parent");
}

BranchLengthProfile external_branch_profile(const OrderedHistory& t) {
  BranchLengthProfile profile;
  for (int r = internal_count(t); r >= 1; --r) {
    const auto& node = t.node(r);
    if (node.left == 0 || node.right == 0) profile.lengths.push_back(r);
  }
  return profile;
}

int cherry_count(const OrderedHistory& t) {
  int cherries = 0;
  for (int r = 1; r <= internal_count(t); ++r) {
    const auto& node = t.node(r);
    if (node.left == 0 && node.right == 0) ++cherries;
  }
  return cherries;
}

Rational yule_probability(const OrderedHistory& t) {
  const int n = t.leaf_count;
  BigInt embeddings;
  mpz_ui_pow_ui(embeddings.get_mpz_t(), 2,
                static_cast<unsigned long>(n - 1 - cherry_count(t)));
  return make_rational(std::move(embeddings), factorial(n - 1));
}

namespace {

// Returns (subtree size, canonical encoding) for the subtree rooted at
// `rank` (0 = leaf).
std::pair<int, std::string> canonical_subtree(const OrderedHistory& t, int rank) {
  if (rank == 0) return {1, "x"};
  auto left = canonical_subtree(t, t.node(rank).left);
  auto right = canonical_subtree(t, t.node(rank).right);
  if (right < left) std::swap(left, right);
  return {left.first + right.first,
          "(" + left.second + "," + right.second + ")" + std::to_string(rank)};
}

}  // namespace

std::string canonical_shape_key(const OrderedHistory& t) {
  return canonical_subtree(t, t.root_rank()).second;
}

namespace {

void write_newick(const OrderedHistory& t, int rank, std::string& out) {
  if (rank == 0) {
    out += 'x';
    return;
  }
  out += '(';
  write_newick(t, t.node(rank).left, out);
  out += ',';
  write_newick(t, t.node(rank).right, out);
  out += ')';
  out += std::to_string(rank);
}

class NewickParser {
 public:
  explicit NewickParser(std::string_view text) : text_(text) {}

  OrderedHistory parse() {
    skip_space();
    int leaves = 0;
    OrderedHistory t;
    const int root = parse_subtree(t, leaves);
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == ';') ++pos_;
    skip_space();
    if (pos_ != text_.size()) throw std::invalid_argument("newick: trailing input");
    if (root == 0) throw std::invalid_argument("newick: a bare leaf is not a history");
    t.leaf_count = leaves;
    t.nodes.resize(static_cast<size_t>(leaves));
    for (const auto& [rank, node] : parsed_) t.nodes[static_cast<size_t>(rank)] = node;
    check_valid(t);
    if (root != t.root_rank()) throw std::invalid_argument("newick: root rank must be n-1");
    return t;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void expect(char c) {
    if (peek() != c) throw std::invalid_argument("newick: malformed input");
    ++pos_;
  }

  // Returns the rank of the parsed subtree root, 0 for a leaf.
  int parse_subtree(OrderedHistory& t, int& leaves) {
    skip_space();
    if (peek() == 'x') {
      ++pos_;
      ++leaves;
      return 0;
    }
    expect('(');
    const int left = parse_subtree(t, leaves);
    skip_space();
    expect(',');
    const int right = parse_subtree(t, leaves);
    skip_space();
    expect(')');
    skip_space();
    const int rank = parse_rank();
    parsed_.emplace_back(rank, OrderedHistory::Node{left, right});
    return rank;
  }

  int parse_rank() {
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) throw std::invalid_argument("newick: missing rank label");
    long rank = std::strtol(std::string(text_.substr(start, pos_ - start)).c_str(), nullptr, 10);
    if (rank < 1 || rank > 1 << 28) throw std::invalid_argument("newick: rank out of range");
    return static_cast<int>(rank);
  }

  std::string_view text_;
  size_t pos_ = 0;
  std::vector<std::pair<int, OrderedHistory::Node>> parsed_;
};

}  // namespace

std::string to_newick(const OrderedHistory& t) {
  std::string out;
  write_newick(t, t.root_rank(), out);
  out += ';';
  return out;
}

OrderedHistory parse_newick(std::string_view text) { return NewickParser(text).parse(); }

OrderedHistory sample_uniform(int n, Rng& rng) {
  require(n >= 2, "sample_uniform: n must be >= 2");
  return permutation_to_tree(random_permutation(n - 1, rng));
}

OrderedHistory sample_uniform(int n, uint64_t seed) {
  Rng rng(seed);
  return sample_uniform(n, rng);
}

OrderedHistory sample_yule_growth(int n, Rng& rng) {
  require(n >= 2, "sample_yule_growth: n must be >= 2");
  OrderedHistory t;
  t.leaf_count = n;
  t.nodes.resize(static_cast<size_t>(n));

  // Pending lineage slots, encoded as (parent rank, side); the root slot is
  // {0, 0}. Picking uniformly among the i slots at step i makes every
  // ordered history arise from exactly one choice sequence.
  struct Slot {
    int parent;
    int side;  // 0 = left, 1 = right
  };
  std::vector<Slot> pending;
  pending.reserve(static_cast<size_t>(n));
  pending.push_back({0, 0});
  for (int step = 1; step <= n - 1; ++step) {
    const int rank = n - step;
    const auto pick = static_cast<size_t>(rng.below(pending.size()));
    const Slot slot = pending[pick];
    if (slot.parent != 0) {
      auto& parent = t.nodes[static_cast<size_t>(slot.parent)];
      (slot.side == 0 ? parent.left : parent.right) = rank;
    }
    pending[pick] = {rank, 0};
    pending.push_back({rank, 1});
  }
  return t;
}

OrderedHistory sample_yule_growth(int n, uint64_t seed) {
  Rng rng(seed);
  return sample_yule_growth(n, rng);
}

int enumeration_bound() {
  static const int bound = [] {
    if (const char* env = std::getenv("LONGBRANCH_ENUM_BOUND")) {
      const long value = std::strtol(env, nullptr, 10);
      if (value >= 2 && value <= 12) return static_cast<int>(value);
    }
    return 10;
  }();
  return bound;
}

void for_each_ordered(int n, const std::function<void(const OrderedHistory&)>& fn) {
  for_each_ordered(n, fn, enumeration_bound());
}

void for_each_ordered(int n, const std::function<void(const OrderedHistory&)>& fn, int bound) {
  require(n >= 2, "for_each_ordered: n must be >= 2");
  require(n <= bound, "for_each_ordered: n exceeds the enumeration bound");
  Permutation p;
  p.values.resize(static_cast<size_t>(n - 1));
  std::iota(p.values.begin(), p.values.end(), 1);
  do {
    fn(permutation_to_tree(p));
  } while (std::next_permutation(p.values.begin(), p.values.end()));
}

}  // namespace longbranch
