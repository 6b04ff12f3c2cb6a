#include "longbranch/rational.hpp"

#include <atomic>
#include <deque>
#include <mutex>
#include <stdexcept>

namespace longbranch {

namespace {

// deque keeps element addresses stable while the table grows, so readers can
// hold references without taking the mutex once `published` covers them.
struct FactorialTable {
  FactorialTable() : values{BigInt(1)}, published(1) {}  // seeded with 0!

  std::deque<BigInt> values;
  std::atomic<long> published;
  std::mutex grow_mutex;
};

FactorialTable& table() {
  static FactorialTable t;
  return t;
}

}  // namespace

void ensure_factorials(long n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  auto& t = table();
  if (t.published.load(std::memory_order_acquire) > n) return;
  std::lock_guard<std::mutex> lock(t.grow_mutex);
  for (long i = t.published.load(std::memory_order_relaxed); i <= n; ++i) {
    t.values.push_back(t.values.back() * i);
    t.published.store(i + 1, std::memory_order_release);
  }
}

const BigInt& factorial(long n) {
  ensure_factorials(n);
  return table().values[static_cast<size_t>(n)];
}

Rational make_rational(BigInt num, BigInt den) {
  if (sgn(den) == 0) throw std::invalid_argument("make_rational: zero denominator");
  Rational q(std::move(num), std::move(den));
  q.canonicalize();
  return q;
}

BigInt binomial(long n, long k) {
  if (k < 0 || k > n) return BigInt(0);
  BigInt r;
  mpz_bin_uiui(r.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return r;
}

double to_double(const Rational& q) { return mpq_get_d(q.get_mpq_t()); }

}  // namespace longbranch
