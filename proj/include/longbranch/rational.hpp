#pragma once

#include <gmpxx.h>

#include <string>

namespace longbranch {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Factorials up to the largest n requested so far, grown on demand and
/// shared read-only afterwards. Safe to call from several threads.
const BigInt& factorial(long n);
void ensure_factorials(long n);

/// num/den in canonical (reduced) form, den > 0.
Rational make_rational(BigInt num, BigInt den);

BigInt binomial(long n, long k);

double to_double(const Rational& q);

/// Ceiling of n/2 for n >= 0.
inline int ceil_half(int n) { return (n + 1) / 2; }

}  // namespace longbranch
