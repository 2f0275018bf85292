#pragma once

#include <boost/multiprecision/gmp.hpp>

#include <cmath>
#include <cstdint>
#include <string>

#include "salami/error.hpp"

namespace salami {

/// Exact rational scalar. All graph data (weights, measures, path distances)
/// is kept rational so golden values can be asserted with tolerance zero.
using Rat = boost::multiprecision::mpq_rational;
using BigInt = boost::multiprecision::mpz_int;

inline double to_double(const Rat& q) { return q.convert_to<double>(); }

/// Exact conversion: every finite double is a binary rational.
Rat rat_from_double(double v);

/// Parses "p/q", "p", or a finite decimal like "-0.125" (exactly).
Rat rat_from_string(const std::string& s);

/// Canonical text form: "p" or "p/q", reduced, q > 0.
std::string rat_to_string(const Rat& q);

/// Best rational approximation to v with denominator <= max_den
/// (continued-fraction convergents/semiconvergents).
Rat rat_approximate(double v, std::uint64_t max_den);

inline Rat rat_abs(const Rat& q) { return q < 0 ? Rat(-q) : q; }

inline int rat_sign(const Rat& q) { return q < 0 ? -1 : (q > 0 ? 1 : 0); }

}  // namespace salami
