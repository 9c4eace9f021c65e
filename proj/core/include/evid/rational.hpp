#pragma once

#include <gmpxx.h>

#include <string>
#include <string_view>

namespace evid {

using Rational = mpq_class;

/// Parses "3", "-2/5" or "1.25" (decimals are converted exactly).
Rational parse_rational(std::string_view text);

std::string to_string(const Rational& q);

inline double to_double(const Rational& q) { return q.get_d(); }

/// Exact binomial coefficient as a rational.
Rational binomial(unsigned n, unsigned k);

/// Coefficient conversion used by the generic evaluators.
template <typename T> T convert_rational(const Rational& q);

template <> inline Rational convert_rational<Rational>(const Rational& q) { return q; }
template <> inline double convert_rational<double>(const Rational& q) { return q.get_d(); }

inline double convert_to_double(const Rational& q) { return q.get_d(); }
inline double convert_to_double(double x) { return x; }

}  // namespace evid
