#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

#include "glvkit/errors.hpp"

namespace glv {

// Exact arbitrary-precision fraction, the scalar of all algebraic computation.
// cpp_rational keeps the canonical form we rely on everywhere: denominator > 0
// and gcd(|num|, den) = 1 after every operation.
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline BigInt num(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt den(const Rational& r) { return boost::multiprecision::denominator(r); }

inline bool is_integer(const Rational& r) { return den(r) == 1; }

double to_double(const Rational& r);

// "p" for integers, "p/q" otherwise.
std::string to_string(const Rational& r);

// Accepts "p" and "p/q" with optional sign on p; anything else is a ParseError.
Rational parse_rational(const std::string& text);

// r^e for integer e (negative allowed; throws DomainError on 0^negative).
Rational pow_int(const Rational& r, const BigInt& e);

// base^e with rational e. Exact only when e is an integer or base == 1;
// other combinations would leave the rationals and throw DomainError.
Rational pow_exact(const Rational& base, const Rational& e);

} // namespace glv
