#include "glvkit/rational.hpp"

#include <cctype>
#include <sstream>

namespace glv {

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

std::string to_string(const Rational& r) {
    std::ostringstream out;
    out << r;
    return out.str();
}

Rational parse_rational(const std::string& text) {
    // strict "p" or "p/q" with optional sign on p and q > 0
    auto fail = [&]() -> Rational {
        throw ParseError("not a rational: '" + text + "' (expected \"p\" or \"p/q\")");
    };
    if (text.empty()) fail();
    std::size_t pos = 0;
    if (text[pos] == '+' || text[pos] == '-') ++pos;
    std::size_t digits = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        ++pos;
        ++digits;
    }
    if (digits == 0) fail();
    // cpp_int's string constructor rejects a leading '+'
    BigInt p(text[0] == '+' ? text.substr(1, pos - 1) : text.substr(0, pos));
    if (pos == text.size()) return Rational(p);
    if (text[pos] != '/') fail();
    ++pos;
    std::size_t den_start = pos;
    std::size_t den_digits = 0;
    while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        ++pos;
        ++den_digits;
    }
    if (den_digits == 0 || pos != text.size()) fail();
    BigInt q(text.substr(den_start));
    if (q == 0) throw ParseError("zero denominator in '" + text + "'");
    return Rational(p, q);
}

Rational pow_int(const Rational& r, const BigInt& e) {
    if (e == 0) return Rational(1);
    if (r == 0 && e < 0) throw DomainError("0 raised to a negative power");
    BigInt k = e < 0 ? BigInt(-e) : e;
    Rational base = e < 0 ? Rational(1) / r : r;
    Rational acc(1);
    while (k > 0) {
        if ((k & 1) != 0) acc *= base;
        base *= base;
        k >>= 1;
    }
    return acc;
}

Rational pow_exact(const Rational& base, const Rational& e) {
    if (base == 1 || e == 0) return Rational(1);
    if (base <= 0) throw DomainError("pow_exact requires a positive base");
    if (!is_integer(e))
        throw DomainError("irrational result: " + to_string(base) + "^" + to_string(e) +
                          " is not rational");
    return pow_int(base, num(e));
}

} // namespace glv
