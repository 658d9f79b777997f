#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace toll {

using Rational = mpq_class;

// "p/q" in lowest terms, integers without a denominator.
std::string to_string(const Rational& value);

// Accepts "p", "p/q", or a plain integer; throws std::invalid_argument.
Rational parse_rational(const std::string& text);

inline Rational make_rational(long numerator, long denominator = 1) {
    Rational r(numerator, denominator);
    r.canonicalize();
    return r;
}

inline Rational max_of(const std::vector<Rational>& values) {
    Rational best = 0;
    for (const auto& v : values)
        if (v > best) best = v;
    return best;
}

}  // namespace toll
