#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

#include "unsplit/errors.hpp"

namespace unsplit {

// All arithmetic in this library is exact. Rat is an arbitrary-precision
// rational kept in canonical form (coprime numerator/denominator, positive
// denominator), so equal values always serialize to identical bytes.
using Rat = mpq_class;

namespace detail {

inline bool all_digits(const std::string& s) {
    if (s.empty()) return false;
    for (char c : s) {
        if (c < '0' || c > '9') return false;
    }
    return true;
}

}  // namespace detail

// Parses "p", "-p", "p/q" or "-p/q" with decimal digits and q > 0.
// Floats, whitespace and empty strings are rejected.
inline Rat parse_rational(const std::string& text) {
    std::string s = text;
    bool negative = false;
    if (!s.empty() && s[0] == '-') {
        negative = true;
        s = s.substr(1);
    }
    std::string num = s, den = "1";
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        num = s.substr(0, slash);
        den = s.substr(slash + 1);
    }
    if (!detail::all_digits(num) || !detail::all_digits(den)) {
        throw ParseError("invalid rational literal: '" + text + "'");
    }
    mpz_class n(num, 10), d(den, 10);
    if (d == 0) throw ParseError("zero denominator in rational literal: '" + text + "'");
    Rat q(n, d);
    q.canonicalize();
    if (negative) q = -q;
    return q;
}

// Canonical serialization: "p" when the denominator is 1, "p/q" otherwise.
inline std::string rat_to_string(const Rat& q) {
    return q.get_str();
}

inline Rat rat_abs(const Rat& q) {
    return q < 0 ? Rat(-q) : q;
}

inline std::string vec_to_string(const std::vector<Rat>& v) {
    std::string out = "(";
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i > 0) out += ", ";
        out += rat_to_string(v[i]);
    }
    out += ")";
    return out;
}

}  // namespace unsplit
