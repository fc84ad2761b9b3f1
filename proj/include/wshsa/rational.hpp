#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>
#include <vector>

namespace wshsa {

using Int = boost::multiprecision::cpp_int;

/// Exact rational scalar used by the LP core and all rate arithmetic.
/// Always reduced, denominator > 0, never rounded.
using Rational = boost::multiprecision::cpp_rational;

inline Rational rat(long long num, long long den = 1) { return Rational(num, den); }

inline Int rat_num(const Rational& r) { return numerator(r); }
inline Int rat_den(const Rational& r) { return denominator(r); }

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

/// "5", "-3/7": the canonical text form used in reports and golden files.
inline std::string to_string(const Rational& r) {
    std::string s = numerator(r).str();
    if (denominator(r) != 1) s += "/" + denominator(r).str();
    return s;
}

inline Rational parse_rational(const std::string& s) {
    auto slash = s.find('/');
    try {
        if (slash == std::string::npos) return Rational(Int(s));
        Int num(s.substr(0, slash));
        Int den(s.substr(slash + 1));
        if (den <= 0) throw std::invalid_argument("nonpositive denominator");
        return Rational(num, den);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational literal: " + s);
    }
}

/// lcm of the denominators of a list of rationals; 1 for an empty list.
inline Int denominator_lcm(const std::vector<Rational>& vals) {
    Int l = 1;
    for (const auto& v : vals) l = boost::multiprecision::lcm(l, Int(denominator(v)));
    return l;
}

/// Rounds an exact multiple to int64, throwing if it is not one.
inline std::int64_t to_int64(const Rational& r) {
    if (!is_integer(r)) throw std::domain_error("rational is not an integer: " + to_string(r));
    return static_cast<std::int64_t>(numerator(r));
}

}  // namespace wshsa
