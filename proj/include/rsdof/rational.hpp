#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace rsdof {

/// Exact rational number. All region/scheme accounting uses these; no
/// floating point enters until the finite-SNR simulator.
using rational = boost::multiprecision::cpp_rational;
using bigint = boost::multiprecision::cpp_int;

inline double to_double(const rational& r) { return r.convert_to<double>(); }

/// (x)^+ = max(x, 0)
inline rational positive_part(const rational& x) { return x > 0 ? x : rational(0); }

/// Canonical "p/q" form, q >= 1, gcd(p, q) = 1 (e.g. "13/10", "0/1", "-1/2").
inline std::string to_pq_string(const rational& r) {
    std::ostringstream os;
    os << numerator(r) << '/' << denominator(r);
    return os.str();
}

namespace detail {

inline bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (c < '0' || c > '9') return false;
    return true;
}

inline bigint parse_unsigned(std::string_view s) {
    if (!all_digits(s)) throw std::invalid_argument("invalid number: '" + std::string(s) + "'");
    bigint v = 0;
    for (char c : s) v = v * 10 + (c - '0');
    return v;
}

} // namespace detail

/// Parses "p/q", an integer, or a decimal string ("0.6" -> 3/5 exactly).
/// Decimal conversion is exact; no binary floating-point round trip.
inline rational parse_rational(std::string_view text) {
    // trim
    while (!text.empty() && (text.front() == ' ' || text.front() == '\t')) text.remove_prefix(1);
    while (!text.empty() && (text.back() == ' ' || text.back() == '\t')) text.remove_suffix(1);
    if (text.empty()) throw std::invalid_argument("empty rational literal");

    bool negative = false;
    if (text.front() == '+' || text.front() == '-') {
        negative = text.front() == '-';
        text.remove_prefix(1);
    }
    if (text.empty()) throw std::invalid_argument("empty rational literal");

    rational value;
    if (auto slash = text.find('/'); slash != std::string_view::npos) {
        bigint num = detail::parse_unsigned(text.substr(0, slash));
        bigint den = detail::parse_unsigned(text.substr(slash + 1));
        if (den == 0) throw std::invalid_argument("zero denominator in '" + std::string(text) + "'");
        value = rational(num, den);
    } else if (auto dot = text.find('.'); dot != std::string_view::npos) {
        std::string_view int_part = text.substr(0, dot);
        std::string_view frac_part = text.substr(dot + 1);
        if (int_part.empty() && frac_part.empty())
            throw std::invalid_argument("invalid decimal '" + std::string(text) + "'");
        bigint num = int_part.empty() ? bigint(0) : detail::parse_unsigned(int_part);
        bigint den = 1;
        if (!frac_part.empty()) {
            bigint frac = detail::parse_unsigned(frac_part);
            for (std::size_t i = 0; i < frac_part.size(); ++i) den *= 10;
            num = num * den + frac;
        }
        value = rational(num, den);
    } else {
        value = rational(detail::parse_unsigned(text));
    }
    return negative ? -value : value;
}

/// Parses a comma-separated list of rationals ("0.6,0.3" or "3/5,3/10").
inline std::vector<rational> parse_rational_list(std::string_view text) {
    std::vector<rational> out;
    std::size_t start = 0;
    while (true) {
        std::size_t comma = text.find(',', start);
        std::string_view item =
            comma == std::string_view::npos ? text.substr(start) : text.substr(start, comma - start);
        out.push_back(parse_rational(item));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace rsdof
