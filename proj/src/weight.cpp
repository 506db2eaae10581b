#include "htnpref/weight.hpp"

#include <limits>
#include <sstream>
#include <stdexcept>

namespace htnpref {

namespace {

bool mul_add(std::int64_t& acc, int digit) {
    constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
    if (acc > (kMax - digit) / 10) return false;
    acc = acc * 10 + digit;
    return true;
}

}  // namespace

std::optional<Rational> parse_decimal(std::string_view text) {
    if (text.empty()) return std::nullopt;
    bool negative = false;
    std::size_t pos = 0;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        pos = 1;
    }
    std::int64_t numer = 0;
    std::int64_t denom = 1;
    bool seen_digit = false;
    bool seen_point = false;
    for (; pos < text.size(); ++pos) {
        char c = text[pos];
        if (c == '.') {
            if (seen_point) return std::nullopt;
            seen_point = true;
            continue;
        }
        if (c < '0' || c > '9') return std::nullopt;
        seen_digit = true;
        if (!mul_add(numer, c - '0')) return std::nullopt;
        if (seen_point) {
            std::int64_t unused = denom;
            if (!mul_add(unused, 0)) return std::nullopt;
            denom *= 10;
        }
    }
    if (!seen_digit || text.back() == '.') return std::nullopt;
    Rational r(numer, denom);
    return negative ? -r : r;
}

std::string format_rational(const Rational& value) {
    std::int64_t den = value.denominator();
    int twos = 0;
    int fives = 0;
    while (den % 2 == 0) {
        den /= 2;
        ++twos;
    }
    while (den % 5 == 0) {
        den /= 5;
        ++fives;
    }
    std::ostringstream out;
    if (den != 1) {
        out << value.numerator() << '/' << value.denominator();
        return out.str();
    }
    int digits = std::max(twos, fives);
    std::int64_t scale = 1;
    for (int i = 0; i < digits; ++i) scale *= 10;
    std::int64_t scaled = value.numerator() * (scale / value.denominator());
    bool negative = scaled < 0;
    if (negative) scaled = -scaled;
    std::int64_t whole = scaled / scale;
    std::int64_t frac = scaled % scale;
    if (negative) out << '-';
    out << whole;
    if (digits > 0) {
        std::string f = std::to_string(frac);
        out << '.' << std::string(static_cast<std::size_t>(digits) - f.size(), '0') << f;
    }
    return out.str();
}

Weight::Weight(const Rational& value) : value_(value) {
    if (value < Rational(0) || value > Rational(1)) {
        throw std::invalid_argument("weight out of range [0,1]: " + format_rational(value));
    }
}

Weight parse_weight(std::string_view text) {
    auto r = parse_decimal(text);
    if (!r) throw std::invalid_argument("not a decimal: " + std::string(text));
    return Weight(*r);
}

}  // namespace htnpref
