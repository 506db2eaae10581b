#pragma once

#include <boost/rational.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace htnpref {

using Rational = boost::rational<std::int64_t>;

/// Parses "3", "0.25" or "-1.5" into an exact rational. Returns nullopt for
/// anything else (including overflow of the 64-bit representation).
std::optional<Rational> parse_decimal(std::string_view text);

/// Exact decimal when the denominator has only factors 2 and 5, "p/q" otherwise.
std::string format_rational(const Rational& value);

/// Preference weight in [0,1]; 0 is the best value and 1 the worst.
class Weight {
public:
    Weight() = default;
    explicit Weight(const Rational& value);

    static Weight best() { return Weight(); }
    static Weight worst() { return Weight(Rational(1)); }

    const Rational& value() const { return value_; }
    std::string str() const { return format_rational(value_); }

    friend bool operator==(const Weight& a, const Weight& b) { return a.value_ == b.value_; }
    friend bool operator!=(const Weight& a, const Weight& b) { return a.value_ != b.value_; }
    friend bool operator<(const Weight& a, const Weight& b) { return a.value_ < b.value_; }
    friend bool operator>(const Weight& a, const Weight& b) { return b.value_ < a.value_; }
    friend bool operator<=(const Weight& a, const Weight& b) { return !(b.value_ < a.value_); }
    friend bool operator>=(const Weight& a, const Weight& b) { return !(a.value_ < b.value_); }

private:
    Rational value_{0};
};

/// Throws std::invalid_argument unless the text is a decimal in [0,1].
Weight parse_weight(std::string_view text);

}  // namespace htnpref
