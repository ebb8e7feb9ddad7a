#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace ecomplex {

/// Exact-decimal USD amount stored as an integer count of 1e-4 dollars.
///
/// Trade values stay exact through ingestion, aggregation and filtering, so
/// value-conservation checks hold to the last unit; conversion to binary
/// floating point happens only when a metric is computed. The 1e-4 grain
/// covers sub-cent precision while leaving headroom for world-trade totals
/// (int64 caps out near 9.2e14 dollars).
class Money {
  public:
    static constexpr std::int64_t kScale = 10'000;

    constexpr Money() = default;

    static constexpr Money from_raw(std::int64_t raw) {
        Money m;
        m.raw_ = raw;
        return m;
    }
    static constexpr Money from_dollars(std::int64_t dollars) {
        return from_raw(dollars * kScale);
    }
    /// Rounds to the nearest representable amount (ties away from zero).
    static Money from_double(double dollars);

    /// Parses a plain decimal with optional sign and exponent ("120", "1.5e9").
    /// Returns nullopt on syntax errors or int64 overflow. If `exact` is given
    /// it is set to false when the input carries more precision than the 1e-4
    /// grain and had to be rounded.
    static std::optional<Money> parse(std::string_view text, bool *exact = nullptr);

    constexpr std::int64_t raw() const { return raw_; }
    double dollars() const { return static_cast<double>(raw_) / kScale; }
    constexpr bool is_zero() const { return raw_ == 0; }
    constexpr bool is_negative() const { return raw_ < 0; }

    /// Exact decimal rendering, shortest form ("1.5", "5000", "0.0001").
    std::string str() const;

    constexpr Money &operator+=(Money o) {
        raw_ += o.raw_;
        return *this;
    }
    constexpr Money &operator-=(Money o) {
        raw_ -= o.raw_;
        return *this;
    }
    friend constexpr Money operator+(Money a, Money b) { return from_raw(a.raw_ + b.raw_); }
    friend constexpr Money operator-(Money a, Money b) { return from_raw(a.raw_ - b.raw_); }
    friend constexpr auto operator<=>(Money, Money) = default;

  private:
    std::int64_t raw_ = 0;
};

} // namespace ecomplex
