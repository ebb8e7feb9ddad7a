#include "ecomplex/money.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>

namespace ecomplex {

namespace {

constexpr std::int64_t kInt64Max = std::numeric_limits<std::int64_t>::max();

} // namespace

Money Money::from_double(double dollars) {
    const double scaled = dollars * static_cast<double>(kScale);
    return Money::from_raw(static_cast<std::int64_t>(std::llround(scaled)));
}

std::optional<Money> Money::parse(std::string_view text, bool *exact) {
    if (exact)
        *exact = true;

    std::size_t i = 0;
    const std::size_t n = text.size();
    while (i < n && std::isspace(static_cast<unsigned char>(text[i])))
        ++i;
    std::size_t end = n;
    while (end > i && std::isspace(static_cast<unsigned char>(text[end - 1])))
        --end;
    if (i == end)
        return std::nullopt;

    bool negative = false;
    if (text[i] == '+' || text[i] == '-') {
        negative = text[i] == '-';
        ++i;
    }

    unsigned __int128 mantissa = 0;
    int digits = 0, frac_digits = 0;
    bool seen_digit = false, seen_point = false;
    for (; i < end; ++i) {
        const char c = text[i];
        if (c >= '0' && c <= '9') {
            seen_digit = true;
            if (digits < 30) {
                mantissa = mantissa * 10 + static_cast<unsigned>(c - '0');
                ++digits;
                if (seen_point)
                    ++frac_digits;
            } else {
                return std::nullopt; // mantissa too long to hold exactly
            }
        } else if (c == '.' && !seen_point) {
            seen_point = true;
        } else if (c == 'e' || c == 'E') {
            break;
        } else {
            return std::nullopt;
        }
    }
    if (!seen_digit)
        return std::nullopt;

    long exponent = 0;
    if (i < end) { // at 'e' or 'E'
        ++i;
        if (i == end)
            return std::nullopt;
        char *parse_end = nullptr;
        const std::string tail(text.substr(i, end - i));
        exponent = std::strtol(tail.c_str(), &parse_end, 10);
        if (parse_end == nullptr || *parse_end != '\0')
            return std::nullopt;
    }

    // Shift into 1e-4-dollar units.
    long shift = exponent - frac_digits + 4;
    while (shift > 0 && mantissa != 0) {
        if (mantissa > static_cast<unsigned __int128>(kInt64Max))
            return std::nullopt;
        mantissa *= 10;
        --shift;
    }
    while (shift < 0) {
        const unsigned rem = static_cast<unsigned>(mantissa % 10);
        mantissa /= 10;
        if (rem != 0) {
            if (exact)
                *exact = false;
            if (shift == -1 && rem >= 5)
                mantissa += 1; // round half away from zero at the last step
        }
        ++shift;
    }

    if (mantissa > static_cast<unsigned __int128>(kInt64Max))
        return std::nullopt;
    auto raw = static_cast<std::int64_t>(mantissa);
    return Money::from_raw(negative ? -raw : raw);
}

std::string Money::str() const {
    std::int64_t v = raw_;
    std::string sign;
    if (v < 0) {
        sign = "-";
        v = -v;
    }
    const std::int64_t whole = v / kScale;
    std::int64_t frac = v % kScale;
    std::string out = sign + std::to_string(whole);
    if (frac != 0) {
        char buf[8];
        std::snprintf(buf, sizeof buf, "%04lld", static_cast<long long>(frac));
        std::string f(buf);
        while (!f.empty() && f.back() == '0')
            f.pop_back();
        out += "." + f;
    }
    return out;
}

} // namespace ecomplex
