#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "sandlab/error.hpp"

namespace sandlab {

/// Pile height: a finite 64-bit integer, +inf (source) or -inf (sink).
///
/// The two extreme int64 values are reserved for the infinities so that the
/// natural integer order is the order MINUS_INF < finite < PLUS_INF.
class Height {
public:
    using rep = std::int64_t;

    static constexpr rep kMinFinite = std::numeric_limits<rep>::min() + 1;
    static constexpr rep kMaxFinite = std::numeric_limits<rep>::max() - 1;

    constexpr Height() noexcept = default;

    /// Finite height. Throws OverflowError for the two reserved values.
    constexpr Height(rep value) : raw_(value) {  // NOLINT(google-explicit-constructor)
        if (value < kMinFinite || value > kMaxFinite) {
            throw OverflowError("height out of finite range");
        }
    }

    static constexpr Height plus_inf() noexcept { return Height(Raw{}, kPlusInf); }
    static constexpr Height minus_inf() noexcept { return Height(Raw{}, kMinusInf); }

    constexpr bool is_finite() const noexcept { return raw_ != kPlusInf && raw_ != kMinusInf; }
    constexpr bool is_plus_inf() const noexcept { return raw_ == kPlusInf; }
    constexpr bool is_minus_inf() const noexcept { return raw_ == kMinusInf; }

    /// Finite value; throws InvalidArgument for an infinity.
    constexpr rep value() const {
        if (!is_finite()) throw InvalidArgument("value() of an infinite height");
        return raw_;
    }

    /// Raw ordered representation, usable as a sort/hash key.
    constexpr rep raw() const noexcept { return raw_; }

    /// Adds a finite delta. Infinities absorb; finite results are overflow-checked.
    constexpr Height plus(rep delta) const {
        if (!is_finite()) return *this;
        rep out = 0;
        if (__builtin_add_overflow(raw_, delta, &out) || out < kMinFinite || out > kMaxFinite) {
            throw OverflowError("height overflow");
        }
        return Height(Raw{}, out);
    }

    friend constexpr auto operator<=>(const Height&, const Height&) noexcept = default;
    friend constexpr bool operator==(const Height&, const Height&) noexcept = default;

    std::string to_string() const;

    /// Parses a decimal integer, "+inf" or "-inf".
    static std::optional<Height> parse(std::string_view text);

private:
    static constexpr rep kPlusInf = std::numeric_limits<rep>::max();
    static constexpr rep kMinusInf = std::numeric_limits<rep>::min();

    struct Raw {};
    constexpr Height(Raw, rep raw) noexcept : raw_(raw) {}

    rep raw_ = 0;
};

inline std::ostream& operator<<(std::ostream& os, const Height& h) { return os << h.to_string(); }

}  // namespace sandlab

template <>
struct std::hash<sandlab::Height> {
    std::size_t operator()(const sandlab::Height& h) const noexcept {
        return std::hash<std::int64_t>{}(h.raw());
    }
};
