#include "sandlab/height.hpp"

#include <charconv>

namespace sandlab {

std::string Height::to_string() const {
    if (is_plus_inf()) return "+inf";
    if (is_minus_inf()) return "-inf";
    return std::to_string(raw_);
}

std::optional<Height> Height::parse(std::string_view text) {
    if (text == "+inf" || text == "inf") return plus_inf();
    if (text == "-inf") return minus_inf();
    if (text.empty()) return std::nullopt;
    std::string_view digits = text;
    if (digits.front() == '+') {
        digits.remove_prefix(1);
        if (digits.empty() || digits.front() == '-') return std::nullopt;
    }
    rep value = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
    if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
    if (value < kMinFinite || value > kMaxFinite) return std::nullopt;
    return Height(value);
}

}  // namespace sandlab
