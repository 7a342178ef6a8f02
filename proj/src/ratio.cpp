#include "cogsplit/ratio.hpp"

#include <charconv>
#include <sstream>

#include "cogsplit/error.hpp"

namespace cogsplit {

namespace {

uint32_t parse_share(std::string_view part, const std::string& whole) {
    uint32_t value = 0;
    const auto* first = part.data();
    const auto* last = part.data() + part.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        throw Error(ErrorCode::BadRatio, "expected R:R:R with integer shares, got '" + whole + "'");
    }
    return value;
}

}  // namespace

Ratio Ratio::parse(const std::string& text) {
    const auto first = text.find(':');
    const auto second = text.find(':', first == std::string::npos ? first : first + 1);
    if (first == std::string::npos || second == std::string::npos ||
        text.find(':', second + 1) != std::string::npos) {
        throw Error(ErrorCode::BadRatio, "expected R:R:R, got '" + text + "'");
    }
    Ratio r;
    r.train = parse_share(std::string_view(text).substr(0, first), text);
    r.val = parse_share(std::string_view(text).substr(first + 1, second - first - 1), text);
    r.test = parse_share(std::string_view(text).substr(second + 1), text);
    if (r.total() == 0) throw Error(ErrorCode::BadRatio, "all shares are zero");
    if (r.train == 0) throw Error(ErrorCode::BadRatio, "train share must be positive");
    return r;
}

std::string Ratio::to_string() const {
    std::ostringstream os;
    os << train << ':' << val << ':' << test;
    return os.str();
}

std::array<uint64_t, 3> apportion_samples(uint64_t count, const Ratio& ratio) {
    const uint64_t total = ratio.total();
    const uint64_t n_val = count * ratio.val / total;
    const uint64_t n_test = count * ratio.test / total;
    return {count - n_val - n_test, n_val, n_test};
}

int nonzero_partitions(const Ratio& ratio) {
    return 1 + (ratio.val > 0 ? 1 : 0) + (ratio.test > 0 ? 1 : 0);
}

std::array<uint64_t, 3> apportion_units(uint64_t count, const Ratio& ratio) {
    auto counts = apportion_samples(count, ratio);
    if (ratio.val > 0 && counts[1] == 0) counts[1] = 1;
    if (ratio.test > 0 && counts[2] == 0) counts[2] = 1;
    counts[0] = count - counts[1] - counts[2];
    return counts;
}

}  // namespace cogsplit
