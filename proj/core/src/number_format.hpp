#ifndef SCCKM_SRC_NUMBER_FORMAT_HPP
#define SCCKM_SRC_NUMBER_FORMAT_HPP

#include <charconv>
#include <string>
#include <system_error>

namespace scckm::detail {

// Shortest decimal that parses back to the same double.
inline std::string format_double(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), value);
    if (res.ec != std::errc{}) {
        return "nan";
    }
    return std::string(buf, res.ptr);
}

}  // namespace scckm::detail

#endif  // SCCKM_SRC_NUMBER_FORMAT_HPP
