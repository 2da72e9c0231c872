#include "ksup/format.hpp"

#include <cctype>
#include <charconv>
#include <system_error>

namespace ksup {

std::string format_double(double x, int significant) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x,
                             std::chars_format::general, significant);
    return std::string(buf, res.ptr);
}

bool parse_double(const std::string& text, double& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    while (first != last && std::isspace(static_cast<unsigned char>(*first))) {
        ++first;
    }
    while (last != first && std::isspace(static_cast<unsigned char>(last[-1]))) {
        --last;
    }
    if (first == last) {
        return false;
    }
    // std::from_chars rejects a leading '+'; tolerate it.
    if (*first == '+') {
        ++first;
        if (first == last || *first == '-') {
            return false;
        }
    }
    auto res = std::from_chars(first, last, out);
    return res.ec == std::errc() && res.ptr == last;
}

} // namespace ksup
