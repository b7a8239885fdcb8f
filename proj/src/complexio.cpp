#include "arakelov/complexio.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>
#include <cstdlib>

#include "arakelov/exceptions.hpp"

namespace arakelov {

namespace {

// Reads one signed floating-point literal starting at pos. Returns the
// value and advances pos. A bare sign followed by 'i' counts as +/-1
// (so "i" and "-i" parse), signalled via unit_only.
double read_number(const std::string& s, size_t& pos, bool& unit_only) {
    unit_only = false;
    size_t start = pos;
    double sign = 1.0;
    if (pos < s.size() && (s[pos] == '+' || s[pos] == '-')) {
        if (s[pos] == '-') sign = -1.0;
        ++pos;
    }
    if (pos < s.size() && (s[pos] == 'i' || s[pos] == 'j')) {
        unit_only = true;
        return sign;
    }
    const char* begin = s.c_str() + pos;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) {
        throw InputError("malformed complex literal '" + s + "' at offset " +
                         std::to_string(start));
    }
    pos += static_cast<size_t>(end - begin);
    return sign < 0 ? -v : v; // sign already consumed by us, strtod saw none
}

} // namespace

cd parse_complex(const std::string& text) {
    std::string s;
    s.reserve(text.size());
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
    }
    if (s.empty()) throw InputError("empty complex literal");

    size_t pos = 0;
    bool unit_only = false;
    double first = read_number(s, pos, unit_only);

    // Single imaginary term: "i", "-2.5i".
    if (unit_only || (pos < s.size() && (s[pos] == 'i' || s[pos] == 'j'))) {
        ++pos;
        if (pos != s.size()) {
            throw InputError("trailing characters in complex literal '" + text + "'");
        }
        return cd(0.0, first);
    }
    if (pos == s.size()) return cd(first, 0.0); // pure real

    if (s[pos] != '+' && s[pos] != '-') {
        throw InputError("expected '+' or '-' in complex literal '" + text + "'");
    }
    double second = read_number(s, pos, unit_only);
    if (pos >= s.size() || (s[pos] != 'i' && s[pos] != 'j')) {
        throw InputError("imaginary part must end in 'i' in '" + text + "'");
    }
    ++pos;
    if (pos != s.size()) {
        throw InputError("trailing characters in complex literal '" + text + "'");
    }
    if (unit_only) return cd(first, second);
    return cd(first, second);
}

std::string format_double(double x) {
    // Shortest representation that round-trips exactly.
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

std::string format_complex(cd z) {
    std::string out = format_double(z.real());
    const std::string im = format_double(z.imag());
    if (!im.empty() && im[0] != '-') out += '+';
    out += im;
    out += 'i';
    return out;
}

} // namespace arakelov
