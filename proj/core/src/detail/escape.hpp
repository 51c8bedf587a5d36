#pragma once

#include <cctype>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace kinemb::detail {

// Node labels live in whitespace-delimited text formats, so whitespace,
// control bytes and '%' itself travel percent-encoded.
inline bool label_byte_needs_escape(unsigned char c) {
    return c == '%' || c <= 0x20 || c == 0x7f;
}

inline std::string escape_label(const std::string& label) {
    std::string out;
    out.reserve(label.size());
    for (unsigned char c : label) {
        if (label_byte_needs_escape(c)) {
            char buf[4];
            std::snprintf(buf, sizeof(buf), "%%%02X", c);
            out += buf;
        } else {
            out += static_cast<char>(c);
        }
    }
    return out;
}

inline int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    return -1;
}

inline std::string unescape_label(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == '%') {
            if (i + 2 >= text.size()) throw std::invalid_argument("truncated %-escape in label");
            int hi = hex_value(text[i + 1]);
            int lo = hex_value(text[i + 2]);
            if (hi < 0 || lo < 0) throw std::invalid_argument("bad %-escape in label");
            out += static_cast<char>(hi * 16 + lo);
            i += 2;
        } else {
            out += text[i];
        }
    }
    return out;
}

}  // namespace kinemb::detail
