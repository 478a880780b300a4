#include "qbound/serialize.hpp"

#include <cmath>
#include <cstdio>

namespace qbound {

std::string fmt12(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    if (v == 0.0) v = 0.0;  // drop the sign of -0
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string json_quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    out += '"';
    return out;
}

std::string json_object(const std::vector<std::pair<std::string, std::string>>& fields) {
    std::string out = "{";
    bool first = true;
    for (const auto& [k, v] : fields) {
        if (!first) out += ", ";
        first = false;
        out += json_quote(k);
        out += ": ";
        // bare numbers stay bare; inf/nan and anything non-numeric is quoted
        const bool numeric = !v.empty() && v.find_first_not_of("0123456789+-.eE") == std::string::npos
                          && v != "inf" && v != "-inf" && v != "nan";
        const bool literal = v == "true" || v == "false" || v == "null"
                          || (!v.empty() && v.front() == '{');
        if (numeric || literal) out += v;
        else out += json_quote(v);
    }
    out += "}";
    return out;
}

}  // namespace qbound
