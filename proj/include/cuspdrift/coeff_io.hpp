#pragma once

// Reader for coefficient files:
//   # type=holomorphic|maass
//   # level=N
//   # weight=2            (holomorphic)
//   # r=9.53...           (maass)
//   # parity=even|odd     (maass)
//   1 1.0
//   2 -2
//   ...

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <variant>

#include "cuspdrift/error.hpp"
#include "cuspdrift/forms.hpp"

namespace cuspdrift {

using LoadedForm = std::variant<HolCuspForm, MaassForm>;

namespace detail {

inline std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

inline double parse_double(std::string_view tok, std::size_t line, const char* what) {
    double v = 0.0;
    const auto* end = tok.data() + tok.size();
    auto [p, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc() || p != end || !std::isfinite(v))
        throw ParseError(concat("non-numeric ", what, " '", tok, "'"), line);
    return v;
}

inline long parse_long(std::string_view tok, std::size_t line, const char* what) {
    long v = 0;
    const auto* end = tok.data() + tok.size();
    auto [p, ec] = std::from_chars(tok.data(), end, v);
    if (ec != std::errc() || p != end) throw ParseError(concat("non-integer ", what, " '", tok, "'"), line);
    return v;
}

}  // namespace detail

inline LoadedForm parse_coefficients(std::istream& in, const std::string& source = "<stream>") {
    std::map<std::string, std::pair<std::string, std::size_t>> header;
    std::vector<double> values;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = detail::trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            line = detail::trim(line.substr(1));
            const auto eq = line.find('=');
            if (eq == std::string_view::npos) continue;  // free comment
            const std::string key(detail::trim(line.substr(0, eq)));
            const std::string val(detail::trim(line.substr(eq + 1)));
            if (key.empty()) throw ParseError("header entry with empty key", lineno);
            if (!values.empty()) throw ParseError(detail::concat("header key '", key, "' after coefficient data"), lineno);
            header[key] = {val, lineno};
            continue;
        }
        std::istringstream ls{std::string(line)};
        std::string ntok, vtok, extra;
        if (!(ls >> ntok >> vtok) || (ls >> extra))
            throw ParseError("expected 'n value'", lineno);
        const long n = detail::parse_long(ntok, lineno, "index");
        const long expected = long(values.size()) + 1;
        if (n != expected)
            throw ParseError(detail::concat("coefficient index ", n, " where ", expected,
                                            " was expected (missing index ", expected, ")"),
                             lineno);
        values.push_back(detail::parse_double(vtok, lineno, "coefficient"));
    }
    auto need = [&](const char* key) -> const std::pair<std::string, std::size_t>& {
        auto it = header.find(key);
        if (it == header.end()) throw ParseError(detail::concat("missing header key '", key, "'"), 0);
        return it->second;
    };
    const auto& type = need("type");
    const auto& lv = need("level");
    const long level = detail::parse_long(lv.first, lv.second, "level");
    if (level < 1) throw ParseError("level must be >= 1", lv.second);
    if (values.empty()) throw ParseError("no coefficient lines", lineno);

    if (type.first == "holomorphic") {
        const auto& w = need("weight");
        if (w.first != "2") throw ParseError(detail::concat("unsupported weight '", w.first, "'"), w.second);
        HolCuspForm f;
        f.level = int(level);
        f.a.assign(values.begin(), values.end());
        f.provenance = source;
        return f;
    }
    if (type.first == "maass") {
        const auto& r = need("r");
        const auto& par = need("parity");
        MaassForm u;
        u.level = int(level);
        u.r = detail::parse_double(r.first, r.second, "spectral parameter");
        if (!(u.r > 0.0)) throw ParseError("spectral parameter r must be positive", r.second);
        if (par.first == "even")
            u.parity = Parity::even;
        else if (par.first == "odd")
            u.parity = Parity::odd;
        else
            throw ParseError(detail::concat("parity must be even or odd, got '", par.first, "'"), par.second);
        if (auto it = header.find("normalization"); it != header.end())
            u.l2_normalized = it->second.first == "l2";
        u.b = std::move(values);
        u.provenance = source;
        return u;
    }
    throw ParseError(detail::concat("unknown type '", type.first, "'"), type.second);
}

inline LoadedForm load_coefficients(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(detail::concat("cannot open coefficient file '", path, "'"), 0);
    return parse_coefficients(in, path);
}

}  // namespace cuspdrift
