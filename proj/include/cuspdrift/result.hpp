#pragma once

// Result records and their JSON / CSV forms.
//
// JSON: {"command", "inputs", "outputs", "provenance", "wall_time_s"}, keys in
// insertion order, complex numbers as {"re": .., "im": ..}.
// CSV: one row per record, columns command, in.<key>.., out.<key>..,
// sha256.<file>.., wall_time_s; complex numbers as re;im.
// Doubles are written in shortest round-trip form in both, so the two
// formats carry identical values.

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <complex>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "cuspdrift/error.hpp"
#include "json.hpp"

namespace cuspdrift {

using cplx = std::complex<double>;
using FieldValue = std::variant<bool, std::int64_t, double, cplx, std::string>;

struct Field {
    std::string key;
    FieldValue value;
    bool operator==(const Field&) const = default;
};

struct ResultRecord {
    std::string command;
    std::vector<Field> inputs, outputs;
    std::vector<std::pair<std::string, std::string>> provenance;  // file, sha256
    double wall_time_s = 0.0;

    ResultRecord& in(std::string key, FieldValue v) {
        inputs.push_back({std::move(key), std::move(v)});
        return *this;
    }
    ResultRecord& out(std::string key, FieldValue v) {
        outputs.push_back({std::move(key), std::move(v)});
        return *this;
    }
    const FieldValue* find_output(std::string_view key) const {
        for (const auto& f : outputs)
            if (f.key == key) return &f.value;
        return nullptr;
    }
    bool has_error_estimate() const { return find_output("tail_estimate") || find_output("quadrature_error"); }

    bool operator==(const ResultRecord&) const = default;
};

/// Lower-case hex SHA-256 of a file's bytes.
inline std::string file_sha256(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(detail::concat("cannot open '", path, "' for hashing"), 0);
    EVP_MD_CTX* ctx = EVP_MD_CTX_new();
    if (!ctx || EVP_DigestInit_ex(ctx, EVP_sha256(), nullptr) != 1) {
        EVP_MD_CTX_free(ctx);
        throw Error("OpenSSL SHA-256 initialisation failed");
    }
    char buf[1 << 14];
    while (in) {
        in.read(buf, sizeof buf);
        if (in.gcount() > 0) EVP_DigestUpdate(ctx, buf, std::size_t(in.gcount()));
    }
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx, md, &len);
    EVP_MD_CTX_free(ctx);
    std::ostringstream os;
    for (unsigned i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
}

namespace detail {

inline std::string shortest(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, p);
}

inline nlohmann::ordered_json field_json(const FieldValue& v) {
    return std::visit(
        [](const auto& x) -> nlohmann::ordered_json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, cplx>) {
                nlohmann::ordered_json j;
                j["re"] = x.real();
                j["im"] = x.imag();
                return j;
            } else {
                return x;
            }
        },
        v);
}

inline FieldValue field_from_json(const nlohmann::ordered_json& j, const std::string& key) {
    if (j.is_boolean()) return j.get<bool>();
    if (j.is_number_integer()) return j.get<std::int64_t>();
    if (j.is_number_float()) return j.get<double>();
    if (j.is_string()) return j.get<std::string>();
    if (j.is_object() && j.size() == 2 && j.contains("re") && j.contains("im"))
        return cplx(j["re"].get<double>(), j["im"].get<double>());
    throw ParseError(concat("field '", key, "' has an unsupported JSON type"), 0);
}

inline std::string csv_cell(const FieldValue& v) {
    return std::visit(
        [](const auto& x) -> std::string {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, cplx>) return shortest(x.real()) + ";" + shortest(x.imag());
            else if constexpr (std::is_same_v<T, double>) return shortest(x);
            else if constexpr (std::is_same_v<T, bool>) return x ? "true" : "false";
            else if constexpr (std::is_same_v<T, std::int64_t>) return std::to_string(x);
            else {
                if (x.find_first_of(",\"\n") == std::string::npos) return x;
                std::string q = "\"";
                for (char c : x) q += c == '"' ? std::string("\"\"") : std::string(1, c);
                return q + "\"";
            }
        },
        v);
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const ResultRecord& r) {
    nlohmann::ordered_json j;
    j["command"] = r.command;
    j["inputs"] = nlohmann::ordered_json::object();
    for (const auto& f : r.inputs) j["inputs"][f.key] = detail::field_json(f.value);
    j["outputs"] = nlohmann::ordered_json::object();
    for (const auto& f : r.outputs) j["outputs"][f.key] = detail::field_json(f.value);
    j["provenance"] = nlohmann::ordered_json::object();
    for (const auto& [file, hash] : r.provenance) j["provenance"][file] = hash;
    j["wall_time_s"] = r.wall_time_s;
    return j;
}

inline ResultRecord record_from_json(const nlohmann::ordered_json& j) {
    ResultRecord r;
    try {
        r.command = j.at("command").get<std::string>();
        for (const auto& [k, v] : j.at("inputs").items()) r.inputs.push_back({k, detail::field_from_json(v, k)});
        for (const auto& [k, v] : j.at("outputs").items()) r.outputs.push_back({k, detail::field_from_json(v, k)});
        for (const auto& [k, v] : j.at("provenance").items()) r.provenance.emplace_back(k, v.get<std::string>());
        r.wall_time_s = j.at("wall_time_s").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(detail::concat("malformed result record: ", e.what()), 0);
    }
    return r;
}

/// A single record is written as an object, several as an array.
inline std::string records_to_json(const std::vector<ResultRecord>& rs) {
    if (rs.size() == 1) return to_json(rs.front()).dump(2) + "\n";
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& r : rs) arr.push_back(to_json(r));
    return arr.dump(2) + "\n";
}

inline std::vector<ResultRecord> records_from_json(const std::string& text) {
    nlohmann::ordered_json j;
    try {
        j = nlohmann::ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(detail::concat("invalid JSON: ", e.what()), 0);
    }
    std::vector<ResultRecord> out;
    if (j.is_array())
        for (const auto& x : j) out.push_back(record_from_json(x));
    else
        out.push_back(record_from_json(j));
    return out;
}

inline std::string records_to_csv(const std::vector<ResultRecord>& rs) {
    std::vector<std::string> cols{"command"};
    auto add = [&](const std::string& c) {
        if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
    };
    for (const auto& r : rs)
        for (const auto& f : r.inputs) add("in." + f.key);
    for (const auto& r : rs)
        for (const auto& f : r.outputs) add("out." + f.key);
    for (const auto& r : rs)
        for (const auto& p : r.provenance) add("sha256." + p.first);
    cols.push_back("wall_time_s");

    std::ostringstream os;
    for (std::size_t i = 0; i < cols.size(); ++i) os << (i ? "," : "") << detail::csv_cell(cols[i]);
    os << "\n";
    for (const auto& r : rs) {
        std::vector<std::string> row(cols.size());
        auto put = [&](const std::string& c, std::string v) {
            row[std::size_t(std::find(cols.begin(), cols.end(), c) - cols.begin())] = std::move(v);
        };
        put("command", detail::csv_cell(r.command));
        for (const auto& f : r.inputs) put("in." + f.key, detail::csv_cell(f.value));
        for (const auto& f : r.outputs) put("out." + f.key, detail::csv_cell(f.value));
        for (const auto& p : r.provenance) put("sha256." + p.first, p.second);
        put("wall_time_s", detail::shortest(r.wall_time_s));
        for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
        os << "\n";
    }
    return os.str();
}

enum class OutputFormat { json, csv };

/// Writes the records to `path` ("-" for stdout). Records without an error
/// estimate are rejected.
inline void emit_result(const std::vector<ResultRecord>& rs, OutputFormat fmt, const std::string& path,
                        std::ostream& stdout_stream) {
    for (const auto& r : rs)
        if (!r.has_error_estimate())
            throw Error(detail::concat("record '", r.command, "' has no tail_estimate or quadrature_error"));
    const std::string text = fmt == OutputFormat::json ? records_to_json(rs) : records_to_csv(rs);
    if (path == "-") {
        stdout_stream << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(detail::concat("cannot write result file '", path, "'"));
    out << text;
    if (!out) throw Error(detail::concat("write to '", path, "' failed"));
}

}  // namespace cuspdrift
