#pragma once

// Plain-text inputs of the tracker and the Weyl check.
//
// Model file, one trajectory per line, '#' starts a comment:
//   rho     c0_re c0_im  c1_re c1_im ...      rho(eps) = sum_k c_k eps^k
//   branch  sj_re sj_im  b0 b1 ...             s(eps) = s_j + i sum_k b_k eps^k
//
// Eigenvalue file: '# type=eigenvalues level=1' then one r per line.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cuspdrift/coeff_io.hpp"
#include "cuspdrift/error.hpp"
#include "cuspdrift/tracker.hpp"

namespace cuspdrift {

struct ModelDefinition {
    std::vector<PoleTrajectory> poles;
    CuspidalBranchSet branches;
    std::string source;

    SyntheticScatteringFamily family() const { return build_family(poles, branches); }
};

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        std::size_t j = i;
        while (j < line.size() && line[j] != ' ' && line[j] != '\t') ++j;
        if (j > i) out.push_back(line.substr(i, j - i));
        i = j;
    }
    return out;
}

inline std::string_view strip_comment(std::string_view line) {
    const auto h = line.find('#');
    return trim(h == std::string_view::npos ? line : line.substr(0, h));
}

}  // namespace detail

inline ModelDefinition parse_model(std::istream& in, const std::string& source = "<stream>") {
    ModelDefinition m;
    m.source = source;
    std::string raw;
    std::size_t lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const auto tok = detail::split_ws(detail::strip_comment(raw));
        if (tok.empty()) continue;
        if (tok[0] == "rho") {
            if (tok.size() < 3 || (tok.size() - 1) % 2 != 0)
                throw ParseError("'rho' needs re/im pairs of coefficients", lineno);
            PoleTrajectory t;
            for (std::size_t k = 1; k + 1 < tok.size(); k += 2)
                t.coeffs.emplace_back(detail::parse_double(tok[k], lineno, "coefficient"),
                                      detail::parse_double(tok[k + 1], lineno, "coefficient"));
            m.poles.push_back(std::move(t));
        } else if (tok[0] == "branch") {
            if (tok.size() < 4) throw ParseError("'branch' needs sj_re sj_im and at least one coefficient", lineno);
            CuspidalBranch b;
            b.center = cplx(detail::parse_double(tok[1], lineno, "centre"), detail::parse_double(tok[2], lineno, "centre"));
            for (std::size_t k = 3; k < tok.size(); ++k)
                b.coeffs.push_back(detail::parse_double(tok[k], lineno, "coefficient"));
            m.branches.branches.push_back(std::move(b));
        } else {
            throw ParseError(detail::concat("unknown directive '", tok[0], "' (expected rho or branch)"), lineno);
        }
    }
    if (m.poles.empty() && m.branches.branches.empty()) throw ParseError("model file defines nothing", 0);
    return m;
}

inline ModelDefinition load_model(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(detail::concat("cannot open model file '", path, "'"), 0);
    return parse_model(in, path);
}

struct EigenvalueList {
    int level = 1;
    std::vector<double> r;
};

inline EigenvalueList parse_eigenvalues(std::istream& in) {
    EigenvalueList out;
    std::string raw;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, raw)) {
        ++lineno;
        std::string_view line = detail::trim(raw);
        if (line.empty()) continue;
        if (line.front() == '#') {
            bool typed = false;
            for (auto kv : detail::split_ws(detail::trim(line.substr(1)))) {
                const auto eq = kv.find('=');
                if (eq == std::string_view::npos) continue;
                const auto key = kv.substr(0, eq), val = kv.substr(eq + 1);
                if (key == "type") {
                    if (val != "eigenvalues")
                        throw ParseError(detail::concat("expected type=eigenvalues, got '", val, "'"), lineno);
                    typed = true;
                } else if (key == "level") {
                    out.level = int(detail::parse_long(val, lineno, "level"));
                }
            }
            header = header || typed;
            continue;
        }
        if (!header) throw ParseError("eigenvalue data before the '# type=eigenvalues' header", lineno);
        const double r = detail::parse_double(line, lineno, "spectral parameter");
        if (!(r > 0.0)) throw ParseError("spectral parameters must be positive", lineno);
        out.r.push_back(r);
    }
    if (!header) throw ParseError("missing '# type=eigenvalues' header", 0);
    if (out.level != 1) throw CapabilityError("eigenvalue lists are supported for level 1 only");
    return out;
}

inline EigenvalueList load_eigenvalues(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(detail::concat("cannot open eigenvalue file '", path, "'"), 0);
    return parse_eigenvalues(in);
}

}  // namespace cuspdrift
