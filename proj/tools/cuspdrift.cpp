// cuspdrift command-line front end. Every subcommand writes result records
// (JSON or CSV) with echoed inputs, error estimates, SHA-256 of the data files
// read and wall time.
//
// Exit codes: 0 success, 1 verify found a failing criterion, 2 bad flags or
// malformed input files, 3 numerical or domain failure inside the library.

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cuspdrift/cuspdrift.hpp"

#ifndef CUSPDRIFT_DEFAULT_DATA_DIR
#define CUSPDRIFT_DEFAULT_DATA_DIR "data"
#endif

namespace fs = std::filesystem;
using namespace cuspdrift;

namespace {

struct RunConfig {
    int precision = 15;
    double tol = 1e-12;
    int c_bound = 400;
    int terms = 68;
    int level = 1;
    std::string out = "-";
    std::string format = "json";
    bool no_timing = false;

    void validate() const {
        if (precision < 1 || precision > 16)
            throw ParseError("--precision must lie in 1..16 (double arithmetic only)", 0);
        if (!(tol > 0.0 && tol < 1.0)) throw ParseError("--tol must lie in (0, 1)", 0);
        if (c_bound < 1 || c_bound > 20000) throw ParseError("--c-bound must lie in 1..20000", 0);
        if (terms < 1) throw ParseError("--terms must be positive", 0);
        if (level < 1) throw ParseError("--level must be positive", 0);
    }
    void echo(ResultRecord& r) const {
        r.in("precision", std::int64_t(precision))
            .in("tol", tol)
            .in("c_bound", std::int64_t(c_bound))
            .in("terms", std::int64_t(terms))
            .in("level", std::int64_t(level));
    }
};

cplx parse_complex(const std::string& text) {
    std::string t;
    for (char ch : text)
        if (ch != ' ') t += ch;
    auto num = [&](const std::string& s) {
        if (s.empty() || s == "+") return 1.0;
        if (s == "-") return -1.0;
        std::size_t pos = 0;
        double v = 0.0;
        try {
            v = std::stod(s, &pos);
        } catch (const std::exception&) {
            pos = std::string::npos;
        }
        if (pos != s.size()) throw ParseError("malformed complex number '" + text + "'", 0);
        return v;
    };
    if (t.empty()) throw ParseError("empty complex number", 0);
    if (t.back() != 'i') return {num(t), 0.0};
    t.pop_back();
    std::size_t split = std::string::npos;
    for (std::size_t k = t.size(); k-- > 1;)
        if ((t[k] == '+' || t[k] == '-') && t[k - 1] != 'e' && t[k - 1] != 'E') {
            split = k;
            break;
        }
    if (split == std::string::npos) return {0.0, num(t)};
    return {num(t.substr(0, split)), num(t.substr(split))};
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(parse_complex(tok).real());
    return out;
}

/// Path as given, else under $CUSPDRIFT_DATA, else under the built-in data directory.
std::string resolve(const std::string& p) {
    if (fs::exists(p)) return p;
    if (const char* env = std::getenv("CUSPDRIFT_DATA"))
        if (fs::exists(fs::path(env) / p)) return (fs::path(env) / p).string();
    if (fs::exists(fs::path(CUSPDRIFT_DEFAULT_DATA_DIR) / p)) return (fs::path(CUSPDRIFT_DEFAULT_DATA_DIR) / p).string();
    throw ParseError("file not found: '" + p + "' (also looked in $CUSPDRIFT_DATA and " CUSPDRIFT_DEFAULT_DATA_DIR ")", 0);
}

std::string data_dir() {
    if (const char* env = std::getenv("CUSPDRIFT_DATA")) return env;
    return CUSPDRIFT_DEFAULT_DATA_DIR;
}

void add_provenance(ResultRecord& r, const std::string& path) {
    r.provenance.emplace_back(fs::path(path).filename().string(), file_sha256(path));
}

HolCuspForm load_hol(const std::string& path) {
    auto f = load_coefficients(path);
    if (!std::holds_alternative<HolCuspForm>(f)) throw ParseError("'" + path + "' is not a holomorphic form", 0);
    return std::get<HolCuspForm>(f);
}

MaassForm load_maass(const std::string& path) {
    auto f = load_coefficients(path);
    if (!std::holds_alternative<MaassForm>(f)) throw ParseError("'" + path + "' is not a Maass form", 0);
    return std::get<MaassForm>(f);
}

OneFormChoice omega_choice(const std::string& w) {
    if (w == "1") return OneFormChoice::omega1();
    if (w == "2") return OneFormChoice::omega2();
    return OneFormChoice::angle(parse_complex(w).real());
}

GroupElement parse_gamma(const std::string& text) {
    const auto v = parse_list(text);
    if (v.size() != 4) throw ParseError("--gamma needs a,b,c,d", 0);
    for (double x : v)
        if (x != std::floor(x)) throw ParseError("--gamma entries must be integers", 0);
    try {
        return GroupElement(std::int64_t(v[0]), std::int64_t(v[1]), std::int64_t(v[2]), std::int64_t(v[3]));
    } catch (const DomainError& e) {
        throw ParseError(e.what(), 0);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cuspdrift: scattering, modular symbols and perturbation checks"};
    app.require_subcommand(1);
    RunConfig cfg;
    app.add_option("--precision", cfg.precision, "decimal digits requested (at most 16)");
    app.add_option("--tol", cfg.tol, "absolute tolerance for series and quadrature");
    app.add_option("--c-bound", cfg.c_bound, "largest c of the coset representatives");
    app.add_option("--terms", cfg.terms, "Dirichlet-series terms");
    app.add_option("--level", cfg.level, "level N of Gamma_0(N)");
    app.add_option("--out", cfg.out, "output file, - for stdout");
    app.add_option("--format", cfg.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    app.add_flag("--no-timing", cfg.no_timing, "write wall_time_s = 0 for reproducible output");

    std::string s_text = "2", z_text = "0.1+1.2i", form_file, maass_file, model_file, eig_file;
    std::string omega = "1", gamma_text, func = "zeta", nu_text = "0", route, kind, schedule = "default";
    std::string inner_text, sj_text, thetas_text;
    double a_param = 1.0, y_param = 1.0, eps = 0.0, T = 15.0, t_param = 1.0, radius = 0.0, Ydom = 3.0;
    int n_order = 1, track_order = 2, scan = 0;
    bool check_functional = false;

    auto sub = [&](const char* name, const char* help) {
        auto* c = app.add_subcommand(name, help);
        c->fallthrough();
        return c;
    };

    auto* c_spec = sub("specfun", "Gamma, digamma, zeta, Hurwitz zeta, K-Bessel");
    c_spec->add_option("--func", func)->check(CLI::IsMember({"gamma", "loggamma", "digamma", "zeta", "hurwitz", "besselk"}));
    c_spec->add_option("--s", s_text, "complex argument, e.g. 0.5+14.13i");
    c_spec->add_option("--a", a_param, "Hurwitz shift");
    c_spec->add_option("--nu", nu_text, "K-Bessel order");
    c_spec->add_option("--y", y_param, "K-Bessel argument");

    auto* c_eis = sub("eisenstein", "E(z, s) by Fourier expansion or coset sum");
    c_eis->add_option("--z", z_text);
    c_eis->add_option("--s", s_text);
    c_eis->add_option("--route", route, "fourier, coset or oldform")->check(CLI::IsMember({"fourier", "coset", "oldform"}));
    c_eis->add_option("--form", form_file, "coefficient file of the form defining the character");
    c_eis->add_option("--omega", omega, "1, 2 or an angle theta");
    c_eis->add_option("--eps", eps, "deformation parameter");

    auto* c_sc = sub("scattering", "phi(s) and phi'/phi(s) at the cusp infinity");
    c_sc->add_option("--s", s_text);
    c_sc->add_flag("--check-functional", check_functional, "report |phi(s)phi(1-s)-1| and conjugation symmetry");

    auto* c_ms = sub("modsym", "modular symbol <gamma, omega>");
    c_ms->add_option("--form", form_file)->required();
    c_ms->add_option("--gamma", gamma_text, "a,b,c,d")->required();
    c_ms->add_option("--omega", omega);

    auto* c_gf = sub("goldfeld", "twisted series E^n and D^n");
    c_gf->add_option("--form", form_file)->required();
    c_gf->add_option("--z", z_text);
    c_gf->add_option("--s", s_text);
    c_gf->add_option("--n", n_order);
    c_gf->add_option("--omega", omega);
    c_gf->add_option("--kind", kind, "E, D or binomial")->check(CLI::IsMember({"E", "D", "binomial"}));

    auto* c_fe = sub("fermi", "Fermi shift from inner products, or the inner product by quadrature");
    c_fe->add_option("--inner", inner_text, "comma-separated complex inner products");
    c_fe->add_option("--t", t_param, "t_j");
    c_fe->add_option("--maass", maass_file);
    c_fe->add_option("--form", form_file);
    c_fe->add_option("--omega", omega);
    c_fe->add_option("--Y", Ydom, "truncation height of the domain");

    auto* c_se = sub("series", "Rankin-Selberg and L(u x F^2) Dirichlet series");
    c_se->add_option("--maass", maass_file)->required();
    c_se->add_option("--form", form_file)->required();
    c_se->add_option("--s", s_text);
    c_se->add_option("--kind", kind, "rs or f2")->check(CLI::IsMember({"rs", "f2"}));
    c_se->add_option("--scan", scan, "number of directions theta for the first-order scan");

    auto* c_tr = sub("track", "eps-derivatives of the weighted mean singular point");
    c_tr->add_option("--model", model_file)->required();
    c_tr->add_option("--order", track_order);
    c_tr->add_option("--eps-schedule", schedule, "default or comma-separated steps");
    c_tr->add_option("--sj", sj_text, "tracked point (default: first trajectory start on Re s = 1/2)");
    c_tr->add_option("--radius", radius, "contour radius (default: half the distance to foreign singularities)");

    auto* c_wy = sub("weyl", "Weyl-law trend N_d + M against lambda/12");
    c_wy->add_option("--eigenvalues", eig_file)->required();
    c_wy->add_option("--T", T);

    auto* c_ve = sub("verify", "run acceptance criteria 1-14");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    std::vector<ResultRecord> records;
    int exit_code = 0;
    try {
        cfg.validate();
        const auto t0 = std::chrono::steady_clock::now();
        auto elapsed = [&] {
            return cfg.no_timing ? 0.0 : std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        };
        ResultRecord rec;
        cfg.echo(rec);
        auto form_path = [&] { return resolve(form_file); };

        if (c_spec->parsed()) {
            rec.command = "specfun";
            rec.in("func", func);
            const cplx s = parse_complex(s_text);
            if (func == "besselk") {
                const cplx nu = parse_complex(nu_text);
                rec.in("nu", nu).in("y", y_param);
                const auto k = specfun::bessel_k_ex(nu, y_param, cfg.tol * 1e-3);
                rec.out("value", k.value).out("tail_estimate", k.error).out("underflow", k.underflow);
            } else if (func == "zeta" || func == "hurwitz") {
                const double a = func == "zeta" ? 1.0 : a_param;
                rec.in("s", s).in("a", a);
                const auto z = specfun::hurwitz_zeta_ex(s, a);
                rec.out("value", z.value).out("derivative", z.derivative).out("tail_estimate", z.error);
            } else {
                rec.in("s", s);
                const cplx v = func == "gamma"    ? specfun::gamma_complex(s)
                               : func == "loggamma" ? specfun::log_gamma(s)
                                                    : specfun::digamma(s);
                // Lanczos (g = 7, 9 terms) and the asymptotic digamma series are accurate to a few ulps.
                rec.out("value", v).out("tail_estimate", 1e-14 * std::max(1.0, std::abs(v)));
            }
        } else if (c_eis->parsed()) {
            rec.command = "eisenstein";
            const cplx z = parse_complex(z_text), s = parse_complex(s_text);
            if (route.empty()) route = (cfg.level == 1 && form_file.empty()) ? "fourier" : "coset";
            rec.in("z", z).in("s", s).in("route", route);
            EisensteinConfig ec;
            ec.c_bound = cfg.c_bound;
            ec.tol = cfg.tol;
            EisensteinValue v;
            if (!form_file.empty() && route != "coset") throw ParseError("a character needs --route coset", 0);
            if (route == "fourier") {
                if (cfg.level != 1) throw ParseError("--route fourier is level 1; use oldform or coset", 0);
                v = eisenstein_level1(z, s, ec);
            } else if (route == "oldform") {
                v = cfg.level == 1 ? eisenstein_level1(z, s, ec) : eisenstein_level_p(cfg.level, z, s, ec);
            } else if (form_file.empty()) {
                v = eisenstein_coset_sum(z, s, GroupDescriptor(cfg.level), ec);
            } else {
                const auto path = form_path();
                const auto f = load_hol(path);
                if (f.level != cfg.level) throw ParseError("form level differs from --level", 0);
                add_provenance(rec, path);
                rec.in("omega", omega).in("eps", eps);
                const auto tab = coset_symbols(f, omega_choice(omega), cfg.c_bound);
                v = eisenstein_coset_sum(z, s, tab, eps, ec);
            }
            rec.out("value", v.value).out("tail_estimate", v.tail_estimate).out("terms", std::int64_t(v.terms));
        } else if (c_sc->parsed()) {
            rec.command = "scattering";
            const cplx s = parse_complex(s_text);
            rec.in("s", s);
            if (cfg.level != 1 && !cuspdrift::detail::is_prime(cfg.level))
                throw CapabilityError("scattering supports level 1 or a prime level");
            // Gamma_0(p) at infinity: phi_p(s) = phi(s) (p - 1) / (p^{2s} - 1).
            auto phi_at = [&](cplx w) {
                cplx v = scattering_phi(w);
                if (cfg.level > 1) {
                    const double p = cfg.level;
                    v *= (p - 1.0) / (std::exp(2.0 * w * std::log(p)) - 1.0);
                }
                return v;
            };
            const cplx phi = phi_at(s);
            const auto z1 = specfun::hurwitz_zeta_ex(2.0 * s - 1.0, 1.0), z2 = specfun::hurwitz_zeta_ex(2.0 * s, 1.0);
            const double tail = std::abs(phi) * (z1.error / std::abs(z1.value) + z2.error / std::abs(z2.value));
            rec.out("phi", phi);
            if (std::abs(s - 0.5) > 1e-12) {
                cplx ld = scattering_logderiv(s);
                if (cfg.level > 1) {
                    const double p = cfg.level;
                    const cplx p2s = std::exp(2.0 * s * std::log(p));
                    ld -= 2.0 * std::log(p) * p2s / (p2s - 1.0);
                }
                rec.out("logderiv", ld);
            }
            rec.out("tail_estimate", tail);
            if (check_functional) {
                if (cfg.level != 1)
                    throw CapabilityError("--check-functional needs level 1: at level p the identity holds for the scattering matrix, not its entry phi_inf,inf");
                rec.out("functional_residual", std::abs(phi * phi_at(1.0 - s) - 1.0));
                rec.out("conjugation_residual", std::abs(phi - std::conj(phi_at(std::conj(s)))));
            }
        } else if (c_ms->parsed()) {
            rec.command = "modsym";
            const auto path = form_path();
            const auto f = load_hol(path);
            add_provenance(rec, path);
            if (f.level != cfg.level) throw ParseError("form level differs from --level", 0);
            const GroupElement g = parse_gamma(gamma_text);
            rec.in("form", fs::path(path).filename().string()).in("gamma", g.str()).in("omega", omega);
            const auto ch = omega_choice(omega);
            const Period per = period(f, g);
            const double split = symbol_from_period(per.value, ch).im;
            double manin = split;
            if (cuspdrift::detail::is_prime(f.level)) manin = symbol_from_period(PeriodTable(f).period(g), ch).im;
            rec.out("value", cplx(0.0, split))
                .out("manin_value", cplx(0.0, manin))
                .out("quadrature_error", std::max(2.0 * kPi * per.error, std::abs(manin - split)));
        } else if (c_gf->parsed()) {
            rec.command = "goldfeld";
            if (kind.empty()) kind = "D";
            const auto path = form_path();
            const auto f = load_hol(path);
            if (f.level != cfg.level) throw ParseError("form level differs from --level", 0);
            add_provenance(rec, path);
            const cplx z = parse_complex(z_text), s = parse_complex(s_text);
            rec.in("z", z).in("s", s).in("n", std::int64_t(n_order)).in("kind", kind).in("omega", omega);
            const auto ch = omega_choice(omega);
            const auto tab = coset_symbols(f, ch, cfg.c_bound);
            TwistedSeriesConfig tc;
            tc.tol = cfg.tol;
            const EisensteinValue v = kind == "E"   ? goldfeld_E(z, s, n_order, tab, tc)
                                      : kind == "D" ? goldfeld_D(z, s, n_order, f, ch, tab, tc)
                                                    : goldfeld_binomial(z, s, n_order, f, ch, tab, tc);
            rec.out("value", v.value).out("tail_estimate", v.tail_estimate).out("terms", std::int64_t(v.terms));
        } else if (c_fe->parsed()) {
            rec.command = "fermi";
            if (!inner_text.empty()) {
                std::vector<cplx> vals;
                std::stringstream ss(inner_text);
                std::string tok;
                while (std::getline(ss, tok, ',')) vals.push_back(parse_complex(tok));
                rec.in("inner", inner_text).in("t", t_param);
                rec.out("value", fermi_shift(vals, t_param, int(vals.size()))).out("tail_estimate", 0.0);
            } else {
                if (maass_file.empty() || form_file.empty())
                    throw ParseError("fermi needs --inner, or both --maass and --form", 0);
                const auto mp = resolve(maass_file), fp = form_path();
                const auto u = load_maass(mp);
                const auto f = load_hol(fp);
                add_provenance(rec, mp);
                add_provenance(rec, fp);
                QuadratureDomain dom;
                dom.Y = Ydom;
                rec.in("omega", omega).in("Y", Ydom);
                const auto q = fermi_inner_quadrature(u, f, omega_choice(omega), dom);
                rec.out("value", q.value).out("quadrature_error", q.truncation_error);
            }
        } else if (c_se->parsed()) {
            rec.command = "series";
            if (kind.empty()) kind = "rs";
            const auto mp = resolve(maass_file), fp = form_path();
            const auto u = load_maass(mp);
            const auto f = load_hol(fp);
            add_provenance(rec, mp);
            add_provenance(rec, fp);
            const cplx s = parse_complex(s_text);
            rec.in("s", s).in("kind", kind);
            if (scan > 0) {
                std::vector<double> th;
                for (int k = 0; k < scan; ++k) th.push_back(2.0 * kPi * k / scan);
                const auto ds = direction_scan(series_functional(u, f, s, cfg.terms), th);
                const double tail = rankin_selberg(u, f, s, cfg.terms).tail_estimate;
                for (const auto& smp : ds.samples) {
                    ResultRecord r = rec;
                    r.in("theta", smp.theta);
                    r.out("value", smp.value).out("tail_estimate", tail).out("sign_changes", std::int64_t(ds.sign_changes));
                    records.push_back(std::move(r));
                }
            } else {
                const auto v = kind == "rs" ? rankin_selberg(u, f, s, cfg.terms) : L_uF2(u, f, s, cfg.terms);
                rec.out("value", v.value).out("tail_estimate", v.tail_estimate).out("terms_used", std::int64_t(v.terms_used));
            }
        } else if (c_tr->parsed()) {
            rec.command = "track";
            const auto mp = resolve(model_file);
            const auto model = load_model(mp);
            add_provenance(rec, mp);
            const auto fam = model.family();
            std::optional<cplx> sj;
            if (!sj_text.empty()) sj = parse_complex(sj_text);
            for (const auto& t : model.poles)
                if (!sj && std::abs(t.at(0.0).real() - 0.5) < 1e-12 && t.at(0.0).imag() > 0.0) sj = t.at(0.0);
            for (const auto& b : model.branches.branches)
                if (!sj) sj = b.center;
            if (!sj) throw ParseError("model has no singular point on Re s = 1/2; pass --sj", 0);
            const double u = radius > 0.0 ? radius : default_radius(fam, *sj);
            std::vector<double> steps{0.1, 0.05, 0.025, 0.0125};
            if (schedule != "default") steps = parse_list(schedule);
            rec.in("sj", *sj).in("radius", u).in("order", std::int64_t(track_order)).in("eps_schedule", schedule);
            const auto d = eps_derivatives(mean_shift_routine(fam, *sj, u), track_order, steps, 1e-4);
            rec.out("value", d.back().value).out("quadrature_error", d.back().error);
            for (const auto& e : d) {
                rec.out("d" + std::to_string(e.order), e.value);
                rec.out("d" + std::to_string(e.order) + "_error", e.error);
            }
        } else if (c_wy->parsed()) {
            rec.command = "weyl";
            const auto ep = resolve(eig_file);
            const auto ev = load_eigenvalues(ep);
            add_provenance(rec, ep);
            rec.in("T", T);
            const auto w = weyl_trend(ev.r, T);
            rec.out("lambda", w.lambda).out("N_d", std::int64_t(w.N_d)).out("M", w.M).out("main_term", w.main_term);
            rec.out("ratio", w.ratio).out("quadrature_error", weyl_M(T).quadrature_error);
        } else if (c_ve->parsed()) {
            acceptance::Settings st;
            st.data_dir = data_dir();
            const auto results = acceptance::run_all(st, [](const acceptance::CriterionResult& r) {
                std::cerr << acceptance::format_line(r) << std::endl;
            });
            for (const auto& r : results) {
                ResultRecord x;
                x.command = "verify";
                x.in("criterion", std::int64_t(r.id)).in("name", r.name);
                x.out("passed", r.passed).out("detail", r.detail).out("seconds", cfg.no_timing ? 0.0 : r.seconds);
                if (r.error_estimate) x.out("quadrature_error", *r.error_estimate);
                if (!r.passed || !r.error_estimate) exit_code = 1;
                records.push_back(std::move(x));
            }
            for (const char* f : {"maass_level1_r9.5337.coeffs", "level1_eigenvalues.txt"})
                for (auto& x : records) add_provenance(x, (fs::path(st.data_dir) / f).string());
        }
        const double wall = elapsed();
        if (records.empty()) records.push_back(std::move(rec));
        for (auto& r : records) r.wall_time_s = wall;
        emit_result(records, cfg.format == "csv" ? OutputFormat::csv : OutputFormat::json, cfg.out, std::cout);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 3;
    }
    return exit_code;
}
