#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "cuspdrift/cuspdrift.hpp"

using namespace cuspdrift;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
};

Run run(const std::string& args) {
    const std::string cmd = std::string(CUSPDRIFT_CLI_PATH) + " " + args + " 2>/dev/null";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, n);
    const int st = pclose(p);
    r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
    return r;
}

cplx as_cplx(const FieldValue* v) {
    if (!v) return cplx(std::nan(""), 0.0);
    if (auto c = std::get_if<cplx>(v)) return *c;
    if (auto d = std::get_if<double>(v)) return *d;
    if (auto i = std::get_if<std::int64_t>(v)) return double(*i);
    return cplx(std::nan(""), 0.0);
}

ResultRecord sample_record() {
    ResultRecord r;
    r.command = "demo";
    r.in("s", cplx(0.5, 14.134725141734693)).in("terms", std::int64_t(68)).in("label", std::string("a,b \"q\""));
    r.out("value", cplx(1.0 / 3.0, -2e-300)).out("tail_estimate", 1.2345678901234567e-17).out("ok", true);
    r.provenance.emplace_back("x.coeffs", std::string(64, 'a'));
    r.wall_time_s = 0.25;
    return r;
}

}  // namespace

TEST(Records, JsonRoundTrip) {
    const auto r = sample_record();
    const auto back = records_from_json(records_to_json({r}));
    ASSERT_EQ(back.size(), 1u);
    EXPECT_EQ(back[0], r);
    const auto two = records_from_json(records_to_json({r, r}));
    EXPECT_EQ(two.size(), 2u);
    EXPECT_THROW(records_from_json("{"), ParseError);
    EXPECT_THROW(records_from_json(R"({"command": "x"})"), ParseError);
}

TEST(Records, CsvCarriesTheSameDigits) {
    const auto r = sample_record();
    const std::string csv = records_to_csv({r});
    std::istringstream in(csv);
    std::string header, row;
    std::getline(in, header);
    std::getline(in, row);
    EXPECT_EQ(header, "command,in.s,in.terms,in.label,out.value,out.tail_estimate,out.ok,sha256.x.coeffs,wall_time_s");
    EXPECT_NE(row.find("0.5;14.134725141734693"), std::string::npos);
    EXPECT_NE(row.find("0.3333333333333333;-2e-300"), std::string::npos);
    EXPECT_NE(row.find("1.2345678901234567e-17"), std::string::npos);
    EXPECT_NE(row.find("\"a,b \"\"q\"\"\""), std::string::npos);
    // The JSON text holds the same shortest representations.
    const std::string json = records_to_json({r});
    EXPECT_NE(json.find("14.134725141734693"), std::string::npos);
    EXPECT_NE(json.find("1.2345678901234567e-17"), std::string::npos);
    EXPECT_EQ(records_to_csv({}), "command,wall_time_s\n");
}

TEST(Records, EmitRequiresErrorEstimateAndWritablePath) {
    ResultRecord bare;
    bare.command = "bare";
    bare.out("value", 1.0);
    std::ostringstream os;
    EXPECT_THROW(emit_result({bare}, OutputFormat::json, "-", os), Error);
    EXPECT_THROW(emit_result({sample_record()}, OutputFormat::json, "/nonexistent-dir/x.json", os), Error);
    emit_result({sample_record()}, OutputFormat::csv, "-", os);
    EXPECT_EQ(os.str(), records_to_csv({sample_record()}));
}

TEST(Records, Sha256OfKnownContent) {
    const fs::path p = fs::temp_directory_path() / "cuspdrift_sha_test.txt";
    std::ofstream(p, std::ios::binary) << "abc";
    EXPECT_EQ(file_sha256(p.string()), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
    fs::remove(p);
    EXPECT_THROW(file_sha256("/nonexistent/file"), ParseError);
}

TEST(Cli, ScatteringWithFunctionalCheck) {
    const auto r = run("scattering --s 0.3+7i --check-functional --no-timing");
    ASSERT_EQ(r.code, 0);
    const auto rec = records_from_json(r.out).at(0);
    EXPECT_EQ(rec.command, "scattering");
    EXPECT_LT(std::abs(as_cplx(rec.find_output("phi")) - scattering_phi(cplx(0.3, 7.0))), 1e-15);
    EXPECT_LT(as_cplx(rec.find_output("functional_residual")).real(), 1e-12);
    EXPECT_TRUE(rec.has_error_estimate());
    EXPECT_EQ(rec.wall_time_s, 0.0);
}

TEST(Cli, ModularSymbolAgreesWithLibrary) {
    const auto r = run("--level 11 modsym --form 11a.coeffs --gamma 4,1,11,3 --omega 2 --no-timing");
    ASSERT_EQ(r.code, 0) << r.out;
    const auto rec = records_from_json(r.out).at(0);
    const auto f = std::get<HolCuspForm>(load_coefficients(CUSPDRIFT_TEST_DATA "/11a.coeffs"));
    const double expect = modular_symbol(f, OneFormChoice::omega2(), GroupElement(4, 1, 11, 3)).im;
    EXPECT_LT(std::abs(as_cplx(rec.find_output("value")) - cplx(0.0, expect)), 1e-12);
    EXPECT_LT(std::abs(as_cplx(rec.find_output("manin_value")) - cplx(0.0, expect)), 1e-10);
    ASSERT_EQ(rec.provenance.size(), 1u);
    EXPECT_EQ(rec.provenance[0].second, file_sha256(CUSPDRIFT_TEST_DATA "/11a.coeffs"));
}

TEST(Cli, TrackDissolvingModel) {
    const auto r = run("track --model dissolve.model --order 3 --no-timing --format json");
    ASSERT_EQ(r.code, 0);
    const auto rec = records_from_json(r.out).at(0);
    EXPECT_NEAR(as_cplx(rec.find_output("d2")).real(), -0.4, 1e-6);
    EXPECT_LE(std::abs(as_cplx(rec.find_output("d1"))), as_cplx(rec.find_output("d1_error")).real());
}

TEST(Cli, SeriesScanEmitsOneRowPerDirection) {
    const auto r = run("series --maass maass_level1_r9.5337.coeffs --form 11a.coeffs --s 2 --kind rs --scan 4 "
                       "--format csv --no-timing");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);
}

TEST(Cli, WeylAndSpecfun) {
    auto r = run("weyl --eigenvalues level1_eigenvalues.txt --T 15 --no-timing");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(as_cplx(records_from_json(r.out).at(0).find_output("N_d")).real(), 5.0);
    r = run("specfun --func zeta --s 2 --no-timing");
    ASSERT_EQ(r.code, 0);
    EXPECT_NEAR(as_cplx(records_from_json(r.out).at(0).find_output("value")).real(), kPi * kPi / 6.0, 1e-14);
}

TEST(Cli, ExitCodes) {
    EXPECT_EQ(run("scattering --bogus").code, 2);
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("scattering --s 2+").code, 2);
    EXPECT_EQ(run("--precision 30 scattering").code, 2);
    EXPECT_EQ(run("modsym --form /nonexistent.coeffs --gamma 1,0,0,1").code, 2);
    const fs::path bad = fs::temp_directory_path() / "cuspdrift_bad.model";
    std::ofstream(bad) << "pole 1 2\n";
    EXPECT_EQ(run("track --model " + bad.string()).code, 2);
    fs::remove(bad);
    EXPECT_EQ(run("scattering --s 1").code, 3);
    EXPECT_EQ(run("--level 11 scattering --s 0.3 --check-functional").code, 3);
    EXPECT_EQ(run("--level 11 modsym --form 11a.coeffs --gamma 0,-1,1,0").code, 3);
    EXPECT_EQ(run("--out /nonexistent-dir/x.json scattering").code, 3);
    EXPECT_EQ(run("goldfeld --form 11a.coeffs").code, 2);
}

TEST(Cli, NoTimingOutputIsBitIdentical) {
    const std::string args = "--level 11 --c-bound 110 --no-timing goldfeld --form 11a.coeffs --kind binomial --n 2";
    const auto a = run(args), b = run(args);
    ASSERT_EQ(a.code, 0);
    EXPECT_EQ(a.out, b.out);
    const fs::path p = fs::temp_directory_path() / "cuspdrift_out.csv";
    ASSERT_EQ(run("--out " + p.string() + " --format csv " + args).code, 0);
    std::ifstream in(p);
    std::string header;
    std::getline(in, header);
    EXPECT_EQ(header.rfind("command,", 0), 0u);
    fs::remove(p);
}
