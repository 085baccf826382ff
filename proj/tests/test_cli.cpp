#include <doctest.h>

#include <sys/wait.h>

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

namespace {

struct Run {
    int exit_code;
    std::string out;
};

Run run(const std::string& args, bool merge_stderr = false) {
    const std::string cmd = std::string(QDARWIN_CLI_PATH) + " " + args + (merge_stderr ? " 2>&1" : " 2>/dev/null");
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    while (std::fgets(buf.data(), buf.size(), pipe)) out += buf.data();
    const int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::filesystem::path temp_file(const std::string& name, const std::string& content) {
    const auto p = std::filesystem::temp_directory_path() / ("qdarwin_test_" + name);
    std::ofstream(p, std::ios::binary) << content;
    return p;
}

std::string field(const std::string& csv, std::size_t line, std::size_t col) {
    std::stringstream ss(csv);
    std::string l;
    for (std::size_t i = 0; i <= line; ++i) std::getline(ss, l);
    std::stringstream ls(l);
    std::string f;
    for (std::size_t i = 0; i <= col; ++i) std::getline(ls, f, ',');
    return f;
}

}  // namespace

TEST_CASE("figure curve matches the frozen golden file byte for byte") {
    const auto r = run("info-curve --p1 0.25 --gamma 0.875 --env-size 60");
    CHECK(r.exit_code == 0);
    CHECK(r.out == slurp(std::filesystem::path(QDARWIN_GOLDEN_DIR) / "fig1_closed_form.csv"));
}

TEST_CASE("identical configs give identical output") {
    const auto cfg = temp_file("det.json", R"({"p1": 0.3, "components": {"angle": 0.6, "count": 6}, "mode": "numeric"})");
    const auto a = run("info-curve " + cfg.string());
    const auto b = run("info-curve " + cfg.string());
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.rfind("# qdarwin info-curve config_hash=", 0) == 0);
}

TEST_CASE("config from standard input and JSON output") {
    const auto cfg = temp_file("stdin.json", R"({"p1": 0.25, "components": {"gamma": 0.875, "count": 5}, "format": "json"})");
    const auto r = run("info-curve - < " + cfg.string());
    REQUIRE(r.exit_code == 0);
    const auto doc = nlohmann::json::parse(r.out);
    CHECK(doc["columns"]["fragment_size"].size() == 5);
    CHECK(doc["columns"]["holevo_pointer"][1].get<double>() == doctest::Approx(0.418796010344).epsilon(1e-12));
    CHECK(doc["columns"]["pe_helstrom"][1].get<double>() == doctest::Approx(0.125712754181).epsilon(1e-12));
}

TEST_CASE("output file") {
    const auto out = std::filesystem::temp_directory_path() / "qdarwin_test_out.csv";
    std::filesystem::remove(out);
    const auto r = run("info-curve --p1 0.25 --gamma 0.875 --env-size 3 --output " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
    CHECK(slurp(out).find("fragment_size,gamma_eff") != std::string::npos);
}

TEST_CASE("invalid configurations exit with 1 and a line number") {
    const auto cfg = temp_file("bad.json", "{\n  \"p1\": 0.25,\n  \"components\": {\"gamma\": 2.0, \"count\": 3}\n}\n");
    const auto r = run("info-curve " + cfg.string(), true);
    CHECK(r.exit_code == 1);
    CHECK(r.out.find(cfg.string() + ":3:") != std::string::npos);

    const auto syntax = temp_file("syntax.json", "{\n  \"p1\": 0.25\n  \"components\": {}\n}\n");
    const auto s = run("info-curve " + syntax.string(), true);
    CHECK(s.exit_code == 1);
    CHECK(s.out.find(syntax.string() + ":3:") != std::string::npos);

    CHECK(run("info-curve --p1 0.25 --gamma 0.875 --env-size 3 --frag-max 4").exit_code == 1);
    CHECK(run("info-curve --p1 0.25 --gamma 0.875 --env-size 13 --mode oracle").exit_code == 1);
    CHECK(run("no-such-command").exit_code == 1);
    CHECK(run("info-curve /nonexistent/config.json").exit_code == 1);
}

TEST_CASE("redundancy command") {
    const auto r = run("redundancy --p1 0.25 --gamma 0.875 --env-size 10000 --delta 0.01");
    REQUIRE(r.exit_code == 0);
    CHECK(std::stod(field(r.out, 2, 4)) == doctest::Approx(579.9).epsilon(0.1 / 579.9));
    const auto tiny = run("redundancy --p1 0.25 --gamma 0.875 --env-size 3 --delta 0.01");
    CHECK(tiny.exit_code == 0);
    CHECK(tiny.out.find("insufficient environment") != std::string::npos);
    CHECK(run("redundancy --p1 0.25 --gamma 0.875 --env-size 30").exit_code == 1);
}

TEST_CASE("oracle-check") {
    const auto good = run("oracle-check --p1 0.25 --angle 0.7853981633974483 --env-size 8 --frag-max 2");
    CHECK(good.exit_code == 0);
    CHECK(good.out.find(",fail") == std::string::npos);
    const auto lone = run("oracle-check --p1 0.5 --angle 0.5 --env-size 1");
    CHECK(lone.exit_code == 0);
    CHECK(lone.out.find("expected-fail") != std::string::npos);
    CHECK(run("oracle-check --p1 0.25 --angle 0.5 --env-size 13").exit_code == 1);
}

TEST_CASE("fit-exponent") {
    const auto r = run("fit-exponent --p1 0.25 --gamma 0.875 --env-size 100");
    REQUIRE(r.exit_code == 0);
    CHECK(field(r.out, 2, 0) == "holevo_pointer");
    CHECK(std::abs(std::stod(field(r.out, 2, 3)) - 0.2670628) <= 1e-3);

    std::string curve = "fragment_size,deficit\n";
    for (int f = 1; f <= 30; ++f) {
        char line[64];
        std::snprintf(line, sizeof line, "%d,%.17g\n", f, std::exp(-0.42 * f));
        curve += line;
    }
    const auto file = temp_file("synthetic.csv", curve);
    const auto cfg = temp_file("synthetic.json", R"({"p1": 0.5, "components": {"gamma": 0.5, "count": 30}, "curve_file": ")" +
                                                    file.string() + "\"}");
    const auto s = run("fit-exponent " + cfg.string());
    REQUIRE(s.exit_code == 0);
    CHECK(std::abs(std::stod(field(s.out, 2, 3)) - 0.42) <= 1e-12);

    const auto warn = run("fit-exponent --p1 0.25 --gamma 0.875 --env-size 100 " +
                              temp_file("window.json", R"({"fit_window": {"first": 1, "last": 10}})").string(),
                          true);
    CHECK(warn.exit_code == 0);
    CHECK(warn.out.find("warning:") != std::string::npos);
    CHECK(run("fit-exponent --p1 0.25 --gamma 1 --env-size 100").exit_code == 1);
}
