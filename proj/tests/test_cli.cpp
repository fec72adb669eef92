#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "helmspec/cli.hpp"
#include "helmspec/errors.hpp"

using namespace helmspec;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome run(std::vector<std::string> args) {
    args.insert(args.begin(), "helmspec");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) v.push_back(l);
    return v;
}

// Data rows only: no '#' comments and no column header.
std::vector<std::string> rows(const std::string& text) {
    std::vector<std::string> v;
    bool header_seen = false;
    for (const auto& l : lines(text)) {
        if (l.empty() || l[0] == '#') continue;
        if (!header_seen) {
            header_seen = true;
            continue;
        }
        v.push_back(l);
    }
    return v;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), {}};
}

std::filesystem::path scratch_dir() {
    auto dir = std::filesystem::temp_directory_path() / "helmspec_cli_test";
    std::filesystem::create_directories(dir);
    return dir;
}

}  // namespace

TEST_CASE("solve on the homogeneous string") {
    const auto r = run({"solve", "--bc", "dd", "--density", "constant:1", "--method", "power"});
    REQUIRE(r.code == 0);
    const auto data = rows(r.out);
    REQUIRE_FALSE(data.empty());
    const auto last = data.back();
    const auto c1 = last.find(','), c2 = last.find(',', c1 + 1);
    CHECK(std::stod(last.substr(c1 + 1, c2 - c1 - 1)) == doctest::Approx(std::numbers::pi * std::numbers::pi).epsilon(1e-12));
    CHECK(lines(r.out).front() == "# helmspec");
}

TEST_CASE("exit codes") {
    CHECK(run({"solve", "--pmax", "0"}).code == 1);
    CHECK(run({"solve", "--bc", "xy"}).code == 1);
    CHECK(run({"solve", "--density", "parabolic:alpha=5"}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    const auto partial = run({"solve", "--density", "parabolic:2", "--pmax", "2"});
    CHECK(partial.code == 2);
    CHECK(rows(partial.out).size() == 2);
}

TEST_CASE("config file, flag override and header round trip") {
    const auto dir = scratch_dir();
    const auto cfg = dir / "run.cfg";
    {
        std::ofstream f(cfg);
        f << "command=solve\nbc=nd\ndensity=parabolic:alpha=1\nmethod=lanczos\npmax=40\n";
    }
    const auto first = dir / "first.csv";
    REQUIRE(run({"--config", cfg.string(), "--pmax", "30", "--out", first.string()}).code == 0);
    const std::string a = slurp(first);
    CHECK(a.find("# pmax=30\n") != std::string::npos);
    CHECK(a.find("# bc=nd\n") != std::string::npos);
    CHECK(a.find("# method=lanczos\n") != std::string::npos);

    const auto second = dir / "second.csv";
    REQUIRE(run({"--config", first.string(), "--out", second.string()}).code == 0);
    CHECK(slurp(second) == a);
    // and once more through stdout
    CHECK(run({"--config", first.string()}).out == a);
}

TEST_CASE("parse_config_text skips comments and blank lines") {
    const auto m = cli::parse_config_text("# helmspec\n# bc=pp\n\nnot a pair\nmethod = rr\n");
    CHECK(m.at("bc") == "pp");
    CHECK(m.at("method") == "rr");
    CHECK(m.size() == 2);
    CHECK_THROWS_AS(cli::resolve_config({{"colour", "blue"}}), Error);
}

TEST_CASE("json-lines output") {
    const auto r = run({"solve", "--format", "json-lines", "--pmax", "5"});
    REQUIRE(r.code == 0);
    int records = 0;
    for (const auto& l : lines(r.out))
        if (!l.empty() && l[0] == '{') {
            ++records;
            CHECK(l.find("\"eigenvalue\":") != std::string::npos);
        }
    CHECK(records >= 2);
}

TEST_CASE("table1 reproduces the alpha = 1 column") {
    const auto r = run({"table1", "--alpha", "1"});
    REQUIRE(r.code == 0);
    const double expected[] = {9.21037410544234, 9.19238760347104, 9.19138111461443, 9.19132401578685,
                               9.19132076814843, 9.19132058333956, 9.19132057282190, 9.19132057222331,
                               9.19132057218925, 9.19132057218731};
    int matched = 0;
    for (const auto& l : rows(r.out)) {
        const auto comma = l.find(',');
        const std::string key = l.substr(0, comma);
        const double v = std::stod(l.substr(comma + 1));
        if (key.rfind("O_", 0) == 0) {
            const int p = std::stoi(key.substr(2));
            CHECK(std::abs(v - expected[p - 1]) <= 1e-10);
            ++matched;
        }
        if (key == "s2_3") CHECK(std::abs(v - 9.19132057218719) <= 1e-12);
    }
    CHECK(matched == 10);
}

TEST_CASE("other commands run") {
    const auto rr = run({"solve", "--method", "rr", "--density", "parabolic:2", "--basis", "40"});
    REQUIRE(rr.code == 0);
    const auto r0 = rows(rr.out).front();
    CHECK(std::stod(r0.substr(r0.find(',') + 1)) == doctest::Approx(7.73333653346597).epsilon(1e-10));
    CHECK(run({"solve", "--method", "block", "--states", "2"}).code == 0);
    const auto sw = run({"sweep", "--bc", "dd", "--eta", "1", "--epsilon-grid", "0.2,0.1"});
    CHECK(sw.code == 0);
    CHECK(rows(sw.out).size() == 2);
}

TEST_CASE("selftest") {
    const auto r = run({"selftest"});
    CHECK(r.code == 0);
    const auto data = rows(r.out);
    CHECK(data.size() >= 30);
    for (const auto& l : data) {
        // second field of name,passed,detail; the name may be quoted
        std::size_t i = 0;
        if (l[0] == '"') i = l.find('"', 1) + 1;
        const auto c1 = l.find(',', i);
        REQUIRE(c1 != std::string::npos);
        CHECK(l.substr(c1 + 1, 2) == "1,");
    }
}
