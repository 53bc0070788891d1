#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "kohn/audit.hpp"
#include "kohn/cli.hpp"
#include "kohn/trace_io.hpp"

using namespace kohn;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("kohn_cli_test_" + std::to_string(::getpid()) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    fs::path file(const std::string& name, const std::string& content) const {
        fs::path f = path / name;
        std::ofstream out(f);
        out << content;
        return f;
    }
};

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult call(std::vector<std::string> args) {
    std::ostringstream out, err;
    int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

const char* kFamilyK5 =
    R"({"variables": ["z", "w"], "generators": ["z^2", "w^3 + w*z^5"]})";

}  // namespace

TEST_CASE("type command") {
    TempDir tmp;
    auto f1 = tmp.file("p1.json",
                       R"({"variables": ["z", "w"], "generators": ["z^3", "w^4"]})");
    auto r1 = call({"type", f1.string()});
    CHECK(r1.code == cli::kOk);
    CHECK(r1.out == "p* = 6; p in [6/5, 6]\n");

    auto f2 = tmp.file("p2.json", R"({"variables": ["z", "w"], "generators": ["z", "w"]})");
    auto r2 = call({"type", f2.string()});
    CHECK(r2.code == cli::kOk);
    CHECK(r2.out == "p* = 1; p in [1/5, 1]\n");

    // not finite type: the second axis is never covered
    auto f3 = tmp.file("p3.json", R"({"variables": ["z", "w"], "generators": ["z^2"]})");
    auto r3 = call({"type", f3.string(), "--type-cap", "12"});
    CHECK(r3.code == cli::kTypeCapError);

    auto r4 = call({"type", f1.string(), "--format", "json"});
    CHECK(r4.code == cli::kOk);
    auto j = nlohmann::json::parse(r4.out);
    CHECK(j.at("p_star") == 6);
    CHECK(j.at("lower") == "6/5");
}

TEST_CASE("parse errors exit with code 2") {
    TempDir tmp;
    auto bad1 = tmp.file("bad1.json", R"({"variables": ["z", "w"], "generators": ["z^2 +"]})");
    CHECK(call({"type", bad1.string()}).code == cli::kParseError);
    auto bad2 = tmp.file("bad2.json", R"({"variables": ["z", "w"], "generators": ["z + 1"]})");
    CHECK(call({"type", bad2.string()}).code == cli::kParseError);
    auto bad3 = tmp.file("bad3.json", "not json at all");
    CHECK(call({"type", bad3.string()}).code == cli::kParseError);
    CHECK(call({"type", (tmp.path / "missing.json").string()}).code == cli::kParseError);
}

TEST_CASE("usage errors exit with code 5") {
    CHECK(call({"frobnicate"}).code == cli::kUsageError);
    CHECK(call({}).code == cli::kUsageError);
    CHECK(call({"type"}).code == cli::kUsageError);  // missing problem file
}

TEST_CASE("run command writes an auditable trace") {
    TempDir tmp;
    auto f = tmp.file("family.json", kFamilyK5);
    auto trace_path = tmp.path / "out.trace.jsonl";
    auto r = call({"run", f.string(), "--trace", trace_path.string()});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("terminated") != std::string::npos);
    CHECK(r.out.find("1/192") != std::string::npos);
    REQUIRE(fs::exists(trace_path));

    Trace t = read_trace(trace_path);
    CHECK(t.status == RunStatus::Terminated);
    AuditReport audit = audit_trace(t);
    CAPTURE(audit.first());
    CHECK(audit.clean());

    // deterministic for a fixed seed: same bytes on a rerun
    auto trace2 = tmp.path / "out2.trace.jsonl";
    auto r2 = call({"run", f.string(), "--trace", trace2.string(), "--seed", "7"});
    auto r3 = call({"run", f.string(), "--trace", (tmp.path / "out3.trace.jsonl").string(),
                    "--seed", "7"});
    CHECK(r2.code == cli::kOk);
    CHECK(r3.code == cli::kOk);
    std::ifstream a(trace2), b(tmp.path / "out3.trace.jsonl");
    std::stringstream sa, sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
}

TEST_CASE("run command: budget exhaustion exits 4 with a partial trace") {
    TempDir tmp;
    auto f = tmp.file("tight.json",
                      R"({"variables": ["z", "w"], "generators": ["z^2", "w^3 + w*z^5"],
                          "config": {"max_steps": 4}})");
    auto trace_path = tmp.path / "tight.trace.jsonl";
    auto r = call({"run", f.string(), "--trace", trace_path.string()});
    CHECK(r.code == cli::kBudgetError);
    REQUIRE(fs::exists(trace_path));
    Trace t = read_trace(trace_path);
    CHECK(t.status == RunStatus::Failed);
    CHECK_FALSE(t.steps.empty());
}

TEST_CASE("compare-classic") {
    TempDir tmp;
    auto f5 = tmp.file("k5.json", kFamilyK5);
    auto r5 = call({"compare-classic", f5.string()});
    CHECK(r5.code == cli::kOk);
    CHECK(r5.out.find("minimal k") != std::string::npos);
    CHECK(r5.out.find("independent of the tail exponent") != std::string::npos);

    auto f9 = tmp.file("k9.json",
                       R"({"variables": ["z", "w"], "generators": ["z^2", "w^3 + w*z^9"]})");
    auto r9 = call({"compare-classic", f9.string(), "--format", "json"});
    CHECK(r9.code == cli::kOk);
    auto j9 = nlohmann::json::parse(r9.out);
    auto j5 = nlohmann::json::parse(call({"compare-classic", f5.string(), "--format", "json"}).out);
    // the classic root order moves with the tail exponent, the modified order does not
    CHECK(j5.at("classic_min_power").get<unsigned>() + 4 == j9.at("classic_min_power").get<unsigned>());
    CHECK(j5.at("modified_final_epsilon") == j9.at("modified_final_epsilon"));

    auto triv = tmp.file("triv.json", R"({"variables": ["z", "w"], "generators": ["z", "w"]})");
    auto rt = call({"compare-classic", triv.string()});
    CHECK(rt.code == cli::kOk);
    CHECK(rt.out.find("degenerate") != std::string::npos);

    auto f3 = tmp.file("three.json",
                       R"({"variables": ["z", "w", "u"], "generators": ["z", "w", "u"]})");
    CHECK(call({"compare-classic", f3.string()}).code == cli::kUsageError);
}

TEST_CASE("check-jacobian-bound") {
    TempDir tmp;
    auto f = tmp.file("map.json", R"({"variables": ["z", "w"], "generators": ["z^2", "w^3"]})");
    auto r = call({"check-jacobian-bound", f.string()});
    CHECK(r.code == cli::kOk);
    CHECK(r.out.find("lambda=6 ord=3 pass") != std::string::npos);

    auto rr = call({"check-jacobian-bound", "--trials", "20", "--seed", "11"});
    CHECK(rr.code == cli::kOk);
    CHECK(rr.out.find("fail") == std::string::npos);

    CHECK(call({"check-jacobian-bound"}).code == cli::kUsageError);
}

TEST_CASE("oracle subcommands") {
    TempDir tmp;
    auto f = tmp.file("ideal.json",
                      R"({"variables": ["z", "w"], "generators": ["z^3", "w^4"]})");
    auto m1 = call({"oracle", "member", f.string(), "--poly", "z^2*w^3"});
    CHECK(m1.code == cli::kOk);
    CHECK(m1.out == "false\n");
    auto m2 = call({"oracle", "member", f.string(), "--poly", "z^4*w"});
    CHECK(m2.code == cli::kOk);
    CHECK(m2.out == "true\n");
    auto c = call({"oracle", "colength", f.string()});
    CHECK(c.code == cli::kOk);
    CHECK(c.out == "12\n");
    auto t = call({"oracle", "type", f.string()});
    CHECK(t.code == cli::kOk);
    CHECK(t.out == "6\n");
}

TEST_CASE("binary smoke test") {
    TempDir tmp;
    auto f = tmp.file("p.json", kFamilyK5);
    std::string cmd = std::string(KOHN_CLI_BIN) + " type " + f.string() + " > " +
                      (tmp.path / "out.txt").string() + " 2>&1";
    int rc = std::system(cmd.c_str());
    CHECK(rc == 0);
    std::ifstream in(tmp.path / "out.txt");
    std::stringstream ss;
    ss << in.rdbuf();
    CHECK(ss.str() == "p* = 4; p in [4/5, 4]\n");
}
