#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "hjb/cli.hpp"
#include "hjb/config.hpp"
#include "hjb/errors.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace hjb;
namespace fs = std::filesystem;

namespace {

const char* kLogAk = R"(
rho = 0.05
[model]
family = "log_ak"
gamma = 0.1
[grid]
k_lo = 0.1
k_hi = 10.0
n = 64
)";

const char* kLinearRho1 = R"(
rho = 1.0
[model]
family = "linear_counterexample"
[grid]
k_lo = 0.1
k_hi = 10.0
n = 64
)";

struct TempDir {
    fs::path path;
    TempDir(const std::string& tag) : path(fs::temp_directory_path() / ("hjbgrowth_test_" + tag)) {
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name, const std::string& content) const {
        const fs::path p = path / name;
        std::ofstream(p) << content;
        return p.string();
    }
    std::string sub(const std::string& name) const { return (path / name).string(); }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

TEST_CASE("config parsing: full round with bound parameters") {
    const ModelConfig mc = parse_model_config(R"(
rho = 0.05
[model]
family = "log_ak"
gamma = 0.1
[grid]
k_lo = 0.2
k_hi = 5.0
n = 128
[policy]
c_cap = 3.5
[assumption6]
k_star = 1.0
k_plus = 1.0
c_star = 0.0
gamma = 0.1
delta = 1.0
theta = 1.0
a = 1.0
b = 0.0
cc = 0.0
)");
    CHECK(mc.model.rho == 0.05);
    CHECK(mc.model.k_lo == 0.2);
    CHECK(mc.model.k_hi == 5.0);
    CHECK(mc.model.c_cap == 3.5);
    CHECK(mc.grid_n == 128);
    REQUIRE(mc.a6.has_value());
    CHECK(mc.a6->theta == 1.0);
}

TEST_CASE("config parsing covers the remaining builtin families") {
    const ModelConfig crra = parse_model_config(
        "rho = 0.05\n[model]\nfamily = \"ak_crra\"\ngamma = 0.1\ntheta = 2.0\n"
        "[grid]\nk_lo = 0.1\nk_hi = 10\nn = 64\n");
    CHECK(crra.model.name == "ak_crra");
    CHECK(crra.model.u(1.0, 5.0) == 0.0);

    const ModelConfig lin = parse_model_config(
        "rho = 1.0\n[model]\nfamily = \"linear_counterexample\"\n"
        "[grid]\nk_lo = 0.1\nk_hi = 10\nn = 64\n");
    CHECK(lin.model.F(1.0, 1.0) == 0.0);

    CHECK_THROWS_AS(parse_model_config("rho = 0.05\n[model]\nfamily = \"nope\"\n"
                                       "[grid]\nk_lo = 0.1\nk_hi = 10\nn = 64\n"),
                    ConfigError);
}

TEST_CASE("config parsing rejects unknown keys by name") {
    try {
        parse_model_config("rho = 0.05\nghamma = 1\n[model]\nfamily = \"log_ak\"\ngamma = 0.1\n"
                           "[grid]\nk_lo = 0.1\nk_hi = 10\nn = 64\n");
        FAIL("expected ConfigError");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("ghamma") != std::string::npos);
    }
}

TEST_CASE("config parsing rejects the custom family in files") {
    CHECK_THROWS_AS(parse_model_config("rho = 0.05\n[model]\nfamily = \"custom\"\n"
                                       "[grid]\nk_lo = 0.1\nk_hi = 10\nn = 64\n"),
                    ConfigError);
}

TEST_CASE("config parsing rejects missing keys and duplicates") {
    CHECK_THROWS_AS(parse_model_config("rho = 0.05\n"), ConfigError);
    CHECK_THROWS_AS(parse_model_config("rho = 0.05\nrho = 0.06\n"), ConfigError);
    CHECK_THROWS_AS(parse_model_config("rho = abc\n[model]\nfamily = \"log_ak\"\ngamma = 0.1\n"
                                       "[grid]\nk_lo = 0.1\nk_hi = 10\nn = 64\n"),
                    ConfigError);
}

TEST_CASE("solve writes value.csv, certificate.json and manifest.json") {
    TempDir tmp("solve");
    const std::string cfg = tmp.file("logak.conf", kLogAk);
    const std::string out = tmp.sub("run1");
    const int rc = cli::run({"solve", "--config", cfg, "--out", out});
    CHECK(rc == 0);
    CHECK(fs::exists(fs::path(out) / "value.csv"));
    CHECK(fs::exists(fs::path(out) / "certificate.json"));
    CHECK(fs::exists(fs::path(out) / "manifest.json"));
    const std::string manifest = slurp(fs::path(out) / "manifest.json");
    CHECK(manifest.find("value.csv") != std::string::npos);
    CHECK(manifest.find("config_hash") != std::string::npos);
    const std::string header = slurp(fs::path(out) / "value.csv").substr(0, 30);
    CHECK(header.find("k,V,dV,c_policy,residual") == 0);
}

TEST_CASE("solve output is byte-identical across reruns") {
    TempDir tmp("determinism");
    const std::string cfg = tmp.file("logak.conf", kLogAk);
    const std::string out1 = tmp.sub("a"), out2 = tmp.sub("b");
    REQUIRE(cli::run({"solve", "--config", cfg, "--out", out1}) == 0);
    REQUIRE(cli::run({"solve", "--config", cfg, "--out", out2}) == 0);
    CHECK(slurp(fs::path(out1) / "value.csv") == slurp(fs::path(out2) / "value.csv"));
    CHECK(slurp(fs::path(out1) / "certificate.json") == slurp(fs::path(out2) / "certificate.json"));
}

TEST_CASE("path reuses a previous solve directory without re-solving") {
    TempDir tmp("roundtrip");
    const std::string cfg = tmp.file("logak.conf", kLogAk);
    const std::string out = tmp.sub("run");
    REQUIRE(cli::run({"solve", "--config", cfg, "--out", out}) == 0);
    const std::string value_before = slurp(fs::path(out) / "value.csv");
    const int rc = cli::run({"path", "--config", cfg, "--out", out, "--k0", "1.0", "--t-end", "20"});
    CHECK(rc == 0);
    CHECK(fs::exists(fs::path(out) / "path.csv"));
    CHECK(fs::exists(fs::path(out) / "path_summary.json"));
    CHECK(slurp(fs::path(out) / "value.csv") == value_before);  // untouched
    const std::string header = slurp(fs::path(out) / "path.csv").substr(0, 40);
    CHECK(header.find("t,k,c,discounted_utility_density") == 0);
}

TEST_CASE("check exits 1 on a failing model and names the witness") {
    TempDir tmp("check");
    const std::string cfg = tmp.file("linear.conf", kLinearRho1);
    CHECK(cli::run({"check", "--config", cfg, "--out", tmp.sub("chk")}) == 1);
    const std::string rep = slurp(fs::path(tmp.sub("chk")) / "assumptions.json");
    CHECK(rep.find("\"id\": 4") != std::string::npos);
    CHECK(rep.find("fail") != std::string::npos);

    const std::string good = tmp.file("logak.conf", kLogAk);
    CHECK(cli::run({"check", "--config", good}) == 0);
}

TEST_CASE("policy subcommand prints the maximizer") {
    TempDir tmp("policy");
    const std::string cfg = tmp.file("logak.conf", kLogAk);
    CHECK(cli::run({"policy", "--config", cfg, "--k", "1.0", "--p", "20.0"}) == 0);
}

TEST_CASE("usage errors exit 2 without writing files") {
    TempDir tmp("usage");
    const std::string out = tmp.sub("nothing");
    CHECK(cli::run({"solve"}) == 2);                                   // missing --config
    CHECK(cli::run({"frobnicate", "--config", "x"}) == 2);             // unknown subcommand
    const std::string bad = tmp.file("bad.conf", "rho = 0.05\nwat = 1\n");
    CHECK(cli::run({"solve", "--config", bad, "--out", out}) == 2);    // unknown key
    CHECK_FALSE(fs::exists(out));
}

TEST_CASE("demo subcommands run clean") {
    TempDir tmp("demo");
    CHECK(cli::run({"demo", "counterexample", "--rho", "1", "--out", tmp.sub("ce")}) == 0);
    CHECK(fs::exists(fs::path(tmp.sub("ce")) / "counterexample.json"));
    CHECK(cli::run({"demo", "magic", "--out", tmp.sub("magic")}) == 0);
    CHECK(fs::exists(fs::path(tmp.sub("magic")) / "magic.json"));
}

TEST_CASE("diagnose consumes a stored path") {
    TempDir tmp("diag");
    // a trajectory that settles at its rest point, so the discounted
    // transversality expression has fully decayed by the end of the horizon
    const std::string cfg = tmp.file("rck.conf", R"(
rho = 0.05
[model]
family = "rck_cobb_douglas"
alpha = 0.3
d = 0.05
theta = 1.0
[grid]
k_lo = 0.5
k_hi = 16.0
n = 256
)");
    const std::string out = tmp.sub("run");
    REQUIRE(cli::run({"solve", "--config", cfg, "--out", out}) == 0);
    REQUIRE(cli::run({"path", "--config", cfg, "--out", out, "--k0", "2.0", "--t-end", "400"}) == 0);
    const int rc = cli::run({"diagnose", "--config", cfg, "--out", out, "--path",
                             (fs::path(out) / "path.csv").string()});
    CHECK(rc == 0);
    CHECK(fs::exists(fs::path(out) / "diagnostics.json"));
}
