#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <string>
#include <sys/wait.h>

namespace {

struct CmdResult {
    int code = -1;
    std::string out;
};

// Runs the built binary through the shell, capturing stdout. `env_prefix`
// may carry variable assignments (e.g. "SILVER_BITS=128").
CmdResult run_cli(const std::string& args, const std::string& env_prefix = "") {
    std::string cmd;
    if (!env_prefix.empty()) cmd += env_prefix + " ";
    cmd += std::string("\"") + SILVER_BIN_PATH + "\" " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    CmdResult result;
    char buffer[4096];
    std::size_t got = 0;
    while ((got = fread(buffer, 1, sizeof(buffer), pipe)) > 0) {
        result.out.append(buffer, got);
    }
    const int status = pclose(pipe);
    result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return result;
}

int count_lines(const std::string& s) {
    return static_cast<int>(std::count(s.begin(), s.end(), '\n'));
}

}  // namespace

TEST_CASE("help and unknown arguments") {
    CHECK(run_cli("--help").code == 0);
    CHECK(run_cli("schedule --help").code == 0);
    CHECK(run_cli("").code == 2);                 // a subcommand is required
    CHECK(run_cli("nonsense").code == 2);
    CHECK(run_cli("schedule --k 1 --format xml").code == 2);
}

TEST_CASE("schedule output formats") {
    const CmdResult csv = run_cli("schedule --k 1");
    CHECK(csv.code == 0);
    CHECK(csv.out == "t,exact,decimal\n0,0/1 + 1/1*sqrt2,1.414213562373095\n");

    const CmdResult exact = run_cli("schedule --k 1 --format exact");
    CHECK(exact.code == 0);
    CHECK(exact.out == "0/1 + 1/1*sqrt2\n");

    const CmdResult digits = run_cli("schedule --k 1 --digits 5");
    CHECK(digits.code == 0);
    CHECK(digits.out.find("1.4142\n") != std::string::npos);

    const CmdResult json_out = run_cli("schedule --k 2 --format json");
    CHECK(json_out.code == 0);
    const nlohmann::json doc = nlohmann::json::parse(json_out.out);
    CHECK(doc["k"] == 2);
    CHECK(doc["horizon"] == 3);
    REQUIRE(doc["steps"].size() == 3);
    CHECK(doc["steps"][1]["exact"] == "2/1 + 0/1*sqrt2");

    // Level bounds are enforced.
    CHECK(run_cli("schedule --k 0").code == 2);
    CHECK(run_cli("schedule --k 25").code == 2);
}

TEST_CASE("schedule level six has the lone spike at index 31") {
    const CmdResult res = run_cli("schedule --k 6");
    CHECK(res.code == 0);
    CHECK(count_lines(res.out) == 64);  // header + 63 steps
    CHECK(res.out.find("\n31,18/1 + 12/1*sqrt2,") != std::string::npos);  // 1 + rho^4
    // The spike value appears exactly once.
    std::size_t hits = 0, pos = 0;
    while ((pos = res.out.find("18/1 + 12/1*sqrt2", pos)) != std::string::npos) {
        ++hits;
        ++pos;
    }
    CHECK(hits == 1);
}

TEST_CASE("certificate dumps") {
    const CmdResult n0 = run_cli("cert --k 0");
    CHECK(n0.code == 0);
    CHECK(n0.out == "(*,0) = 1/1 ~ 1\n");

    const CmdResult n1 = run_cli("cert --k 1");
    CHECK(n1.code == 0);
    CHECK(n1.out.find("(*,1) = C1") != std::string::npos);
    CHECK(count_lines(n1.out) == 5);

    const CmdResult csv = run_cli("cert --k 3 --format csv");
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("i,j,exact,decimal\n", 0) == 0);
    CHECK(count_lines(csv.out) == 30);

    CHECK(run_cli("cert --k 11").code == 2);
}

TEST_CASE("verification command, text and json reports") {
    const CmdResult text = run_cli("verify --k-max 2");
    CHECK(text.code == 0);
    CHECK(text.out.find("k=1 n=1:") != std::string::npos);
    CHECK(text.out.find("k=2 n=3:") != std::string::npos);
    CHECK(text.out.find("-> PASS") != std::string::npos);
    CHECK(text.out.find("all 2 levels PASS") != std::string::npos);

    const CmdResult js = run_cli("verify --k-max 3 --report json");
    CHECK(js.code == 0);
    const nlohmann::json doc = nlohmann::json::parse(js.out);
    CHECK(doc["k_max"] == 3);
    CHECK(doc["all_pass"] == true);
    REQUIRE(doc["reports"].size() == 3);
    for (const auto& rep : doc["reports"]) {
        CHECK(rep["identity_ok"] == true);
        CHECK(rep["residual_canonically_zero"] == true);
        CHECK(rep["nonneg_ok"] == true);
        CHECK(rep["sparsity_ok"] == true);
        CHECK(rep["lemma2_ok"] == true);
        CHECK(rep["helper_linear_ok"] == true);
        CHECK(rep["helper_quadratic_ok"] == true);
        CHECK(rep["pass"] == true);
    }
}

TEST_CASE("verification precision cap can be set by flag or environment") {
    const CmdResult flagged = run_cli("verify --k-max 1 --report json --bits 512");
    REQUIRE(flagged.code == 0);
    CHECK(nlohmann::json::parse(flagged.out)["sign_bits_cap"] == 512);

    const CmdResult from_env = run_cli("verify --k-max 1 --report json", "SILVER_BITS=128");
    REQUIRE(from_env.code == 0);
    CHECK(nlohmann::json::parse(from_env.out)["sign_bits_cap"] == 128);

    // An explicit flag wins over the environment.
    const CmdResult both = run_cli("verify --k-max 1 --report json --bits 256", "SILVER_BITS=128");
    REQUIRE(both.code == 0);
    CHECK(nlohmann::json::parse(both.out)["sign_bits_cap"] == 256);
}

TEST_CASE("fault injection makes verification fail loudly") {
    const CmdResult res = run_cli("verify --k-max 2 --inject-fault");
    CHECK(res.code == 1);
    CHECK(res.out.find("identity=FAIL") != std::string::npos);
    CHECK(res.out.find("FAILED") != std::string::npos);
}

TEST_CASE("run command emits a gap curve") {
    const CmdResult res = run_cli("run --fn quadratic --dim 5 --seed 3 --k 2");
    CHECK(res.code == 0);
    REQUIRE(count_lines(res.out) == 5);  // header + x0..x3
    CHECK(res.out.rfind("t,gap,grad_norm,alpha\n", 0) == 0);
    CHECK(res.out.back() == '\n');
    // The final row has no stepsize (no step leaves the last point).
    const std::string body = res.out.substr(0, res.out.size() - 1);
    CHECK(body.substr(body.rfind('\n') + 1).back() == ',');
    CHECK(body.substr(body.rfind('\n') + 1).rfind("3,", 0) == 0);

    CHECK(run_cli("run --schedule nesterov --dim 3 --seed 1 --k 2").code == 0);
    CHECK(run_cli("run --schedule constant:1.0 --dim 3 --seed 1 --k 2").code == 0);
    CHECK(run_cli("run --schedule constant:2.5 --dim 3 --seed 1 --k 2").code == 2);
    CHECK(run_cli("run --schedule warp --dim 3 --seed 1 --k 2").code == 2);
    CHECK(run_cli("run --fn cubic --dim 3 --seed 1 --k 2").code == 2);
}

TEST_CASE("audit command reports non-negative pair values and the rate bound") {
    const CmdResult silver = run_cli("audit --fn logsumexp --dim 6 --seed 5 --k 3");
    CHECK(silver.code == 0);
    CHECK(silver.out.find("OK") != std::string::npos);

    CHECK(run_cli("audit --schedule nesterov --fn huber --dim 6 --seed 5 --k 3").code == 0);
    CHECK(run_cli("audit --schedule constant:1.0 --dim 6 --seed 5 --k 3").code == 0);
    // A constant step other than 1 has no classical 1/(4n) guarantee to check.
    const CmdResult odd = run_cli("audit --schedule constant:0.5 --dim 6 --seed 5 --k 3");
    CHECK(odd.code == 0);
    CHECK(odd.out.find("not applicable") != std::string::npos);
}

TEST_CASE("compare table carries the frozen bound columns") {
    const CmdResult res = run_cli("compare --k-min 1 --k-max 6");
    CHECK(res.code == 0);
    REQUIRE(count_lines(res.out) == 7);
    CHECK(res.out.rfind("k,n,const_bound,silver_bound,nesterov_bound\n", 0) == 0);
    CHECK(res.out.find("\n1,1,0.25,0.18158465855716141,0.5\n") != std::string::npos);
    CHECK(res.out.find("\n6,63,") != std::string::npos);
    CHECK(res.out.find("0.0025189798155386896") != std::string::npos);
    CHECK(res.out.find("0.00048828125") != std::string::npos);

    // Empty ranges produce just the header.
    const CmdResult empty = run_cli("compare --k-min 5 --k-max 2");
    CHECK(empty.code == 0);
    CHECK(empty.out == "k,n,const_bound,silver_bound,nesterov_bound\n");

    const CmdResult measured = run_cli("compare --k-min 1 --k-max 2 --measured --dim 4 --seed 2");
    CHECK(measured.code == 0);
    CHECK(measured.out.rfind("k,n,const_bound,silver_bound,nesterov_bound,"
                             "measured_constant,measured_silver,measured_nesterov\n",
                             0) == 0);
    REQUIRE(count_lines(measured.out) == 3);
}

TEST_CASE("outputs are byte-deterministic across invocations") {
    for (const char* args : {"schedule --k 4", "cert --k 2", "verify --k-max 2 --report json",
                             "run --fn logsumexp --dim 6 --seed 11 --k 4",
                             "compare --k-min 1 --k-max 4"}) {
        const CmdResult first = run_cli(args);
        const CmdResult second = run_cli(args);
        CAPTURE(args);
        CHECK(first.code == second.code);
        CHECK(first.out == second.out);
    }
}

TEST_CASE("file output matches stdout output") {
    const std::string path = "/tmp/silver_cli_test_out.csv";
    std::remove(path.c_str());
    const CmdResult direct = run_cli("schedule --k 3");
    const CmdResult filed = run_cli("schedule --k 3 --out " + path);
    CHECK(filed.code == 0);
    CHECK(filed.out.empty());
    FILE* f = std::fopen(path.c_str(), "rb");
    REQUIRE(f != nullptr);
    std::string content;
    char buffer[4096];
    std::size_t got = 0;
    while ((got = std::fread(buffer, 1, sizeof(buffer), f)) > 0) content.append(buffer, got);
    std::fclose(f);
    std::remove(path.c_str());
    CHECK(content == direct.out);
}
