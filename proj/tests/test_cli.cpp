#include "doctest.h"

#include <sys/wait.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "hopfdual/cli.hpp"
#include "hopfdual/config.hpp"
#include "hopfdual/model.hpp"

using hopfdual::cli::Json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = hopfdual::cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string fixture(const std::string& name) { return std::string(HOPFDUAL_FIXTURE_DIR) + "/" + name; }

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

fs::path scratch(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "hopfdual-cli-tests";
    fs::create_directories(dir);
    return dir / name;
}

int shell(const std::string& command) {
    const int status = std::system(command.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_SUITE("analyze") {
    TEST_CASE("reference report") {
        const Result r = run({"analyze", "--config", fixture("reference.ini"), "--json"});
        REQUIRE(r.code == 0);
        const Json j = Json::parse(r.out);
        CHECK(j["equilibrium"]["p_star"].get<double>() == doctest::Approx(0.02).epsilon(1e-12));
        CHECK(j["linear"]["tau0"].get<double>() == doctest::Approx(3.1416).epsilon(1e-5));
        CHECK(j["linear"]["omega0"].get<double>() == doctest::Approx(0.5));
        CHECK(j["hopf"]["tau2"].get<double>() == doctest::Approx(7140.5).epsilon(1e-5));
        CHECK(j["hopf"]["eta2"].get<double>() == doctest::Approx(-3125.0));
        CHECK(j["hopf"]["omega2"].get<double>() == doctest::Approx(-937.5));
        CHECK(j["classification"]["direction"] == "supercritical");
        CHECK(j["linear"]["tau_c"].size() == 3);
        for (const char* key : {"b1", "b2", "b3", "b4", "b5", "b6", "b7", "b8", "b9"}) {
            CHECK(j["taylor"].contains(key));
        }
        CHECK(j.contains("config"));
        CHECK(j.contains("config_ini"));
    }

    TEST_CASE("unit capacity puts the equilibrium at one") {
        const fs::path ini = scratch("unit.ini");
        std::ofstream(ini) << "[model]\nk = 0.3\nc = 1\n";
        const Result r = run({"analyze", "--config", ini.string(), "--json"});
        REQUIRE(r.code == 0);
        CHECK(Json::parse(r.out)["equilibrium"]["p_star"].get<double>() == doctest::Approx(1.0).epsilon(1e-13));
    }

    TEST_CASE("power-law report agrees with the oracle") {
        const Result r = run({"analyze", "--config", fixture("power_law.ini"), "--json"});
        REQUIRE(r.code == 0);
        const Json j = Json::parse(r.out);
        const hopfdual::RunConfig cfg = hopfdual::load_config(fixture("power_law.ini"));
        const auto model = cfg.model();
        const auto fd = hopfdual::numeric_taylor_oracle(model, hopfdual::find_equilibrium(model));
        CHECK(j["taylor"]["b2"].get<double>() == doctest::Approx(fd.b2).epsilon(1e-5));
    }

    TEST_CASE("delay adds a stability verdict and prediction") {
        const Result r = run({"analyze", "--config", fixture("reference.ini"), "--tau", "3.2", "--json"});
        REQUIRE(r.code == 0);
        const Json j = Json::parse(r.out);
        CHECK(j["at_tau"]["stability"] == "unstable");
        CHECK(j["at_tau"]["prediction"]["period"].get<double>() == doctest::Approx(12.762).epsilon(1e-4));
    }

    TEST_CASE("text summary") {
        const Result r = run({"analyze", "--config", fixture("reference.ini")});
        REQUIRE(r.code == 0);
        CHECK(r.out.find("supercritical, stable cycle, period increasing") != std::string::npos);
    }

    TEST_CASE("embedded config reproduces the report") {
        const Result first = run({"analyze", "--config", fixture("power_law.ini"), "--tau", "40", "--json"});
        REQUIRE(first.code == 0);
        const Json j = Json::parse(first.out);
        const fs::path ini = scratch("roundtrip.ini");
        std::ofstream(ini) << j["config_ini"].get<std::string>();
        const Result second = run({"analyze", "--config", ini.string(), "--json"});
        REQUIRE(second.code == 0);
        CHECK(second.out == first.out);
    }
}

TEST_SUITE("simulate") {
    TEST_CASE("stable delay settles") {
        const Result r = run({"simulate", "--config", fixture("reference.ini"), "--tau", "3", "--t-end", "2000",
                              "--out", scratch("tau3.csv").string()});
        REQUIRE(r.code == 0);
        CHECK(r.out.find("regime equilibrium") != std::string::npos);
        const std::string csv = slurp(scratch("tau3.csv"));
        CHECK(csv.rfind("t,p\n", 0) == 0);
        CHECK(fs::exists(scratch("tau3.csv.meta.json")));
    }

    TEST_CASE("oscillating delay") {
        const Result r = run({"simulate", "--config", fixture("reference.ini"), "--tau", "3.2", "--out",
                              scratch("tau32.csv").string(), "--json"});
        REQUIRE(r.code == 0);
        const Json j = Json::parse(r.out);
        CHECK(j["estimate"]["regime"] == "limit_cycle");
        CHECK(j["estimate"]["period"].get<double>() == doctest::Approx(12.76).epsilon(0.05));
    }

    TEST_CASE("history at the equilibrium gives a constant column") {
        const Result r = run({"simulate", "--config", fixture("reference.ini"), "--tau", "3.2", "--t-end", "200",
                              "--history-p0", "0.02"});
        REQUIRE(r.code == 0);
        std::istringstream in(r.out);
        std::string line;
        std::getline(in, line);
        REQUIRE(line == "t,p");
        int rows = 0;
        while (std::getline(in, line) && line.find(',') != std::string::npos) {
            CHECK(std::abs(std::stod(line.substr(line.find(',') + 1)) - 0.02) < 1e-12);
            ++rows;
        }
        CHECK(rows == 20001);
    }

    TEST_CASE("identical configs give identical files") {
        const std::vector<std::string> base{"simulate", "--config", fixture("reference.ini"), "--tau", "3.3",
                                            "--t-end", "300"};
        auto a = base;
        a.insert(a.end(), {"--out", scratch("det_a.csv").string()});
        auto b = base;
        b.insert(b.end(), {"--out", scratch("det_b.csv").string()});
        REQUIRE(run(a).code == 0);
        REQUIRE(run(b).code == 0);
        CHECK(slurp(scratch("det_a.csv")) == slurp(scratch("det_b.csv")));
    }

    TEST_CASE("positivity loss carries the failure time") {
        const fs::path ini = scratch("harsh.ini");
        std::ofstream(ini) << "[model]\nk = 50\nc = 50\n[simulation]\nstep = 0.01\nhistory_p0 = 0.5\n";
        const Result r = run({"simulate", "--config", ini.string(), "--tau", "1", "--t-end", "100"});
        CHECK(r.code == 3);
        const Json e = Json::parse(r.err);
        CHECK(e["error"]["code"] == "PositivityLoss");
        CHECK(e["error"]["time"].get<double>() > 0.0);
    }
}

TEST_SUITE("sweep") {
    TEST_CASE("three-delay diagram") {
        const fs::path out = scratch("diagram.csv");
        const Result r = run({"sweep", "--config", fixture("sweep3.ini"), "--out", out.string()});
        REQUIRE(r.code == 0);
        std::istringstream in(slurp(out));
        std::string line;
        std::getline(in, line);
        CHECK(line ==
              "tau,regime,amp_meas,period_meas,mean_meas,amp_pred,period_pred,mean_offset_pred,amp_err,period_err,"
              "status");
        std::vector<std::string> regimes;
        while (std::getline(in, line)) {
            const auto first = line.find(',');
            regimes.push_back(line.substr(first + 1, line.find(',', first + 1) - first - 1));
        }
        CHECK(regimes == std::vector<std::string>{"equilibrium", "limit_cycle", "limit_cycle"});
    }

    TEST_CASE("single delay") {
        const Result r = run({"sweep", "--config", fixture("reference.ini"), "--tau", "3", "--t-end", "1000",
                              "--out", scratch("single.csv").string()});
        REQUIRE(r.code == 0);
        const std::string csv = slurp(scratch("single.csv"));
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);
    }
}

TEST_SUITE("predict") {
    TEST_CASE("reference delays") {
        for (auto [tau, period] : {std::pair{"3.2", 12.762}, std::pair{"3.4", 13.481}}) {
            const Result r = run({"predict", "--config", fixture("reference.ini"), "--tau", tau, "--json"});
            REQUIRE(r.code == 0);
            CHECK(Json::parse(r.out)["prediction"]["period"].get<double>() == doctest::Approx(period).epsilon(1e-4));
        }
    }

    TEST_CASE("onset has zero amplitude") {
        const Result r =
            run({"predict", "--config", fixture("reference.ini"), "--tau", "3.14159265358979312", "--json"});
        REQUIRE(r.code == 0);
        CHECK(Json::parse(r.out)["prediction"]["amplitude"].get<double>() == 0.0);
    }

    TEST_CASE("waveform file") {
        const fs::path wave = scratch("wave.csv");
        const Result r = run({"predict", "--config", fixture("reference.ini"), "--tau", "3.2", "--waveform",
                              wave.string()});
        REQUIRE(r.code == 0);
        const std::string csv = slurp(wave);
        CHECK(csv.rfind("t,p_pred\n", 0) == 0);
        CHECK(std::count(csv.begin(), csv.end(), '\n') == 1 + 3 * 200 + 1);
    }

    TEST_CASE("wrong side of onset") {
        const Result r = run({"predict", "--config", fixture("reference.ini"), "--tau", "3"});
        CHECK(r.code == 3);
        CHECK(Json::parse(r.err)["error"]["code"] == "WrongSide");
    }
}

TEST_SUITE("verify") {
    TEST_CASE("reference table") {
        const Result r = run({"verify", "--config", fixture("reference.ini"), "--json"});
        REQUIRE(r.code == 0);
        const Json j = Json::parse(r.out);
        for (const auto& row : j["coefficients"]) {
            const std::string name = row["name"];
            if (name == "b4") {
                CHECK(row["status"] == "paper-convention");
                CHECK(row["ratio"].get<double>() == doctest::Approx(2.0).epsilon(1e-3));
            } else if (name == "b8") {
                CHECK(row["status"] == "paper-convention");
                CHECK(row["ratio"].get<double>() == doctest::Approx(3.0).epsilon(1e-3));
            } else {
                CHECK(row["status"] == "match");
            }
        }
    }

    TEST_CASE("linear demand has vanishing higher coefficients") {
        const Result r = run({"verify", "--config", fixture("linear.ini"), "--json"});
        REQUIRE(r.code == 0);
        const Json j = Json::parse(r.out);
        for (const auto& row : j["coefficients"]) {
            const std::string name = row["name"];
            if (name == "b5" || name == "b8" || name == "b9") {
                CHECK(row["status"] == "match");
                CHECK(std::abs(row["oracle"].get<double>()) < 1e-3);
                CHECK(std::abs(row["closed_form"].get<double>()) < 1e-3);
            }
        }
    }
}

TEST_SUITE("exit codes") {
    TEST_CASE("in-process") {
        CHECK(run({"analyze", "--config", fixture("reference.ini")}).code == 0);
        CHECK(run({"analyze", "--config", fixture("unknown_key.ini")}).code == 2);
        CHECK(run({"analyze", "--config", "/nonexistent.ini"}).code == 2);
        CHECK(run({"frobnicate"}).code == 2);
        CHECK(run({"analyze", "--tau", "abc"}).code == 2);
        CHECK(run({"simulate", "--config", fixture("reference.ini")}).code == 2);
        CHECK(run({"predict", "--config", fixture("reference.ini"), "--tau", "3"}).code == 3);
        const Result bad = run({"analyze", "--config", fixture("unknown_key.ini")});
        const Json e = Json::parse(bad.err);
        CHECK(e["error"]["code"] == "InvalidArgument");
        CHECK(e["error"]["exit_code"] == 2);
    }

    TEST_CASE("installed binary with seed directory") {
        const std::string bin = HOPFDUAL_BINARY;
        const std::string env = std::string("HOPFDUAL_SEED_DIR=") + HOPFDUAL_FIXTURE_DIR + " ";
        CHECK(shell(env + bin + " analyze --config reference.ini > /dev/null") == 0);
        CHECK(shell(env + bin + " analyze --config unknown_key.ini 2> /dev/null") == 2);
        CHECK(shell(env + bin + " predict --config reference.ini --tau 3 2> /dev/null") == 3);
        CHECK(shell(bin + " analyze --config reference.ini 2> /dev/null") == 2);
    }
}
