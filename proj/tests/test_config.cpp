#include "doctest.h"

#include <sstream>
#include <random>
#include <string>

#include "hopfdual/config.hpp"
#include "hopfdual/errors.hpp"

using namespace hopfdual;

namespace {

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in);
}

ErrorCode code_of(const std::string& text) {
    try {
        (void)parse(text);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected a parse failure");
    return ErrorCode::InvalidArgument;
}

}  // namespace

TEST_CASE("defaults describe the reference setup") {
    const RunConfig cfg = parse("");
    CHECK(cfg.k == 0.01);
    CHECK(cfg.c == 50.0);
    CHECK(cfg.family == "reciprocal");
    CHECK_FALSE(cfg.tau.has_value());
    CHECK(cfg.t_end == 5000.0);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("sections, comments and lists") {
    const RunConfig cfg = parse(
        "# comment\n"
        "[model]\nk = 0.02 \nc=10\n"
        "[demand]\nfamily = power_law\nw = 2\n; full-line comment\nalpha = 0.5\n"
        "[analysis]\ntau_list = 3, 3.2,3.4\nn_critical = 5\n"
        "[simulation]\nstep = 0.005\nhistory_p0 = 0.03\nthreads = 2\n"
        "[output]\nout = diagram.csv\n");
    CHECK(cfg.k == 0.02);
    CHECK(cfg.c == 10.0);
    CHECK(cfg.family == "power_law");
    CHECK(cfg.w == 2.0);
    CHECK(cfg.alpha == 0.5);
    CHECK(cfg.tau_list == std::vector<double>{3.0, 3.2, 3.4});
    CHECK(cfg.n_critical == 5);
    CHECK(cfg.step == 0.005);
    CHECK(cfg.history_p0 == 0.03);
    CHECK(cfg.threads == 2u);
    CHECK(cfg.out == "diagram.csv");
}

TEST_CASE("rejections") {
    CHECK(code_of("[model]\ngain_boost = 2\n") == ErrorCode::InvalidArgument);
    CHECK(code_of("[plotting]\ncolor = red\n") == ErrorCode::InvalidArgument);
    CHECK(code_of("k = 0.01\n") == ErrorCode::InvalidArgument);
    CHECK(code_of("[model]\nk = fast\n") == ErrorCode::InvalidArgument);
    CHECK(code_of("[model]\nk = -1\n") == ErrorCode::InvalidArgument);
    CHECK(code_of("[model]\nc = 0\n") == ErrorCode::InvalidArgument);
    CHECK(code_of("[demand]\nfamily = exotic\n") == ErrorCode::InvalidArgument);
    CHECK(code_of("[demand]\nfamily = reciprocal\nalpha = 2\n") == ErrorCode::InvalidArgument);
    CHECK(code_of("[demand]\nfamily = linear\na = 1\n") == ErrorCode::InvalidArgument);
    CHECK(code_of("[analysis]\ntau = -3\n") == ErrorCode::InvalidArgument);
    CHECK(code_of("[analysis]\ntau_list = 3,,4\n") == ErrorCode::InvalidArgument);
    CHECK(code_of("[simulation]\ntransient_fraction = 1.5\n") == ErrorCode::InvalidArgument);
    CHECK_THROWS_AS((void)load_config("/nonexistent/run.ini"), Error);
}

TEST_CASE("number lists and formatting") {
    CHECK(parse_number_list("1e-3, 2 ,3.5") == std::vector<double>{1e-3, 2.0, 3.5});
    CHECK_THROWS_AS((void)parse_number_list(""), Error);
    CHECK_THROWS_AS((void)parse_number_list("1, x"), Error);
    CHECK(format_number(0.1) == "0.10000000000000001");
    CHECK(std::stod(format_number(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("to_ini round-trips every field") {
    RunConfig cfg;
    cfg.k = 0.013;
    cfg.c = 1.0 / 3.0;
    cfg.family = "linear";
    cfg.a = 100.0;
    cfg.b = 2500.0;
    cfg.tau = 3.2;
    cfg.tau_list = {3.0, 3.1, 1.0 / 7.0};
    cfg.n_critical = 4;
    cfg.step = 0.004;
    cfg.t_end = 1234.5;
    cfg.history_p0 = 0.025;
    cfg.transient_fraction = 0.6;
    cfg.threads = 3;
    cfg.out = "x.csv";
    cfg.waveform_out = "w.csv";
    cfg.waveform_periods = 2.5;
    cfg.waveform_samples = 64;
    const std::string ini = cfg.to_ini();
    const RunConfig back = parse(ini);
    CHECK(back.to_ini() == ini);
    CHECK(back.c == cfg.c);
    CHECK(back.tau_list == cfg.tau_list);
    CHECK(back.waveform_out == cfg.waveform_out);
}

TEST_CASE("random configurations round-trip") {
    std::mt19937_64 gen(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        RunConfig cfg;
        cfg.k = 1e-3 + u(gen);
        cfg.c = 0.5 + 100.0 * u(gen);
        cfg.family = trial % 2 == 0 ? "power_law" : "reciprocal";
        cfg.w = 0.1 + u(gen);
        if (cfg.family == "power_law") {
            cfg.alpha = 0.2 + 3.0 * u(gen);
        }
        cfg.tau = 5.0 * u(gen);
        cfg.t_end = 100.0 + 1000.0 * u(gen);
        const std::string ini = cfg.to_ini();
        CHECK(parse(ini).to_ini() == ini);
    }
}

TEST_CASE("demand families from configuration") {
    RunConfig linear;
    linear.family = "linear";
    linear.a = 100.0;
    linear.b = 2500.0;
    const DemandFunction x = linear.demand();
    CHECK(x(0.02) == doctest::Approx(50.0));
    CHECK(x.d1(0.02) == doctest::Approx(-2500.0).epsilon(1e-9));
    CHECK(x.domain_hi() == doctest::Approx(0.04));

    RunConfig power;
    power.family = "power_law";
    power.alpha = 2.0;
    CHECK(power.demand().name().find("power_law") == 0);
    CHECK(power.model().tau == 0.0);
}
