#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "support/oracles.hpp"

#include <dvfsim/rng.hpp>
#include <dvfsim/task_model.hpp>

using namespace dvfsim;

namespace {

TaskProfile raw(double p0, double gamma, double c, double d_work, double delta,
                double t0) {
    TaskProfile t;
    t.id = "raw";
    t.base_power = p0;
    t.mem_power_coeff = gamma;
    t.core_power_coeff = c;
    t.scaled_work = d_work;
    t.core_weight = delta;
    t.fixed_time = t0;
    t.arrival = 0.0;
    t.deadline = 1e9;
    return t;
}

} // namespace

TEST_CASE("power model evaluates the quadratic-voltage form") {
    // The demonstration task: P = 100 + 50 fm + 150 v^2 fc.
    CHECK(run_power({1, 1, 1}, raw(100, 50, 150, 25, 0.5, 5)) ==
          doctest::Approx(300.0));
    // Calibrated table row at half voltage and frequency.
    CHECK(run_power({0.5, 0.5, 0.7}, raw(100, 0, 200, 25, 0, 5)) ==
          doctest::Approx(125.0));
    // Degenerate constant-power task.
    CHECK(run_power({1, 1, 1}, raw(250, 0, 0, 25, 0.5, 5)) ==
          doctest::Approx(250.0));
}

TEST_CASE("time model splits between the two clocks") {
    // The demonstration task: t = 25 (0.5/fc + 0.5/fm) + 5.
    CHECK(exec_time({1, 1, 1}, raw(100, 50, 150, 25, 0.5, 5)) ==
          doctest::Approx(30.0));
    // Fully core-bound at half core frequency.
    CHECK(exec_time({0.5, 0.5, 1.2}, raw(100, 0, 200, 25, 1.0, 5)) ==
          doctest::Approx(55.0));
    // The fastest point of the wide domain.
    CHECK(exec_time({1.2, 1.0916079783, 1.2}, raw(100, 0, 200, 25, 0.5, 5)) ==
          doctest::Approx(26.868).epsilon(1e-4));
}

TEST_CASE("energy is the power-time product") {
    const TaskProfile demo = raw(100, 50, 150, 25, 0.5, 5);
    CHECK(run_energy({1, 1, 1}, demo) == doctest::Approx(9000.0));
    CHECK(run_energy({1, 1, 1}, raw(100, 0, 200, 25, 0, 5)) ==
          doctest::Approx(9000.0));
    CHECK(run_energy({0.7, 0.6, 0.9}, raw(120, 30, 0.1, 0, 0.5, 0)) ==
          doctest::Approx(0.0));

    Rng rng(3);
    for (int i = 0; i < 100; ++i) {
        const TaskProfile t = oracles::random_profile(rng, i);
        const DvfsSetting s{rng.uniform(0.5, 1.2), rng.uniform(0.5, 1.0),
                            rng.uniform(0.5, 1.2)};
        CHECK(run_energy(s, t) == run_power(s, t) * exec_time(s, t));
    }
}

TEST_CASE("calibration recovers the coefficients from the anchors") {
    const TaskProfile a = calibrate("a", 100, 300, 0, 5, 30, 0.5, 0, 100);
    CHECK(a.core_power_coeff == doctest::Approx(200.0));
    CHECK(a.scaled_work == doctest::Approx(25.0));

    const TaskProfile b = calibrate("b", 100, 300, 50, 5, 30, 0.5, 0, 100);
    CHECK(b.core_power_coeff == doctest::Approx(150.0));
    CHECK(b.scaled_work == doctest::Approx(25.0));
    CHECK(b.default_power() == doctest::Approx(300.0));
    CHECK(b.default_time() == doctest::Approx(30.0));

    CHECK_THROWS_AS(calibrate("c", 250, 250, 0, 5, 30, 0.5, 0, 100),
                    CalibrationError);
    CHECK_THROWS_AS(calibrate("d", 100, 300, 250, 5, 30, 0.5, 0, 100),
                    CalibrationError);
    CHECK_THROWS_AS(calibrate("e", 100, 300, 0, 30, 30, 0.5, 0, 100),
                    CalibrationError);
}

TEST_CASE("profile validation names the offending field") {
    TaskProfile t = raw(100, 0, 200, 25, 0.5, 5);
    t.deadline = -1.0;
    CHECK_THROWS_WITH_AS(t.validate(), "deadline: must exceed arrival",
                         ValidationError);
    t = raw(100, 0, 200, 25, 1.5, 5);
    CHECK_THROWS_AS(t.validate(), ValidationError);
    t = raw(-1, 0, 200, 25, 0.5, 5);
    CHECK_THROWS_AS(t.validate(), ValidationError);
}

TEST_CASE("anchor identity holds for calibrated profiles") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const TaskProfile t = oracles::random_profile(rng, i);
        const double v = rng.uniform(0.5, 1.2);
        CHECK(exec_time({v, 1.0, 1.0}, t) ==
              doctest::Approx(t.default_time()).epsilon(1e-12));
        CHECK(run_power({1.0, 1.0, 1.0}, t) ==
              doctest::Approx(t.default_power()).epsilon(1e-12));
    }
}

TEST_CASE("power rises and time falls with frequency") {
    Rng rng(9);
    for (int i = 0; i < 100; ++i) {
        const TaskProfile t = oracles::random_profile(rng, i);
        double lo = rng.uniform(0.5, 1.2);
        double hi = rng.uniform(0.5, 1.2);
        if (lo == hi) continue;
        if (lo > hi) std::swap(lo, hi);

        CHECK(run_power({hi, 0.8, 0.8}, t) > run_power({lo, 0.8, 0.8}, t));
        CHECK(run_power({0.8, hi, 0.8}, t) > run_power({0.8, lo, 0.8}, t));
        CHECK(run_power({0.8, 0.8, hi}, t) > run_power({0.8, 0.8, lo}, t));
        if (t.core_weight > 0.0)
            CHECK(exec_time({0.8, hi, 0.8}, t) < exec_time({0.8, lo, 0.8}, t));
        if (t.core_weight < 1.0)
            CHECK(exec_time({0.8, 0.8, hi}, t) < exec_time({0.8, 0.8, lo}, t));
    }
}
