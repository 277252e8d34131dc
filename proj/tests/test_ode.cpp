#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "masersim/models.hpp"
#include "masersim/ode.hpp"

using namespace masersim;

namespace {

VectorField exponential(double rate) {
    VectorField f;
    f.dimension = 1;
    f.component_labels = {"y"};
    f.eval = [rate](double, const double* y, double* dydt) { dydt[0] = rate * y[0]; };
    return f;
}

VectorField harmonic_oscillator() {
    VectorField f;
    f.dimension = 2;
    f.component_labels = {"q", "p"};
    f.eval = [](double, const double* y, double* dydt) {
        dydt[0] = y[1];
        dydt[1] = -y[0];
    };
    return f;
}

IntegratorConfig cfg_for(double t_end, double sample_interval = 0.01) {
    IntegratorConfig cfg;
    cfg.t_end = t_end;
    cfg.sample_interval = sample_interval;
    return cfg;
}

} // namespace

TEST_CASE("exponential growth matches the closed form") {
    auto traj = integrate(exponential(1.0), {1.0}, cfg_for(5.0));
    REQUIRE(traj.times.front() == 0.0);
    REQUIRE(traj.states.front()[0] == 1.0);
    for (std::size_t i = 0; i < traj.times.size(); ++i) {
        const double exact = std::exp(traj.times[i]);
        CHECK(std::abs(traj.states[i][0] - exact) / exact < 1e-8);
    }
}

TEST_CASE("zero vector field holds the state constant") {
    VectorField f;
    f.dimension = 2;
    f.component_labels = {"a", "b"};
    f.eval = [](double, const double*, double* dydt) { dydt[0] = dydt[1] = 0.0; };
    auto traj = integrate(f, {3.0, -7.0}, cfg_for(10.0, 0.5));
    for (const auto& s : traj.states) {
        CHECK(s[0] == 3.0);
        CHECK(s[1] == -7.0);
    }
}

TEST_CASE("harmonic oscillator returns to the start after one period") {
    auto cfg = cfg_for(2.0 * M_PI);
    auto traj = integrate(harmonic_oscillator(), {1.0, 0.0}, cfg);
    const auto& last = traj.states.back();
    CHECK(std::abs(last[0] - 1.0) < 10.0 * cfg.rel_tol * 1e3);
    CHECK(std::abs(last[1]) < 10.0 * cfg.rel_tol * 1e3);
    double max_energy_drift = 0;
    for (const auto& s : traj.states) {
        const double e = s[0] * s[0] + s[1] * s[1];
        max_energy_drift = std::max(max_energy_drift, std::abs(e - 1.0));
    }
    CHECK(max_energy_drift < 1e-8);
}

TEST_CASE("fixed-step RK4 converges at order four") {
    // error(h) / error(h/2) should be about 2^4 for a smooth problem
    auto run = [](double h) {
        IntegratorConfig cfg;
        cfg.method = IntegratorMethod::FixedStepRK4;
        cfg.initial_step = h;
        cfg.t_end = 2.0;
        cfg.sample_interval = 2.0;
        auto traj = integrate(exponential(1.0), {1.0}, cfg);
        return std::abs(traj.states.back()[0] - std::exp(2.0));
    };
    const double e1 = run(0.1), e2 = run(0.05);
    const double order = std::log2(e1 / e2);
    CHECK(order > 3.7);
    CHECK(order < 4.3);
}

TEST_CASE("rk45 and rk4 agree on a maser run") {
    PhysicalParams p;
    p.mu0 = std::sqrt(1e12 / 0.05);
    auto field = vector_field(Variant::SepNorm, normalize(p));
    auto y0 = default_initial_state(Variant::SepNorm, p);

    IntegratorConfig a = cfg_for(20.0, 0.1);
    IntegratorConfig b = a;
    b.method = IntegratorMethod::FixedStepRK4;
    b.initial_step = 1e-3;

    auto ta = integrate(field, y0, a);
    auto tb = integrate(field, y0, b);
    REQUIRE(ta.times.size() == tb.times.size());
    for (std::size_t i = 0; i < ta.times.size(); ++i) {
        REQUIRE(ta.times[i] == doctest::Approx(tb.times[i]).epsilon(1e-12));
        for (std::size_t c = 0; c < 3; ++c) {
            const double scale = std::max({std::abs(ta.states[i][c]), 1e-12});
            CHECK(std::abs(ta.states[i][c] - tb.states[i][c]) / scale < 1e-6);
        }
    }
}

TEST_CASE("integration is deterministic") {
    PhysicalParams p;
    p.mu0 = std::sqrt(1e12 / 0.05);
    auto field = vector_field(Variant::SepNorm, normalize(p));
    auto y0 = default_initial_state(Variant::SepNorm, p);
    auto a = integrate(field, y0, cfg_for(20.0));
    auto b = integrate(field, y0, cfg_for(20.0));
    REQUIRE(a.times == b.times);
    REQUIRE(a.states == b.states); // bit-identical
}

TEST_CASE("dense sampling hits the requested grid and endpoint") {
    auto traj = integrate(exponential(-0.5), {2.0}, cfg_for(1.05, 0.1));
    REQUIRE(traj.times.size() == 12); // 0, 0.1 ... 1.0, 1.05
    CHECK(traj.times.back() == 1.05);
    for (std::size_t i = 0; i + 1 < traj.times.size() - 1; ++i)
        CHECK(traj.times[i] == doctest::Approx(0.1 * static_cast<double>(i)).epsilon(1e-12));
}

TEST_CASE("diverging system reports a finite failure") {
    VectorField f;
    f.dimension = 1;
    f.component_labels = {"y"};
    f.eval = [](double, const double* y, double* dydt) { dydt[0] = y[0] * y[0]; };
    // y' = y^2, y(0)=1 blows up at t=1
    CHECK_THROWS_AS(integrate(f, {1.0}, cfg_for(2.0)), Error);
}

TEST_CASE("config validation rejects nonsense") {
    IntegratorConfig cfg;
    cfg.t_end = -1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
    cfg = IntegratorConfig{};
    cfg.sample_interval = 0.0;
    cfg.t_end = 1.0;
    CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("derivative_of_log recovers a constant growth rate") {
    auto traj = integrate(exponential(2.0), {1.0}, cfg_for(5.0));
    auto g = derivative_of_log(traj, "y");
    REQUIRE(!g.times.empty());
    for (double v : g.values) CHECK(std::abs(v - std::log(2.0)) < 1e-6);
}

TEST_CASE("derivative_of_log masks non-growing segments") {
    auto traj = integrate(exponential(-1.0), {1.0}, cfg_for(3.0));
    auto g = derivative_of_log(traj, "y");
    CHECK(g.times.empty()); // decaying signal has no positive growth rate
}

TEST_CASE("log growth rate matches M for the separated model") {
    // N_c' = (M - theta) N_c with theta = 0, so d(ln N_c)/dT == M
    PhysicalParams p;
    p.mu0 = std::sqrt(1e12 / 0.05);
    auto field = vector_field(Variant::SepNorm, normalize(p));
    auto y0 = default_initial_state(Variant::SepNorm, p);
    auto traj = integrate(field, y0, cfg_for(12.0, 0.01));
    auto rate = log_growth_rate(traj, "N_c");
    auto M = traj.component("M");
    // skip endpoints (one-sided differences)
    for (std::size_t i = 1; i + 1 < rate.size(); ++i)
        CHECK(std::abs(rate[i] - M[i]) < 1e-3 * std::max(1.0, std::abs(M[i])));
}

TEST_CASE("log growth rate rejects non-positive signals") {
    auto traj = integrate(harmonic_oscillator(), {1.0, 0.0}, cfg_for(6.0));
    CHECK_THROWS_AS(log_growth_rate(traj, "q"), Error);
}
