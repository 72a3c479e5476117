#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "singshock/experiments.hpp"

using namespace singshock;

TEST(Presets, SingularShockRows) {
    const auto p = preset_kk_singular();
    ASSERT_GE(p.rows.size(), 2u);
    EXPECT_EQ(p.rows[0].h, 0.04);
    EXPECT_EQ(p.rows[1].h, 0.02);
    EXPECT_EQ(p.rows[0].r, 0.300);
    EXPECT_EQ(p.rows[1].r, 0.240);
    EXPECT_EQ(p.alpha, 0.2);
    EXPECT_EQ(p.beta, 0.5);
    EXPECT_EQ(p.gamma, 0.4);
    EXPECT_EQ(p.x_min, -4.0);
    EXPECT_EQ(p.T, 5.0);

    const auto s = preset_kk_singular_small();
    EXPECT_EQ(s.rows.back().h, 0.0000125);
    EXPECT_EQ(s.rows.back().r, 0.012);
    EXPECT_EQ(s.alpha, 0.2);
    EXPECT_EQ(s.x_min, -0.5);
    EXPECT_EQ(s.x_max, 0.5);
    EXPECT_EQ(s.T, 1.0);
    for (std::size_t k = 1; k < s.rows.size(); ++k) EXPECT_LT(s.rows[k].h, s.rows[k - 1].h);
}

TEST(Presets, BoundedRegimes) {
    for (const auto& p : {preset_kk_overcompressive(), preset_kk_classic()}) {
        EXPECT_EQ(p.beta, 0.0);
        EXPECT_EQ(p.gamma, 0.0);
        EXPECT_EQ(p.alpha, 0.2);
        for (const auto& row : p.rows) EXPECT_EQ(row.r, 0.45);
    }
    EXPECT_EQ(preset_kk_overcompressive().ic.u_r, -1.895644);
    EXPECT_EQ(preset_kk_classic().ic.u_r, -1.725862);
}

TEST(Presets, KorchinskiDeltaDefaults) {
    const auto p = preset_korchinski_delta();
    EXPECT_EQ(p.system, "korchinski");
    EXPECT_EQ(p.ic.u_l, 1.0);
    EXPECT_EQ(p.ic.v_l, 1.0);
    EXPECT_EQ(p.ic.u_r, -1.0);
    EXPECT_EQ(p.ic.v_r, 1.0);
    EXPECT_EQ(p.T, 0.5);
    EXPECT_EQ(p.alpha, 0.0);
    for (const auto& row : p.rows) EXPECT_LE(row.r * 1.0, 0.5);
}

TEST(Presets, ByNameAndValidation) {
    for (const auto& name : preset_names()) {
        const auto p = preset_by_name(name);
        EXPECT_EQ(p.name, name);
        EXPECT_NO_THROW(validate(p));
    }
    EXPECT_THROW(preset_by_name("nope"), ConfigError);
    auto p = preset_kk_classic();
    p.rows = {{0.1, 0.45}};  // 10 cells on [-0.5, 0.5]
    EXPECT_THROW(validate(p), ConfigError);
    p.rows = {{0.3, 0.45}};
    EXPECT_THROW(validate(p), ConfigError);
}

TEST(Presets, JsonRoundTrip) {
    for (const auto& name : preset_names()) {
        const auto p = preset_by_name(name);
        const auto q = preset_from_json(to_json(p));
        EXPECT_EQ(to_json(q), to_json(p)) << name;
    }
    EXPECT_THROW(preset_from_json(nlohmann::json::parse(R"({"name": "x"})")), ConfigError);
}

TEST(Presets, DefaultTestFunctionsFitEveryResidualGrid) {
    for (const auto& name : preset_names()) {
        const auto p = preset_by_name(name);
        const auto sys = system_by_name(p.system);
        const auto tests = default_test_functions(p, sys);
        EXPECT_EQ(tests.size(), 3u);
        for (const auto& row : p.residual_rows)
            for (const auto& psi : tests)
                EXPECT_NO_THROW(validate(psi, GridSpec::from_width(p.x_min, p.x_max, row.h), p.T)) << name;
    }
}

TEST(Oracles, BurgersShockSpeed) {
    EXPECT_EQ(oracle_burgers_shock(1.0, 0.0), 1.0);
    EXPECT_EQ(oracle_burgers_shock(1.0, -1.0), 0.0);
    EXPECT_EQ(oracle_burgers_shock(0.3, 0.3), 0.6);
    EXPECT_DOUBLE_EQ(jump_speed(system_korchinski(), RiemannData{1.0, 0.0, 0.0, 0.0, 0.0}), 1.0);
    EXPECT_DOUBLE_EQ(jump_speed(system_korchinski(), RiemannData{1.0, 1.0, -1.0, 1.0, 0.0}), 0.0);
}

TEST(ShockPosition, ExactStep) {
    const auto g = GridSpec::from_width(-1.0, 1.0, 0.01);
    const auto s = discretize_initial(RiemannData{1.0, 0.0, 0.0, 0.0, 0.3}, g);
    EXPECT_NEAR(measure_shock_position(s, 0.5), 0.3, 0.5 * g.h);
}

TEST(ShockPosition, RampHasUniqueCrossing) {
    const auto g = GridSpec::from_count(0.0, 1.0, 10);
    StateField s = StateField::constant(g, 0.0, 0.0);
    for (std::size_t i = 0; i < 10; ++i) s.u[i] = 1.0 - g.center(i);
    EXPECT_NEAR(measure_shock_position(s, 0.5), 0.5, 1e-14);
    EXPECT_THROW(measure_shock_position(s, 2.0), Error);
}

TEST(ShockPosition, KorchinskiShockMovesAtUnitSpeed) {
    const auto p = preset_korchinski_shock();
    const auto res = run_row(p, system_korchinski(), {0.005, 0.45});
    ASSERT_TRUE(res.run) << res.error;
    const auto& s = res.run->final_state;
    const double expected = oracle_burgers_shock(1.0, 0.0) * s.t;
    EXPECT_NEAR(measure_shock_position(s, 0.5), expected, 2 * 0.005);
}

TEST(DeltaShock, MassGrowthAndBoundaryBalance) {
    const auto p = preset_korchinski_delta();
    const auto sys = system_korchinski();
    MassObserver window(-p.delta_window, p.delta_window);
    MassObserver total(p.x_min, p.x_max);
    const auto res = run_row(p, sys, {0.004, 0.45}, {&window, &total});
    ASSERT_TRUE(res.run) << res.error;
    // m'(t) = s[v] - [uv] with s = 0
    const double oracle = -(p.ic.u_r * p.ic.v_r - p.ic.u_l * p.ic.v_l);
    EXPECT_NEAR(window.growth_rate(0.1, 0.5), oracle, 0.05 * oracle);
    // constant extension feeds v through both edges at rates u_l v_l and -u_r v_r
    const double inflow = p.ic.u_l * p.ic.v_l - p.ic.u_r * p.ic.v_r;
    for (std::size_t k = 0; k < total.times().size(); ++k) {
        const double want = total.masses()[0] + inflow * total.times()[k];
        EXPECT_NEAR(total.masses()[k], want, 1e-12 * want);
    }
}

TEST(DeltaShock, PeakGrowsAsGridRefines) {
    const auto p = preset_korchinski_delta();
    const auto table = run_table(p);
    const auto reps = table.reports();
    ASSERT_EQ(reps.size(), 3u);
    for (std::size_t k = 1; k < reps.size(); ++k) EXPECT_GT(reps[k].peak_v, 1.5 * reps[k - 1].peak_v);
    for (const auto& r : reps) EXPECT_LE(r.q27, 1.0);  // max principle keeps |u| ≤ 1
}

TEST(Table, EmptyAndSingleRow) {
    auto p = preset_kk_classic();
    p.rows.clear();
    auto t = run_table(p);
    EXPECT_TRUE(t.rows.empty());
    EXPECT_FALSE(t.verdict);
    EXPECT_FALSE(t.verdict_error.empty());

    p.rows = {{0.01, 0.45}};
    t = run_table(p);
    ASSERT_EQ(t.reports().size(), 1u);
    EXPECT_FALSE(t.verdict);
}

TEST(Table, FailedRowDoesNotStopOthers) {
    auto p = preset_korchinski_shock();
    p.rows = {{0.02, 0.45}, {0.01, 1.5}, {0.005, 0.45}, {0.0025, 0.45}};
    const auto t = run_table(p);
    ASSERT_EQ(t.rows.size(), 4u);
    EXPECT_FALSE(t.rows[1].report);
    EXPECT_NE(t.rows[1].error.find("CFL"), std::string::npos);
    EXPECT_EQ(t.reports().size(), 3u);
    ASSERT_TRUE(t.verdict);
    EXPECT_TRUE(t.verdict->bounded());
}

TEST(Table, MinimumWidthFilter) {
    const auto t = run_table(preset_korchinski_shock(), 0.005);
    EXPECT_EQ(t.rows.size(), 2u);
}

TEST(Table, AutoRatio) {
    auto p = preset_korchinski_shock();
    p.auto_r = true;
    p.cfl_target = 0.4;
    const auto t = run_table(p);
    for (const auto& r : t.reports()) EXPECT_DOUBLE_EQ(r.r, 0.4);
}

TEST(ResidualStudy, TooFewGridsIsReported) {
    auto p = preset_korchinski_rarefaction();
    p.residual_rows = {{0.01, 0.45}, {0.005, 0.45}};
    const auto study = residual_study(p);
    EXPECT_TRUE(study.orders.empty());
    EXPECT_FALSE(study.order_error.empty());
    EXPECT_EQ(study.report.rows.size(), 6u);
}
