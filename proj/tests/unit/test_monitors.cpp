#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "singshock/initial.hpp"
#include "singshock/monitors.hpp"
#include "singshock/simulation.hpp"

using namespace singshock;

namespace {

MonitorReport synthetic(double h, double r, double q27, double q28, double q29) {
    MonitorReport m;
    m.h = h;
    m.r = r;
    m.h_over_r = h / r;
    m.q27 = q27;
    m.q28 = q28;
    m.q29 = q29;
    return m;
}

SchemeParams monitor_params(double r, double beta, double gamma) {
    SchemeParams p;
    p.r = r;
    p.beta = beta;
    p.gamma = gamma;
    return p;
}

} // namespace

TEST(MonitorObserve, ZeroState) {
    const auto g = GridSpec::from_count(0.0, 1.0, 10);
    MonitorReport rep;
    for (const auto& sys : {system_keyfitz_kranzer(), system_korchinski()}) {
        rep = {};
        monitor_observe(StateField::constant(g, 0.0, 0.0), sys, monitor_params(0.5, 0.5, 0.4), rep);
        EXPECT_EQ(rep.q27, 0.0);
        EXPECT_EQ(rep.q28, 0.0);
        EXPECT_EQ(rep.q29, 0.0);
        EXPECT_EQ(rep.levels, 1);
    }
}

TEST(MonitorObserve, HandComputedLevel) {
    const auto g = GridSpec::from_count(0.0, 2.0, 4);  // h = 0.5
    const StateField s{g, {1.0, -2.0, 0.0, 0.0}, {0.0, 1.0, 0.0, 0.0}, 0.0, 0};
    MonitorReport rep;
    monitor_observe(s, system_keyfitz_kranzer(), monitor_params(0.3, 0.5, 0.4), rep);
    EXPECT_DOUBLE_EQ(rep.h, 0.5);
    EXPECT_DOUBLE_EQ(rep.h_over_r, 0.5 / 0.3);
    EXPECT_DOUBLE_EQ(rep.cfl_max, 0.6);
    EXPECT_DOUBLE_EQ(rep.q27, std::sqrt(0.5) * 2.0);
    EXPECT_DOUBLE_EQ(rep.q28, 1.5);
    // Σ|A| = Σ|v| = 1; Σ|B| = |2/3| + |-4/3| = 2
    EXPECT_NEAR(rep.q29, 2.0 * std::pow(0.5, 1.4), 1e-15);
    EXPECT_EQ(rep.peak_v, 1.0);
}

TEST(MonitorObserve, StreamingMaxima) {
    const auto g = GridSpec::from_count(0.0, 1.0, 2);
    MonitorReport rep;
    const auto sys = system_korchinski();
    const auto p = monitor_params(0.5, 0.0, 0.0);
    monitor_observe(StateField{g, {1.0, 0.0}, {0.0, 4.0}, 0.0, 0}, sys, p, rep);
    monitor_observe(StateField{g, {0.0, -3.0}, {1.0, 0.0}, 0.5, 1}, sys, p, rep);
    EXPECT_EQ(rep.q27, 3.0);
    EXPECT_EQ(rep.q28, 2.0);
    EXPECT_EQ(rep.q29, 0.0);
    EXPECT_EQ(rep.peak_v, 4.0);
    EXPECT_EQ(rep.cfl_max, 1.5);
    EXPECT_EQ(rep.steps, 1);
    EXPECT_EQ(rep.levels, 2);
}

TEST(MonitorObserver, CoarseSingularShockRow) {
    const auto g = GridSpec::from_width(-4.0, 4.0, 0.04);
    const auto ic = discretize_initial(RiemannData{1.5, 0.0, -2.065426, 1.410639, 0.0}, g);
    SchemeParams p = monitor_params(0.3, 0.5, 0.4);
    p.alpha = 0.2;
    p.T = 5.0;
    MonitorObserver mon(system_keyfitz_kranzer(), p);
    (void)run_simulation(ic, system_keyfitz_kranzer(), p, {&mon});
    const auto& rep = mon.report();
    EXPECT_NEAR(rep.h_over_r, 0.1333, 1e-4);
    EXPECT_NEAR(rep.q27, 0.6289, 0.01 * 0.6289);
    EXPECT_NEAR(rep.q28, 14.97, 0.01 * 14.97);
    EXPECT_NEAR(rep.q29, 3.62, 0.01 * 3.62);
    EXPECT_LE(rep.cfl_max, 1.0);
    EXPECT_EQ(rep.levels, rep.steps + 1);
}

TEST(MonitorObserver, KorchinskiL1NeverIncreases) {
    // outflow at both edges; with inflowing far fields the edges would add mass
    const auto g = GridSpec::from_width(-1.0, 1.0, 0.01);
    const auto ic = discretize_initial(RiemannData{-1.0, 1.0, 1.0, 1.0, 0.0}, g);
    struct L1 : Observer {
        std::vector<double> u, v;
        void observe(const StateField& s) override {
            u.push_back(sum_abs(s.u) * s.grid.h);
            v.push_back(sum_abs(s.v) * s.grid.h);
        }
    } l1;
    SchemeParams p = monitor_params(0.45, 0.0, 0.0);
    p.T = 0.5;
    (void)run_simulation(ic, system_korchinski(), p, {&l1});
    for (std::size_t n = 1; n < l1.u.size(); ++n) {
        EXPECT_LE(l1.u[n], l1.u[n - 1] + 1e-12);
        EXPECT_LE(l1.v[n], l1.v[n - 1] + 1e-12);
    }
}

TEST(Verdict, FirstTableValues) {
    const std::vector<MonitorReport> reps{
        synthetic(0.04, 0.300, 0.6289, 14.97, 3.62),    synthetic(0.02, 0.240, 0.5830, 14.97, 2.84),
        synthetic(0.01, 0.170, 0.5309, 14.96, 2.26),    synthetic(0.005, 0.132, 0.5271, 14.93, 1.84),
        synthetic(0.0025, 0.095, 0.5178, 14.90, 1.53),  synthetic(0.00125, 0.065, 0.5021, 14.87, 1.29),
        synthetic(0.000625, 0.040, 0.4326, 14.85, 1.10), synthetic(0.0003125, 0.025, 0.4024, 14.83, 0.96)};
    const auto v = assumption_verdict(reps);
    EXPECT_TRUE(v.h_over_r_decreasing);
    EXPECT_DOUBLE_EQ(v.max_q28, 14.97);
    EXPECT_DOUBLE_EQ(v.max_q27, 0.6289);
    EXPECT_TRUE(v.bounded());
}

TEST(Verdict, SecondTableSlope) {
    const double h[] = {0.002, 0.001, 0.0005, 0.00025, 0.000125, 1.0 / 12000, 0.0000625, 0.00005, 1.0 / 30000,
                        0.000025, 1.0 / 60000, 0.0000125};
    const double r[] = {0.18, 0.13, 0.09, 0.06, 0.043, 0.035, 0.030, 0.026, 0.021, 0.019, 0.015, 0.012};
    std::vector<MonitorReport> reps;
    for (int k = 0; k < 12; ++k) reps.push_back(synthetic(h[k], r[k], 0.2, 1.9, 0.1));
    const auto v = assumption_verdict(reps);
    EXPECT_TRUE(v.h_over_r_decreasing);
    EXPECT_NEAR(v.h_over_r_slope, 0.4721, 1e-3);
    EXPECT_TRUE(v.bounded());
}

TEST(Verdict, IdenticalReports) {
    const auto m = synthetic(0.01, 0.5, 1.0, 2.0, 3.0);
    const auto v = assumption_verdict({m, m, m});
    EXPECT_FALSE(v.h_over_r_decreasing);
    EXPECT_TRUE(v.bounded());
    EXPECT_TRUE(std::isnan(v.h_over_r_slope));  // all h equal: no slope
}

TEST(Verdict, FlagsGrowthAtTheEnd) {
    const auto v = assumption_verdict({synthetic(0.04, 0.3, 1.0, 1.0, 1.0), synthetic(0.02, 0.2, 1.1, 1.0, 1.0),
                                       synthetic(0.01, 0.1, 1.5, 1.0, 1.26)});
    EXPECT_TRUE(v.q27_possibly_unbounded);
    EXPECT_FALSE(v.q28_possibly_unbounded);
    EXPECT_TRUE(v.q29_possibly_unbounded);
    EXPECT_FALSE(v.bounded());
    EXPECT_NE(describe(v).find("possibly unbounded"), std::string::npos);
}

TEST(Verdict, NeedsThreeReports) {
    const auto m = synthetic(0.01, 0.5, 1.0, 2.0, 3.0);
    EXPECT_THROW(assumption_verdict({m, m}), InsufficientData);
    EXPECT_THROW(assumption_verdict({}), InsufficientData);
}

TEST(MonitorCsv, Layout) {
    MonitorReport m = synthetic(0.0005, 0.45, 1.92051, 1.69783, 1.27421);
    m.peak_v = 1.40804;
    m.steps = 4445;
    EXPECT_EQ(monitor_csv({m}), "h,r,h_over_r,q27,q28,q29,peak_v,steps\n0.0005,0.45,0.0011,1.9205,1.6978,1.2742,1.40804,4445\n");
    EXPECT_EQ(monitor_csv({}), monitor_csv_header());
}
