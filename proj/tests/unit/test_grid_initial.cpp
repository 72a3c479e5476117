#include <gtest/gtest.h>

#include <cmath>

#include "singshock/grid.hpp"
#include "singshock/initial.hpp"

using namespace singshock;

TEST(Grid, FromWidth) {
    const auto g = GridSpec::from_width(-4.0, 4.0, 0.04);
    EXPECT_EQ(g.n_cells, 200u);
    EXPECT_DOUBLE_EQ(g.left_edge(0), -4.0);
    EXPECT_DOUBLE_EQ(g.center(0), -3.98);
    EXPECT_DOUBLE_EQ(g.length(), 8.0);
}

TEST(Grid, WidthsThatDoNotDivideAreRejected) {
    EXPECT_THROW(GridSpec::from_width(0.0, 1.0, 0.3), ConfigError);
    EXPECT_THROW(GridSpec::from_width(0.0, 1.0, 0.0), ConfigError);
    EXPECT_THROW(GridSpec::from_width(0.0, 1.0, -0.1), ConfigError);
    EXPECT_THROW(GridSpec::from_width(1.0, 0.0, 0.1), ConfigError);
    EXPECT_THROW(GridSpec::from_width(0.0, 1.0, 2.0), ConfigError);
    EXPECT_THROW(GridSpec::from_width(0.0, 1.0, std::nan("")), ConfigError);
}

TEST(Grid, RepeatingDecimalWidths) {
    EXPECT_EQ(GridSpec::from_width(-0.5, 0.5, 1.0 / 12000.0).n_cells, 12000u);
    EXPECT_EQ(GridSpec::from_width(-0.5, 0.5, 0.0000125).n_cells, 80000u);
}

TEST(Grid, FromCount) {
    const auto g = GridSpec::from_count(-1.0, 1.0, 8);
    EXPECT_DOUBLE_EQ(g.h, 0.25);
    EXPECT_THROW(GridSpec::from_count(-1.0, 1.0, 0), ConfigError);
}

TEST(StateField, ValidateRejectsNonFiniteAndShapeMismatch) {
    const auto g = GridSpec::from_count(0.0, 1.0, 4);
    auto s = StateField::constant(g, 1.0, 2.0);
    EXPECT_NO_THROW(validate(s));
    s.v[2] = INFINITY;
    EXPECT_THROW(validate(s), ConfigError);
    s.v[2] = 0.0;
    s.u.pop_back();
    EXPECT_THROW(validate(s), ConfigError);
}

TEST(Reductions, SequentialOrder) {
    EXPECT_EQ(sum({1.0, -2.0, 3.5}), 2.5);
    EXPECT_EQ(sum_abs({1.0, -2.0, 3.5}), 6.5);
    EXPECT_EQ(max_abs({1.0, -7.0, 3.5}), 7.0);
    EXPECT_EQ(max_abs({}), 0.0);
}

TEST(Discretize, JumpOnCellEdge) {
    const auto g = GridSpec::from_width(-4.0, 4.0, 0.04);
    const RiemannData ic{1.5, 0.0, -2.065426, 1.410639, 0.0};
    const auto s = discretize_initial(ic, g);
    for (std::size_t i = 0; i < g.n_cells; ++i) {
        if (g.center(i) < 0.0) {
            EXPECT_EQ(s.u[i], 1.5);
            EXPECT_EQ(s.v[i], 0.0);
        } else {
            EXPECT_EQ(s.u[i], -2.065426);
            EXPECT_EQ(s.v[i], 1.410639);
        }
    }
}

TEST(Discretize, JumpAtCellCenterAveragesStates) {
    const auto g = GridSpec::from_count(0.0, 1.0, 8);
    const RiemannData ic{1.0, 2.0, -1.0, 4.0, 0.4375};  // center of cell 3
    const auto s = discretize_initial(ic, g);
    EXPECT_EQ(s.u[3], 0.0);
    EXPECT_EQ(s.v[3], 3.0);
    EXPECT_EQ(s.u[2], 1.0);
    EXPECT_EQ(s.u[4], -1.0);
}

TEST(Discretize, ConstantData) {
    const auto g = GridSpec::from_count(0.0, 1.0, 7);
    const auto s = discretize_initial(RiemannData{0.3, -1.0, 0.3, -1.0, 0.5}, g);
    for (std::size_t i = 0; i < 7; ++i) {
        EXPECT_EQ(s.u[i], 0.3);
        EXPECT_EQ(s.v[i], -1.0);
    }
    EXPECT_EQ(s.t, 0.0);
    EXPECT_EQ(s.n, 0);
}

TEST(Discretize, JumpOutsideDomain) {
    const auto g = GridSpec::from_count(0.0, 1.0, 10);
    EXPECT_THROW(discretize_initial(RiemannData{1, 0, 0, 0, 1.5}, g), ConfigError);
    EXPECT_THROW(discretize_initial(RiemannData{1, 0, 0, 0, 0.0}, g), ConfigError);
}

TEST(Discretize, TabulatedMeansAreExactForLinearData) {
    const auto g = GridSpec::from_count(0.0, 1.0, 4);
    const TabulatedProfile p{{0.0, 1.0}, {0.0, 2.0}, {1.0, 1.0}};
    const auto s = discretize_initial(InitialData{p}, g);
    for (std::size_t i = 0; i < 4; ++i) {
        EXPECT_NEAR(s.u[i], 2.0 * g.center(i), 1e-15);
        EXPECT_EQ(s.v[i], 1.0);
    }
}

TEST(Discretize, TabulatedKinkAndExtension) {
    // hat with peak 1 at x = 0.5, constant 0 beyond [0.25, 0.75]
    const auto g = GridSpec::from_count(0.0, 1.0, 2);
    const TabulatedProfile p{{0.25, 0.5, 0.75}, {0.0, 1.0, 0.0}, {3.0, 3.0, 3.0}};
    const auto s = discretize_initial(p, g);
    EXPECT_NEAR(s.u[0], 0.25, 1e-15);
    EXPECT_NEAR(s.u[1], 0.25, 1e-15);
    EXPECT_THROW(discretize_initial(TabulatedProfile{{0.5, 0.2}, {1, 1}, {1, 1}}, g), ConfigError);
    EXPECT_THROW(discretize_initial(TabulatedProfile{}, g), ConfigError);
}
