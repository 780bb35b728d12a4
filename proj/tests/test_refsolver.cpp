#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "narrowgap/errors.hpp"
#include "narrowgap/refsolver.hpp"

using namespace narrowgap;

namespace {

constexpr double pi = std::numbers::pi;

const Resolution coarse{8, 8, 32, 0};

}  // namespace

class SolverShapes : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(SolverShapes, ConstantDataFluxEqualsEnergy)
{
    const auto [n, m] = GetParam();
    for (int refine : {0, 1}) {
        Resolution res = coarse;
        res.refine = refine;
        const SolveResult r = solve(make_solver_geometry(n, m, 1.0, 1e-3, 0.25), BoundaryData::constant(1.0), res);
        EXPECT_NEAR(r.Q / r.a11, 1.0, 1e-10);
        EXPECT_NEAR(r.C1, 1.0, 1e-10);
        EXPECT_NEAR(r.u.min_value(), 1.0, 1e-9);
        EXPECT_NEAR(r.u.max_value(), 1.0, 1e-9);
    }
}

TEST_P(SolverShapes, MaximumPrinciple)
{
    const auto [n, m] = GetParam();
    const GapGeometry g = make_solver_geometry(n, m, 1.0, 1e-3, 0.25);
    const DiscreteField v1 = solve_v1(g, coarse);
    EXPECT_GE(v1.min_value(), -1e-10);
    EXPECT_LE(v1.max_value(), 1.0 + 1e-10);
    const BoundaryData phi = BoundaryData::s1(1.0, 2, Cutoff{1.0, 1.3});
    const DiscreteField v0 = solve_v0(g, phi, coarse);
    // Q2 has no discrete maximum principle; allow a small undershoot on coarse meshes
    const double slack = 1e-2 * (v0.max_boundary_value() - v0.min_boundary_value());
    EXPECT_GE(v0.min_value(), v0.min_boundary_value() - slack);
    EXPECT_LE(v0.max_value(), v0.max_boundary_value() + slack);
}

TEST_P(SolverShapes, EnergyGrowsAsGapCloses)
{
    const auto [n, m] = GetParam();
    double prev = 0.0;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const double a11 = energy_a11(solve_v1(make_solver_geometry(n, m, 1.0, eps, 0.25), coarse));
        EXPECT_GT(a11, prev) << "eps=" << eps;
        prev = a11;
    }
}

INSTANTIATE_TEST_SUITE_P(Shapes, SolverShapes, ::testing::Combine(::testing::Values(2, 3), ::testing::Values(2, 4)));

TEST(Solver, FluxIsLinearInData)
{
    const GapGeometry g = make_solver_geometry(2, 3, 1.0, 1e-3, 0.25);
    const BoundaryData phi = BoundaryData::s1(1.0, 2, Cutoff{1.0, 1.3});
    const double q1 = solve(g, phi, coarse).Q;
    const double q3 = solve(g, phi.scaled(3.0), coarse).Q;
    EXPECT_NEAR(q3 / q1, 3.0, 1e-10);
    const double q0 = solve(g, BoundaryData::constant(0.0), coarse).Q;
    EXPECT_EQ(q0, 0.0);
}

TEST(Solver, BoundaryQuadratureAgreesWithVariationalFlux)
{
    for (int n : {2, 3}) {
        const GapGeometry g = make_solver_geometry(n, 2, 1.0, 1e-2, 0.25);
        const SolveResult r = solve(g, BoundaryData::s1(1.0, 2, Cutoff{1.0, 1.3}), Resolution{12, 16, 64, 1});
        EXPECT_NEAR(r.Q_boundary / r.Q, 1.0, 1e-2) << "n=" << n;
    }
}

TEST(Solver, NarrowGapEnergyMatchesLubricationLimit)
{
    // a11 ~ int dx / (eps + x^2) = pi / sqrt(eps) for n = 2, m = 2
    const double eps = 1e-4;
    const double a11 = energy_a11(solve_v1(make_solver_geometry(2, 2, 1.0, eps, 0.25), Resolution{}));
    EXPECT_NEAR(a11 * std::sqrt(eps) / pi, 1.0, 0.05);
}

TEST(Solver, MeshRefinementConverges)
{
    const GapGeometry g = make_solver_geometry(2, 2, 1.0, 1e-2, 0.25);
    std::vector<double> a;
    for (int refine : {0, 1, 2})
        a.push_back(energy_a11(solve_v1(g, Resolution{6, 8, 32, refine})));
    const double order = std::log2(std::abs(a[0] - a[1]) / std::abs(a[1] - a[2]));
    EXPECT_GT(order, 1.5);
}

TEST(Solver, OddDataHasNoFluxInPlane)
{
    const GapGeometry g = make_solver_geometry(2, 2, 1.0, 1e-3, 0.25);
    const SolveResult r = solve(g, BoundaryData::s2(1.0, 1, 1, Cutoff{1.0, 1.3}), coarse);
    EXPECT_LT(std::abs(r.Q), 1e-10 * r.a11);
    EXPECT_THROW(solve(make_solver_geometry(3, 2, 1.0, 1e-3, 0.25), BoundaryData::s2(1.0, 1, 1), coarse),
                 DomainError);
}

TEST(Solver, RejectsBadInputs)
{
    const GapGeometry g = make_solver_geometry(2, 2, 1.0, 1e-3, 0.25);
    EXPECT_THROW(solve(g, BoundaryData::constant(1.0), Resolution{0, 8, 32, 0}), DomainError);
    EXPECT_THROW(solve(g, BoundaryData::constant(1.0), Resolution{8, 4, 32, 0}), DomainError);
    EXPECT_THROW(solve(g.with_epsilon(0.0), BoundaryData::constant(1.0), coarse), DomainError);
    const DiscreteField v1 = solve_v1(g, coarse);
    EXPECT_THROW(flux_Q(v1, g.with_epsilon(1e-2)), DomainError);
}

TEST(Touching, ChecksDefinedness)
{
    const GapGeometry star = make_solver_geometry(2, 2, 1.0, 0.0, 0.25);
    EXPECT_THROW(solve_touching(star.with_epsilon(1e-3), BoundaryData::s1(1.0, 2), 1e-3, coarse), DomainError);
    EXPECT_THROW(solve_touching(star, std::nullopt, 1e-3, coarse), DomainError);
    EXPECT_THROW(solve_touching(make_solver_geometry(2, 4, 1.0, 0.0, 0.25), BoundaryData::s1(1.0, 2), 1e-3, coarse),
                 DomainError);
    EXPECT_THROW(solve_touching(star, BoundaryData::constant(1.0), 1e-3, coarse), DomainError);
}

TEST(Touching, ExcisionLimitIsStable)
{
    const GapGeometry star = make_solver_geometry(2, 2, 1.0, 0.0, 0.25);
    const LimitQuantities lq = solve_touching(star, BoundaryData::s1(1.0, 2, Cutoff{1.0, 1.3}), 2.5e-4, Resolution{});
    ASSERT_TRUE(lq.Q_star && lq.Q_star_half_sigma && lq.Q_star_richardson);
    EXPECT_GT(*lq.Q_star, 0.0);
    EXPECT_NEAR(*lq.Q_star_half_sigma / *lq.Q_star, 1.0, 1e-2);
    EXPECT_DOUBLE_EQ(lq.cutoff_sigma, 2.5e-4);
    EXPECT_FALSE(lq.a11_star.has_value());
}

TEST(Touching, ApproachedByNarrowGapFlux)
{
    const BoundaryData phi = BoundaryData::s1(1.0, 2, Cutoff{1.0, 1.3});
    const LimitQuantities lq =
        solve_touching(make_solver_geometry(2, 2, 1.0, 0.0, 0.25), phi, 2.5e-4, Resolution{});
    double prev = 1e300;
    for (double eps : {1e-2, 1e-3, 1e-4}) {
        const double gap = std::abs(solve(make_solver_geometry(2, 2, 1.0, eps, 0.25), phi, Resolution{}).Q -
                                    *lq.Q_star_half_sigma);
        EXPECT_LT(gap, prev) << "eps=" << eps;
        prev = gap;
    }
}
