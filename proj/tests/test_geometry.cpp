#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "narrowgap/errors.hpp"
#include "narrowgap/geometry.hpp"
#include "narrowgap/strip_map.hpp"

using namespace narrowgap;

namespace {

constexpr double pi = std::numbers::pi;

double fd1(const RadialProfile& p, double r, double h) { return (p(r + h).f - p(r - h).f) / (2.0 * h); }
double fd2(const RadialProfile& p, double r, double h) { return (p(r + h).f - 2.0 * p(r).f + p(r - h).f) / (h * h); }

double jacobian(const StripMap& map, double s, double t)
{
    const StripSection q = map.section(s);
    const double xs0 = (1.0 - t) * q.dB[0] + t * q.dA[0];
    const double xs1 = (1.0 - t) * q.dB[1] + t * q.dA[1];
    return xs0 * (q.A[1] - q.B[1]) - xs1 * (q.A[0] - q.B[0]);
}

}  // namespace

TEST(RadialProfile, MonomialAndPolynomialJets)
{
    const RadialProfile p = RadialProfile::monomial(2.0, 3.0);
    const Jet j = p(0.5);
    EXPECT_DOUBLE_EQ(j.f, 0.25);
    EXPECT_DOUBLE_EQ(j.d1, 1.5);
    EXPECT_DOUBLE_EQ(j.d2, 6.0);

    const RadialProfile q = RadialProfile::polynomial({1.0, 0.0, 3.0});
    EXPECT_DOUBLE_EQ(q(2.0).f, 13.0);
    EXPECT_DOUBLE_EQ(q(2.0).d1, 12.0);
    EXPECT_DOUBLE_EQ(q(2.0).d2, 6.0);
    EXPECT_TRUE(RadialProfile().is_zero());
}

TEST(Superellipse, MatchesLeadingTermAndFiniteDifferences)
{
    for (int m : {2, 3, 4, 6}) {
        const double a = 1.2, b = 2.0 * std::pow(a, m);
        const RadialProfile h1([a, b, m](double r) { return superellipse_bottom(r, a, b, m); }, "se");
        for (double r : {1e-3, 1e-2, 0.1, 0.3}) {
            const Jet j = h1(r);
            // b(1 - sqrt(1 - u)) = b u/2 + b u^2/8 + ..., u = (r/a)^m
            const double u = std::pow(r / a, m);
            EXPECT_NEAR(j.f / std::pow(r, m), 1.0 + u / 4.0, 2.0 * u * u + 1e-14);
            EXPECT_NEAR(j.d1, fd1(h1, r, 1e-6 * r), 1e-6 * std::abs(j.d1) + 1e-12);
            EXPECT_NEAR(j.d2, fd2(h1, r, 1e-4 * r), 1e-5 * std::abs(j.d2) + 1e-8);
        }
    }
}

TEST(GapGeometry, DeltaOnPatchGeometry)
{
    const GapGeometry g = make_patch_geometry(2, 4, 1.5, 1e-3, 0.2);
    for (double r : {0.0, 0.05, 0.1, 0.4}) {
        const std::vector<double> z{r};
        EXPECT_NEAR(gap_delta(g, z), 1e-3 + 1.5 * std::pow(r, 4), 1e-15);
    }
    EXPECT_THROW(gap_delta_radial(g, 0.41), DomainError);

    GapGeometry touching = g.with_epsilon(0.0);
    EXPECT_THROW(gap_delta_radial(touching, 0.0), SingularGeometryError);
}

TEST(GapGeometry, DeltaJetMatchesFiniteDifferences)
{
    const GapGeometry g = make_solver_geometry(3, 3, 1.0, 1e-3, 0.25);
    for (double r : {0.01, 0.1, 0.3}) {
        const Jet d = gap_delta_jet(g, r);
        const double h = 1e-6;
        EXPECT_NEAR(d.d1, (gap_delta_radial(g, r + h) - gap_delta_radial(g, r - h)) / (2.0 * h), 1e-7);
    }
}

TEST(GapGeometry, ValidationRejectsInconsistentParameters)
{
    EXPECT_THROW(make_solver_geometry(2, 2, 1.0, 1e-3, 0.4), DomainError);  // 2R beyond the vertical zone
    EXPECT_THROW(make_solver_geometry(2, 1, 1.0, 1e-3, 0.25), DomainError);
    EXPECT_THROW(make_solver_geometry(2, 2, -1.0, 1e-3, 0.25), DomainError);
    OuterDomain bad;
    bad.vertical_fraction = 0.95;
    EXPECT_THROW(make_solver_geometry(2, 2, 1.0, 1e-3, 0.1, bad), DomainError);
}

TEST(GapGeometry, BoundaryNormalIsUnitAndDownward)
{
    const GapGeometry g = make_patch_geometry(3, 2, 1.0, 1e-3, 0.25);
    const std::vector<double> z{0.1, 0.2};
    const auto nu = boundary_normal(g, z);
    ASSERT_EQ(nu.size(), 3u);
    EXPECT_NEAR(nu[0] * nu[0] + nu[1] * nu[1] + nu[2] * nu[2], 1.0, 1e-14);
    EXPECT_LT(nu[2], 0.0);
    // parallel to (grad h1, -1) with grad h1 = 2 x'
    EXPECT_NEAR(nu[0] / nu[2], -0.2, 1e-14);
    EXPECT_NEAR(nu[1] / nu[2], -0.4, 1e-14);
}

TEST(Hypotheses, SolverGeometriesSatisfyThem)
{
    for (int n : {2, 3})
        for (int m = 2; m <= 8; ++m) {
            const HypothesisReport rep = check_hypotheses(make_solver_geometry(n, m, 1.0, 1e-3, 0.25), 256);
            EXPECT_TRUE(rep.all_pass()) << "n=" << n << " m=" << m << " H1 " << rep.h1.worst_ratio << " H2 "
                                        << rep.h2.worst_ratio << " H3 " << rep.h3.worst_ratio;
            EXPECT_LT(rep.correction_residual, 0.1);
        }
}

TEST(Hypotheses, TightBoundsFail)
{
    GapGeometry g = make_solver_geometry(2, 2, 1.0, 1e-3, 0.25);
    g.kappa1 = 1e-6;
    g.kappa2 = 1e-6;
    const HypothesisReport rep = check_hypotheses(g, 64);
    EXPECT_FALSE(rep.h1.pass);
    EXPECT_FALSE(rep.h2.pass);
    EXPECT_FALSE(rep.all_pass());
    EXPECT_THROW(check_hypotheses(g, 4), DomainError);
}

TEST(Hypotheses, ExactMonomialHasNoCorrection)
{
    const HypothesisReport rep = check_hypotheses(make_patch_geometry(2, 4, 1.0, 1e-3, 0.25), 64);
    EXPECT_EQ(rep.h1.worst_ratio, 0.0);
    EXPECT_TRUE(rep.all_pass());
}

TEST(InGap, InteriorAndExterior)
{
    const GapGeometry g = make_patch_geometry(2, 2, 1.0, 1e-2, 0.25);
    EXPECT_TRUE(in_gap(g, std::vector<double>{0.0, 5e-3}, 0.25));
    EXPECT_FALSE(in_gap(g, std::vector<double>{0.0, 2e-2}, 0.25));
    EXPECT_FALSE(in_gap(g, std::vector<double>{0.3, 5e-3}, 0.25));
    EXPECT_THROW(in_gap(g, std::vector<double>{0.0}, 0.25), DomainError);
}

class StripMapTest : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(StripMapTest, EndpointsLieOnBothBoundaries)
{
    const auto [n, m] = GetParam();
    const GapGeometry g = make_solver_geometry(n, m, 1.0, 1e-3, 0.25);
    const StripMap map(g);
    const double a = map.half_width(), b = map.centre_height();
    for (int i = 0; i <= 400; ++i) {
        const double s = map.s_min() + (map.s_max() - map.s_min()) * i / 400.0;
        const StripSection q = map.section(s);
        const double F = std::pow(std::abs(q.A[0]) / a, m) + std::pow((q.A[1] - 1e-3 - b) / b, 2);
        EXPECT_NEAR(F, 1.0, 1e-9) << "s=" << s;
        if (std::abs(q.B[0]) <= 0.9 * a && q.B[1] < b) {
            EXPECT_NEAR(q.B[1], 0.0, 1e-12);
        }
    }
}

TEST_P(StripMapTest, JacobianPositiveEverywhere)
{
    const auto [n, m] = GetParam();
    for (double eps : {1e-2, 1e-4, 1e-6}) {
        const StripMap map(make_solver_geometry(n, m, 1.0, eps, 0.25));
        for (int i = 0; i <= 2000; ++i) {
            const double s = map.s_min() + (map.s_max() - map.s_min()) * i / 2000.0;
            if (n == 3 && (i == 0 || i == 2000))
                continue;
            for (double t : {0.0, 0.5, 1.0})
                EXPECT_GT(jacobian(map, s, t), 0.0) << "eps=" << eps << " s=" << s << " t=" << t;
        }
    }
}

TEST_P(StripMapTest, LocateInvertsPoint)
{
    const auto [n, m] = GetParam();
    const StripMap map(make_solver_geometry(n, m, 1.0, 1e-3, 0.25));
    for (double s : {0.01, 0.2, 0.5, 1.0, 2.0, 3.0}) {
        for (double t : {0.1, 0.5, 0.9}) {
            const Vec2 x = map.point(s, t);
            const auto st = map.locate(x);
            ASSERT_TRUE(st.has_value()) << s << ' ' << t;
            const Vec2 y = map.point((*st)[0], (*st)[1]);
            EXPECT_NEAR(y[0], x[0], 1e-9);
            EXPECT_NEAR(y[1], x[1], 1e-9);
        }
    }
}

TEST_P(StripMapTest, VerticalZoneParameterIsNormalisedHeight)
{
    const auto [n, m] = GetParam();
    const GapGeometry g = make_solver_geometry(n, m, 1.0, 1e-3, 0.25);
    const StripMap map(g);
    for (double x : {0.0, 1e-3, 0.1, 0.5}) {
        const double s = map.s_of_abscissa(x);
        const double delta = g.epsilon + g.h1(x).f;
        for (double t : {0.0, 0.25, 1.0}) {
            const Vec2 p = map.point(s, t);
            EXPECT_NEAR(p[0], x, 1e-13);
            EXPECT_NEAR(p[1], t * delta, 1e-13 + 1e-12 * delta);
        }
    }
    EXPECT_THROW(map.s_of_abscissa(0.9 * map.half_width()), DomainError);
}

INSTANTIATE_TEST_SUITE_P(Shapes, StripMapTest,
                         ::testing::Combine(::testing::Values(2, 3), ::testing::Values(2, 3, 4, 6)));

TEST(StripMap, ExcisionTrimsParameterRange)
{
    const GapGeometry g = make_solver_geometry(2, 2, 1.0, 0.0, 0.25);
    const StripMap map(g, 1e-3);
    EXPECT_NEAR(map.s_min(), std::atan(1e-3 / map.centre_height()), 1e-15);
    EXPECT_NEAR(map.s_max(), 2.0 * pi - map.s_min(), 1e-13);
    EXPECT_FALSE(map.periodic());
    EXPECT_FALSE(map.locate(Vec2{5e-4, 1e-7}).has_value());
    EXPECT_TRUE(map.locate(Vec2{2e-3, 1e-6}).has_value());
}
