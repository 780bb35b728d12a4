#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "narrowgap/auxfields.hpp"
#include "narrowgap/errors.hpp"

using namespace narrowgap;

namespace {

// Central-difference gradient of f at x.
template <class F>
std::vector<double> fd_gradient(F&& f, std::vector<double> x, double h)
{
    std::vector<double> g(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double xi = x[i];
        x[i] = xi + h;
        const double fp = f(x).value;
        x[i] = xi - h;
        const double fm = f(x).value;
        x[i] = xi;
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

void expect_gradient_matches(const FieldSample& s, const std::vector<double>& fd, double tol)
{
    ASSERT_EQ(s.gradient.size(), fd.size());
    double scale = 1.0;
    for (double v : fd)
        scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < fd.size(); ++i)
        EXPECT_NEAR(s.gradient[i], fd[i], tol * scale) << "component " << i;
}

}  // namespace

TEST(Cutoff, QuinticJetAndPlateaus)
{
    const Cutoff c{1.0, 2.0};
    EXPECT_EQ(c(0.5).f, 1.0);
    EXPECT_EQ(c(2.5).f, 0.0);
    EXPECT_NEAR(c(1.5).f, 0.5, 1e-15);
    const double h = 1e-6;
    for (double r : {1.1, 1.4, 1.9}) {
        EXPECT_NEAR(c(r).d1, (c(r + h).f - c(r - h).f) / (2.0 * h), 1e-8);
        EXPECT_NEAR(c(r).d2, (c(r + h).d1 - c(r - h).d1) / (2.0 * h), 1e-6);
    }
    EXPECT_NEAR(c(1.0 + 1e-9).d1, 0.0, 1e-12);
}

TEST(BoundaryData, S1AndS2ValuesAndGradients)
{
    const BoundaryData s1 = BoundaryData::s1(2.0, 3, Cutoff{0.5, 0.8});
    const std::vector<double> x{0.2, -0.1, 0.3};
    const FieldSample v = s1.evaluate(x);
    EXPECT_NEAR(v.value, 2.0 * std::pow(std::hypot(0.2, -0.1), 3), 1e-15);
    expect_gradient_matches(v, fd_gradient([&](auto& p) { return s1.evaluate(p); }, x, 1e-6), 1e-8);

    const BoundaryData s2 = BoundaryData::s2(1.5, 2, 2, Cutoff{0.5, 0.8});
    const std::vector<double> y{0.3, 0.2, 0.0};
    const FieldSample w = s2.evaluate(y);
    EXPECT_NEAR(w.value, 1.5 * 0.2 * std::hypot(0.3, 0.2), 1e-15);
    expect_gradient_matches(w, fd_gradient([&](auto& p) { return s2.evaluate(p); }, y, 1e-6), 1e-8);

    // inside the transition band of the cutoff
    const std::vector<double> z{0.6, 0.1};
    const BoundaryData s1b = BoundaryData::s1(1.0, 2, Cutoff{0.5, 0.8});
    expect_gradient_matches(s1b.evaluate(z), fd_gradient([&](auto& p) { return s1b.evaluate(p); }, z, 1e-6), 1e-7);
}

TEST(BoundaryData, ClassificationAndScaling)
{
    EXPECT_THROW(BoundaryData::constant(1.0).class_info(), RegimeError);
    EXPECT_EQ(BoundaryData::s1(1.0, 2).class_info().k, 2);
    EXPECT_EQ(BoundaryData::s2(1.0, 1, 1).class_info().cls, BoundaryClass::s2);
    EXPECT_TRUE(BoundaryData::s1(0.0, 2).is_zero());
    EXPECT_TRUE(BoundaryData::constant(1.0).scaled(0.0).is_zero());
    EXPECT_DOUBLE_EQ(BoundaryData::s1(1.0, 2).scaled(3.0).eta(), 3.0);
    EXPECT_THROW(BoundaryData::s1(1.0, 1), DomainError);
    EXPECT_THROW(BoundaryData::s1(1.0, 2).scaled(-1.0), DomainError);
}

TEST(BoundaryData, TabulatedSplineReproducesSmoothData)
{
    std::vector<double> s, v;
    for (int i = 0; i <= 64; ++i) {
        s.push_back(-std::numbers::pi + 2.0 * std::numbers::pi * i / 64);
        v.push_back(std::cos(s.back()));
    }
    v.back() = v.front();
    const BoundaryData d = BoundaryData::tabulated(s, v, true);
    const StripMap map(make_solver_geometry(2, 2, 1.0, 1e-3, 0.25));
    for (double x : {-3.0, -1.0, 0.3, 2.9}) {
        const auto [val, der] = d.along_boundary(map, x);
        EXPECT_NEAR(val, std::cos(x), 1e-5);
        EXPECT_NEAR(der, -std::sin(x), 1e-3);
    }
    EXPECT_THROW(d.evaluate(std::vector<double>{0.0, 0.0}), DomainError);
    EXPECT_THROW(BoundaryData::tabulated({0.0, 1.0}, {0.0, 1.0}, false), ConfigError);
}

TEST(BoundaryData, AlongBoundaryDerivativeMatchesFiniteDifference)
{
    const BoundaryData d = BoundaryData::s1(1.0, 2, Cutoff{1.0, 1.3});
    const StripMap map(make_solver_geometry(2, 3, 1.0, 1e-3, 0.25));
    for (double s : {0.05, 0.6, 1.2, 2.5}) {
        const double h = 1e-6;
        EXPECT_NEAR(d.along_boundary(map, s)[1],
                    (d.along_boundary(map, s + h)[0] - d.along_boundary(map, s - h)[0]) / (2.0 * h), 1e-6);
    }
}

class KeystoneTest : public ::testing::TestWithParam<std::tuple<int, int>> {};

TEST_P(KeystoneTest, UbarBoundaryValuesAndGradient)
{
    const auto [n, m] = GetParam();
    const GapGeometry g = make_solver_geometry(n, m, 1.0, 1e-2, 0.25);
    for (double r : {0.0, 0.05, 0.2, 0.45}) {
        const double delta = gap_delta_radial(g, r);
        std::vector<double> bottom(static_cast<std::size_t>(n), 0.0), top = bottom, mid = bottom;
        bottom[0] = top[0] = mid[0] = r;
        top.back() = g.epsilon + g.h1(r).f;
        mid.back() = 0.3 * delta;
        EXPECT_NEAR(ubar(g, bottom).value, 0.0, 1e-14);
        EXPECT_NEAR(ubar(g, top).value, 1.0, 1e-12);
        EXPECT_NEAR(ubar(g, mid).value, 0.3, 1e-12);
        if (r > 0.0) {
            const FieldSample s = ubar(g, mid);
            expect_gradient_matches(s, fd_gradient([&](auto& p) { return ubar(g, p); }, mid, 1e-7 * delta), 1e-5);
        }
    }
}

TEST_P(KeystoneTest, UbarOnAxisIsVertical)
{
    const auto [n, m] = GetParam();
    const GapGeometry g = make_solver_geometry(n, m, 1.0, 1e-3, 0.25);
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    x.back() = 5e-4;
    const FieldSample s = ubar(g, x);
    EXPECT_NEAR(s.gradient.back(), 1.0 / g.epsilon, 1e-9);
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        EXPECT_EQ(s.gradient[i], 0.0);
}

TEST_P(KeystoneTest, Ubar0InterpolatesData)
{
    const auto [n, m] = GetParam();
    const GapGeometry g = make_solver_geometry(n, m, 1.0, 1e-2, 0.25);
    const BoundaryData phi = BoundaryData::s1(1.0, 2, Cutoff{1.0, 1.3});
    for (double r : {0.05, 0.3}) {
        std::vector<double> bottom(static_cast<std::size_t>(n), 0.0);
        bottom[0] = r;
        std::vector<double> top = bottom, mid = bottom;
        top.back() = g.epsilon + g.h1(r).f;
        mid.back() = 0.5 * gap_delta_radial(g, r);
        EXPECT_NEAR(ubar0(g, phi, bottom).value, r * r, 1e-14);
        EXPECT_NEAR(ubar0(g, phi, top).value, 0.0, 1e-14);
        const double h = 1e-7 * gap_delta_radial(g, r);
        expect_gradient_matches(ubar0(g, phi, mid), fd_gradient([&](auto& p) { return ubar0(g, phi, p); }, mid, h),
                                1e-5);
    }
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    x.back() = 1e-3;
    for (double v : ubar0(g, BoundaryData::constant(0.0), x).gradient)
        EXPECT_EQ(v, 0.0);
}

TEST_P(KeystoneTest, UbarOutsidePatchUsesStripCoordinate)
{
    const auto [n, m] = GetParam();
    const GapGeometry g = make_solver_geometry(n, m, 1.0, 1e-2, 0.25);
    const StripMap map(g);
    const Vec2 p = map.point(1.5, 0.4);
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    x[0] = p[0];
    x.back() = p[1];
    const FieldSample s = ubar(g, x);
    EXPECT_NEAR(s.value, 0.4, 1e-9);
    expect_gradient_matches(s, fd_gradient([&](auto& q) { return ubar(g, q); }, x, 1e-6), 1e-4);
}

TEST_P(KeystoneTest, VbarBlendsIntoPatchTrace)
{
    const auto [n, m] = GetParam();
    const GapGeometry g = make_solver_geometry(n, m, 1.0, 1e-2, 0.25);
    const FieldFunction psi = [](std::span<const double> x) {
        FieldSample s;
        s.point.assign(x.begin(), x.end());
        s.value = 1.0 + x[0];
        s.gradient.assign(x.size(), 0.0);
        s.gradient[0] = 1.0;
        return s;
    };
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    x[0] = 0.1;
    x.back() = 0.5 * gap_delta_radial(g, 0.1);
    EXPECT_NEAR(vbar(g, psi, x).value, 1.1 * 0.5, 1e-12);
    x[0] = 0.45;
    x.back() = 0.5 * gap_delta_radial(g, 0.45);
    expect_gradient_matches(vbar(g, psi, x), fd_gradient([&](auto& q) { return vbar(g, psi, q); }, x, 1e-7), 1e-5);
}

INSTANTIATE_TEST_SUITE_P(Shapes, KeystoneTest, ::testing::Combine(::testing::Values(2, 3), ::testing::Values(2, 4)));

TEST(BoundaryNorm, GrowsWithAmplitude)
{
    const StripMap map(make_solver_geometry(2, 2, 1.0, 1e-3, 0.25));
    const double a = boundary_c2_norm(BoundaryData::s1(1.0, 2, Cutoff{1.0, 1.3}), map);
    const double b = boundary_c2_norm(BoundaryData::s1(2.0, 2, Cutoff{1.0, 1.3}), map);
    EXPECT_GT(a, 0.0);
    EXPECT_NEAR(b / a, 2.0, 1e-12);
    EXPECT_EQ(boundary_c2_norm(BoundaryData::constant(0.0), map), 0.0);
}

TEST(Meridian, ReducesToRadialCoordinate)
{
    const Vec2 a = meridian(std::vector<double>{3.0, 4.0, 7.0});
    EXPECT_DOUBLE_EQ(a[0], 5.0);
    EXPECT_DOUBLE_EQ(a[1], 7.0);
    const Vec2 b = meridian(std::vector<double>{-2.0, 1.0});
    EXPECT_DOUBLE_EQ(b[0], -2.0);
}
