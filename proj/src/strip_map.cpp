#include "narrowgap/strip_map.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "narrowgap/errors.hpp"

namespace narrowgap {

namespace {

constexpr double pi = std::numbers::pi;

double smoothstep(double u) { return u * u * u * (10.0 - 15.0 * u + 6.0 * u * u); }
double smoothstep_d(double u) { return 30.0 * u * u * (1.0 - u) * (1.0 - u); }

Vec2 ray(double phi) { return {std::sin(phi), -std::cos(phi)}; }
Vec2 ray_d(double phi) { return {std::cos(phi), std::sin(phi)}; }

double cross(const Vec2& a, const Vec2& b) { return a[0] * b[1] - a[1] * b[0]; }
double dot(const Vec2& a, const Vec2& b) { return a[0] * b[0] + a[1] * b[1]; }

}  // namespace

StripMap::StripMap(const GapGeometry& g, double excision) : n_(g.n), m_(g.m), eps_(g.epsilon), sigma_(excision)
{
    g.validate();
    if (!g.outer)
        throw DomainError("strip map needs an outer_domain descriptor");
    if (g.n != 2 && g.n != 3)
        throw DomainError(fmt::format("reference solver supports n = 2 and axisymmetric n = 3, got n = {}", g.n));
    const OuterDomain& o = *g.outer;
    a_ = o.inclusion_half_width;
    b_ = 2.0 * g.lambda * std::pow(a_, m_);
    rB_ = o.outer_radius > 0.0 ? o.outer_radius : 1.6 * std::max(a_, b_) + 0.5;
    if (rB_ <= std::max(a_, b_) + eps_)
        throw DomainError("outer_radius must exceed the inclusion extent");
    Xv_ = o.vertical_fraction * a_;
    Xw_ = o.blend_fraction * a_;
    s_v_ = std::atan(Xv_ / b_);
    s_w_ = std::atan(Xw_ / b_);
    s_1_ = std::atan(o.flat_fraction * a_ / b_);
    s_2_ = s_1_ + o.cap_blend_angle;
    if (s_2_ >= pi)
        throw DomainError("cap blend extends past the top of the domain");
    if (b_ / std::cos(s_1_) >= rB_)
        throw DomainError("outer_radius too small for the flat bottom extent");

    // quintic Hermite from b/cos(s) (value, slope, curvature) to the constant rB
    const double L = s_2_ - s_1_;
    const double c1 = std::cos(s_1_), sn = std::sin(s_1_);
    const double f0 = b_ / c1;
    const double f1 = b_ * sn / (c1 * c1);
    const double f2 = b_ * (1.0 / c1 + 2.0 * sn * sn / (c1 * c1 * c1));
    const double a0 = f0, a1 = f1 * L, a2 = f2 * L * L / 2.0;
    const double D0 = rB_ - a0 - a1 - a2;
    const double D1 = -a1 - 2.0 * a2;
    const double D2 = -2.0 * a2;
    cap_ = {a0, a1, a2, 10.0 * D0 - 4.0 * D1 + D2 / 2.0, -15.0 * D0 + 7.0 * D1 - D2, 6.0 * D0 - 3.0 * D1 + D2 / 2.0};

    if (sigma_ < 0.0 || sigma_ >= Xv_)
        throw DomainError("excision radius must lie in [0, vertical zone)");
    const double s_sig = sigma_ > 0.0 ? std::atan(sigma_ / b_) : 0.0;
    if (n_ == 2) {
        periodic_ = sigma_ == 0.0;
        s_min_ = periodic_ ? -pi : s_sig;
        s_max_ = periodic_ ? pi : 2.0 * pi - s_sig;
    } else {
        periodic_ = false;
        s_min_ = s_sig;
        s_max_ = pi;
    }
}

Jet StripMap::h1(double x) const { return superellipse_bottom(x, a_, b_, m_); }

std::array<double, 3> StripMap::outer_rho(double s) const
{
    if (s <= s_1_) {
        const double c = std::cos(s), sn = std::sin(s);
        return {b_ / c, b_ * sn / (c * c), b_ * (1.0 / c + 2.0 * sn * sn / (c * c * c))};
    }
    if (s >= s_2_)
        return {rB_, 0.0, 0.0};
    const double L = s_2_ - s_1_;
    const double u = (s - s_1_) / L;
    double f = 0.0, d1 = 0.0, d2 = 0.0;
    for (int i = 5; i >= 0; --i) {
        d2 = d2 * u + 2.0 * d1;
        d1 = d1 * u + f;
        f = f * u + cap_[i];
    }
    return {f, d1 / L, d2 / (L * L)};
}

std::array<double, 2> StripMap::inclusion_radius(double phi) const
{
    const Vec2 e = ray(phi);
    const Vec2 ed = ray_d(phi);
    const double yc = b_ + eps_;
    auto grad = [&](const Vec2& P) -> Vec2 {
        const double q = std::abs(P[0]) / a_;
        return {std::copysign(m_ * std::pow(q, m_ - 1) / a_, P[0]), 2.0 * (P[1] - yc) / (b_ * b_)};
    };
    double rho = 2.0 * std::max(a_, b_) + eps_;
    for (int it = 0; it < 400; ++it) {
        const Vec2 P{rho * e[0], b_ + rho * e[1]};
        const double F = std::pow(std::abs(P[0]) / a_, m_) + std::pow((P[1] - yc) / b_, 2) - 1.0;
        const double dF = dot(grad(P), e);
        const double step = F / dF;
        rho -= step;
        if (std::abs(step) <= 1e-15 * rho) {
            const Vec2 Q{rho * e[0], b_ + rho * e[1]};
            const Vec2 gq = grad(Q);
            return {rho, -rho * dot(gq, ed) / dot(gq, e)};
        }
    }
    throw MeshError(fmt::format("inclusion radius did not converge at angle {}", phi));
}

StripSection StripMap::half_section(double s) const
{
    StripSection out;
    const auto [rho, rho1, rho2] = outer_rho(s);
    (void)rho2;
    if (s <= s_1_) {
        const double c = std::cos(s);
        out.B = {b_ * std::tan(s), 0.0};
        out.dB = {b_ / (c * c), 0.0};
    } else {
        const Vec2 e = ray(s), ed = ray_d(s);
        out.B = {rho * e[0], b_ + rho * e[1]};
        out.dB = {rho1 * e[0] + rho * ed[0], rho1 * e[1] + rho * ed[1]};
    }
    if (s <= s_v_) {
        const double c = std::cos(s);
        const double x = b_ * std::tan(s);
        const double x1 = b_ / (c * c);
        const Jet h = h1(x);
        out.A = {x, eps_ + h.f};
        out.dA = {x1, h.d1 * x1};
        return out;
    }
    double phi = s, phi1 = 1.0;
    if (s < s_w_) {
        const double span = s_w_ - s_v_;
        const double u = (s - s_v_) / span;
        const double w = smoothstep(u), w1 = smoothstep_d(u) / span;
        const double c = std::cos(s);
        const double x = b_ * std::tan(s);
        const double x1 = b_ / (c * c);
        const Jet h = h1(x);
        const double y = eps_ + h.f, y1 = h.d1 * x1;
        const double H = b_ - y;
        const double pv = std::atan2(x, H);
        const double pv1 = (H * x1 + x * y1) / (x * x + H * H);
        phi = (1.0 - w) * pv + w * s;
        phi1 = w1 * (s - pv) + (1.0 - w) * pv1 + w;
    }
    const auto [ra, ra1] = inclusion_radius(phi);
    const Vec2 e = ray(phi), ed = ray_d(phi);
    out.A = {ra * e[0], b_ + ra * e[1]};
    out.dA = {(ra1 * e[0] + ra * ed[0]) * phi1, (ra1 * e[1] + ra * ed[1]) * phi1};
    return out;
}

StripSection StripMap::section(double s) const
{
    if (s > pi)
        s -= 2.0 * pi;
    else if (s < -pi)
        s += 2.0 * pi;
    if (s >= 0.0)
        return half_section(std::min(s, pi));
    StripSection h = half_section(std::min(-s, pi));
    h.B[0] = -h.B[0];
    h.A[0] = -h.A[0];
    h.dB[1] = -h.dB[1];
    h.dA[1] = -h.dA[1];
    return h;
}

Vec2 StripMap::point(double s, double t) const
{
    const StripSection q = section(s);
    return {(1.0 - t) * q.B[0] + t * q.A[0], (1.0 - t) * q.B[1] + t * q.A[1]};
}

double StripMap::s_of_abscissa(double x) const
{
    if (std::abs(x) > Xv_ * (1.0 + 1e-12))
        throw DomainError("abscissa outside the vertical mesh zone");
    return std::atan(x / b_);
}

std::optional<Vec2> StripMap::locate(const Vec2& x) const
{
    constexpr double tol = 1e-10;
    if (n_ == 3 && x[0] < 0.0)
        return std::nullopt;
    const double ax = std::abs(x[0]);
    if (ax <= Xv_ && x[1] <= eps_ + h1(ax).f + tol && x[1] >= -tol) {
        if (ax < sigma_ * (1.0 - 1e-12))
            return std::nullopt;
        const double top = eps_ + h1(ax).f;
        if (!(top > 0.0))
            return std::nullopt;
        double s = std::atan(x[0] / b_);
        if (n_ == 2 && !periodic_ && s < 0.0)
            s += 2.0 * pi;
        return Vec2{s, std::clamp(x[1] / top, 0.0, 1.0)};
    }
    auto residual = [&](double s, double& t) {
        const StripSection q = section(s);
        const Vec2 d{q.A[0] - q.B[0], q.A[1] - q.B[1]};
        const Vec2 p{x[0] - q.B[0], x[1] - q.B[1]};
        t = dot(p, d) / dot(d, d);
        return cross(d, p);
    };
    const int K = 1024;
    double t_prev = 0.0;
    double s_prev = s_min_;
    double g_prev = residual(s_prev, t_prev);
    for (int i = 1; i <= K; ++i) {
        const double s = s_min_ + (s_max_ - s_min_) * i / K;
        double t = 0.0;
        const double gv = residual(s, t);
        if ((g_prev <= 0.0) != (gv <= 0.0) && t_prev > -0.5 && t_prev < 1.5) {
            double lo = s_prev, hi = s, glo = g_prev;
            for (int it = 0; it < 80; ++it) {
                const double mid = 0.5 * (lo + hi);
                double tm = 0.0;
                const double gm = residual(mid, tm);
                if ((gm <= 0.0) == (glo <= 0.0)) {
                    lo = mid;
                    glo = gm;
                } else {
                    hi = mid;
                }
            }
            const double sr = 0.5 * (lo + hi);
            double tr = 0.0;
            residual(sr, tr);
            if (tr >= -tol && tr <= 1.0 + tol)
                return Vec2{sr, std::clamp(tr, 0.0, 1.0)};
        }
        s_prev = s;
        g_prev = gv;
        t_prev = t;
    }
    return std::nullopt;
}

}  // namespace narrowgap
