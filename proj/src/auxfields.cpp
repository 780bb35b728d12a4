#include "narrowgap/auxfields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_interp.h>

#include "narrowgap/errors.hpp"

namespace narrowgap {

Jet Cutoff::operator()(double r) const
{
    if (r <= inner)
        return {1.0, 0.0, 0.0};
    if (r >= outer)
        return {0.0, 0.0, 0.0};
    const double L = outer - inner;
    const double u = (r - inner) / L;
    const double s = u * u * u * (10.0 - 15.0 * u + 6.0 * u * u);
    const double s1 = 30.0 * u * u * (1.0 - u) * (1.0 - u);
    const double s2 = 60.0 * u - 180.0 * u * u + 120.0 * u * u * u;
    return {1.0 - s, -s1 / L, -s2 / (L * L)};
}

Jet patch_cutoff(double r, double R) { return Cutoff{1.5 * R, 2.0 * R}(r); }

struct BoundaryData::Spline {
    std::vector<double> s;
    std::vector<double> v;
    bool periodic = false;
    gsl_interp* interp = nullptr;

    Spline(std::vector<double> s_, std::vector<double> v_, bool per) : s(std::move(s_)), v(std::move(v_)), periodic(per)
    {
        interp = gsl_interp_alloc(periodic ? gsl_interp_cspline_periodic : gsl_interp_cspline, s.size());
        if (gsl_interp_init(interp, s.data(), v.data(), s.size()) != GSL_SUCCESS)
            throw ConfigError("tabulated boundary data rejected by the spline");
    }
    ~Spline() { gsl_interp_free(interp); }
    Spline(const Spline&) = delete;
    Spline& operator=(const Spline&) = delete;

    std::array<double, 2> eval(double x) const
    {
        const double lo = s.front(), hi = s.back();
        if (periodic) {
            const double P = hi - lo;
            x = lo + std::fmod(std::fmod(x - lo, P) + P, P);
        }
        x = std::clamp(x, lo, hi);
        return {gsl_interp_eval(interp, s.data(), v.data(), x, nullptr),
                gsl_interp_eval_deriv(interp, s.data(), v.data(), x, nullptr)};
    }
};

BoundaryData BoundaryData::constant(double value)
{
    BoundaryData d;
    d.kind_ = BoundaryKind::constant;
    d.constant_ = value;
    return d;
}

BoundaryData BoundaryData::s1(double eta, int k, Cutoff cutoff)
{
    if (!(eta >= 0.0))
        throw DomainError("eta must be non-negative");
    if (k < 2)
        throw DomainError("growth order k must exceed 1");
    BoundaryData d;
    d.kind_ = BoundaryKind::s1;
    d.eta_ = eta;
    d.k_ = k;
    d.cutoff_ = cutoff;
    return d;
}

BoundaryData BoundaryData::s2(double eta, int k, int odd_axis, Cutoff cutoff)
{
    if (k < 1)
        throw DomainError("odd data needs k >= 1");
    if (odd_axis < 1)
        throw DomainError("odd axis is 1-based");
    BoundaryData d;
    d.kind_ = BoundaryKind::s2;
    d.eta_ = eta;
    d.k_ = k;
    d.odd_axis_ = odd_axis;
    d.cutoff_ = cutoff;
    return d;
}

BoundaryData BoundaryData::tabulated(std::vector<double> s, std::vector<double> values, bool periodic)
{
    if (s.size() != values.size() || s.size() < 4)
        throw ConfigError("tabulated data needs matching s/value arrays with at least 4 entries");
    if (!std::is_sorted(s.begin(), s.end()) || std::adjacent_find(s.begin(), s.end()) != s.end())
        throw ConfigError("tabulated s values must be strictly increasing");
    if (periodic && values.front() != values.back())
        throw ConfigError("periodic tabulated data must repeat its first value at the end");
    BoundaryData d;
    d.kind_ = BoundaryKind::tabulated;
    d.spline_ = std::make_shared<const Spline>(std::move(s), std::move(values), periodic);
    return d;
}

BoundaryClassInfo BoundaryData::class_info() const
{
    switch (kind_) {
    case BoundaryKind::s1: return {BoundaryClass::s1, k_, 1};
    case BoundaryKind::s2: return {BoundaryClass::s2, k_, odd_axis_};
    default: throw RegimeError("classification needs k-order (s1) or odd (s2) boundary data");
    }
}

BoundaryData BoundaryData::scaled(double alpha) const
{
    BoundaryData d = *this;
    d.constant_ *= alpha;
    d.eta_ *= alpha;
    d.table_scale_ *= alpha;
    if (kind_ == BoundaryKind::s1 && alpha < 0.0)
        throw DomainError("k-order data needs a non-negative amplitude");
    return d;
}

bool BoundaryData::is_zero() const
{
    switch (kind_) {
    case BoundaryKind::constant: return constant_ == 0.0;
    case BoundaryKind::tabulated:
        return table_scale_ == 0.0 || std::all_of(spline_->v.begin(), spline_->v.end(), [](double v) { return v == 0.0; });
    default: return eta_ == 0.0;
    }
}

FieldSample BoundaryData::evaluate(std::span<const double> x) const
{
    FieldSample out;
    out.point.assign(x.begin(), x.end());
    out.gradient.assign(x.size(), 0.0);
    const std::size_t np = x.size() - 1;
    switch (kind_) {
    case BoundaryKind::constant:
        out.value = constant_;
        return out;
    case BoundaryKind::tabulated:
        throw DomainError("tabulated data is defined only along the strip boundary parameter");
    case BoundaryKind::s1: {
        const double r = radial_part(x);
        const Jet c = cutoff_(r);
        out.value = eta_ * std::pow(r, k_) * c.f;
        if (r > 0.0) {
            const double dr = eta_ * (k_ * std::pow(r, k_ - 1) * c.f + std::pow(r, k_) * c.d1);
            for (std::size_t i = 0; i < np; ++i)
                out.gradient[i] = dr * x[i] / r;
        }
        return out;
    }
    case BoundaryKind::s2: {
        const std::size_t a = static_cast<std::size_t>(odd_axis_ - 1);
        if (a >= np)
            throw DomainError("odd axis exceeds n - 1");
        const double r = radial_part(x);
        const Jet c = cutoff_(r);
        const double p = k_ == 1 ? 1.0 : std::pow(r, k_ - 1);
        out.value = eta_ * x[a] * p * c.f;
        out.gradient[a] = eta_ * p * c.f;
        if (r > 0.0) {
            const double dp = k_ == 1 ? 0.0 : (k_ - 1) * std::pow(r, k_ - 2);
            const double dr = eta_ * x[a] * (dp * c.f + p * c.d1);
            for (std::size_t i = 0; i < np; ++i)
                out.gradient[i] += dr * x[i] / r;
        }
        return out;
    }
    }
    return out;
}

std::array<double, 2> BoundaryData::along_boundary(const StripMap& map, double s) const
{
    if (kind_ == BoundaryKind::tabulated) {
        auto v = spline_->eval(s);
        return {table_scale_ * v[0], table_scale_ * v[1]};
    }
    const StripSection q = map.section(s);
    std::vector<double> x(map.n(), 0.0);
    std::vector<double> dx(map.n(), 0.0);
    x.front() = q.B[0];
    x.back() = q.B[1];
    dx.front() = q.dB[0];
    dx.back() = q.dB[1];
    const FieldSample f = evaluate(x);
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        d += f.gradient[i] * dx[i];
    return {f.value, d};
}

Vec2 meridian(std::span<const double> x)
{
    if (x.size() == 2)
        return {x[0], x[1]};
    return {radial_part(x), x.back()};
}

namespace {

constexpr double patch_tol = 1e-12;

std::vector<double> to_ambient(std::span<const double> x, double g_rho, double g_y)
{
    std::vector<double> g(x.size(), 0.0);
    g.back() = g_y;
    if (x.size() == 2) {
        g[0] = g_rho;
        return g;
    }
    const double r = radial_part(x);
    if (r > 0.0)
        for (std::size_t i = 0; i + 1 < x.size(); ++i)
            g[i] = g_rho * x[i] / r;
    return g;
}

void require_dim(const GapGeometry& g, std::span<const double> x)
{
    if (static_cast<int>(x.size()) != g.n)
        throw DomainError(fmt::format("point must have {} components", g.n));
}

bool in_patch(const GapGeometry& g, std::span<const double> x, double r)
{
    if (r > 2.0 * g.R)
        return false;
    const double lo = g.h(r).f;
    const double hi = g.epsilon + g.h1(r).f;
    const double slack = patch_tol * std::max(1.0, std::abs(hi));
    return x.back() >= lo - slack && x.back() <= hi + slack;
}

/// Located strip coordinates and the meridian gradients of s and t.
struct StripLocation {
    double s, t;
    Vec2 grad_s, grad_t;
};

StripLocation strip_locate(const GapGeometry& g, std::span<const double> x)
{
    if (!g.outer)
        throw DomainError("point outside the gap patch and no outer_domain to extend into");
    const StripMap map(g);
    const auto st = map.locate(meridian(x));
    if (!st)
        throw DomainError("point outside the closure of Omega");
    const StripSection q = map.section((*st)[0]);
    const double t = (*st)[1];
    const Vec2 xs{(1.0 - t) * q.dB[0] + t * q.dA[0], (1.0 - t) * q.dB[1] + t * q.dA[1]};
    const Vec2 xt{q.A[0] - q.B[0], q.A[1] - q.B[1]};
    const double det = xs[0] * xt[1] - xs[1] * xt[0];
    if (!(det > 0.0))
        throw SingularGeometryError("degenerate strip map at the requested point");
    return {(*st)[0], t, {xt[1] / det, -xt[0] / det}, {-xs[1] / det, xs[0] / det}};
}

}  // namespace

FieldSample ubar(const GapGeometry& g, std::span<const double> x)
{
    require_dim(g, x);
    FieldSample out;
    out.point.assign(x.begin(), x.end());
    const double r = radial_part(x);
    if (in_patch(g, x, r)) {
        const Jet d = gap_delta_jet(g, r);
        const Jet h = g.h(r);
        const double num = x.back() - h.f;
        out.value = num / d.f;
        const double g_r = r > 0.0 ? (-h.d1 * d.f - num * d.d1) / (d.f * d.f) : 0.0;
        out.gradient = to_ambient(x, 0.0, 1.0 / d.f);
        if (r > 0.0)
            for (std::size_t i = 0; i + 1 < x.size(); ++i)
                out.gradient[i] = g_r * x[i] / r;
        return out;
    }
    const StripLocation loc = strip_locate(g, x);
    out.value = loc.t;
    out.gradient = to_ambient(x, loc.grad_t[0], loc.grad_t[1]);
    return out;
}

FieldSample ubar0(const GapGeometry& g, const BoundaryData& phi, std::span<const double> x)
{
    require_dim(g, x);
    FieldSample out;
    out.point.assign(x.begin(), x.end());
    out.gradient.assign(x.size(), 0.0);
    if (phi.is_zero())
        return out;
    const double r = radial_part(x);
    if (in_patch(g, x, r) && phi.kind() != BoundaryKind::tabulated) {
        const FieldSample u = ubar(g, x);
        std::vector<double> xb(x.begin(), x.end());
        const Jet h = g.h(r);
        xb.back() = h.f;
        const FieldSample f = phi.evaluate(xb);
        // tangential gradient of x' -> phi(x', h(x'))
        std::vector<double> gp(x.size(), 0.0);
        for (std::size_t i = 0; i + 1 < x.size(); ++i)
            gp[i] = f.gradient[i] + (r > 0.0 ? f.gradient.back() * h.d1 * x[i] / r : 0.0);
        out.value = f.value * (1.0 - u.value);
        for (std::size_t i = 0; i < x.size(); ++i)
            out.gradient[i] = gp[i] * (1.0 - u.value) - f.value * u.gradient[i];
        return out;
    }
    const StripLocation loc = strip_locate(g, x);
    const StripMap map(g);
    const auto [pv, pd] = phi.along_boundary(map, loc.s);
    out.value = pv * (1.0 - loc.t);
    const double g_rho = pd * (1.0 - loc.t) * loc.grad_s[0] - pv * loc.grad_t[0];
    const double g_y = pd * (1.0 - loc.t) * loc.grad_s[1] - pv * loc.grad_t[1];
    out.gradient = to_ambient(x, g_rho, g_y);
    return out;
}

FieldSample vbar(const GapGeometry& g, const FieldFunction& psi, std::span<const double> x)
{
    require_dim(g, x);
    const FieldSample u = ubar(g, x);
    const FieldSample p = psi(x);
    FieldSample out;
    out.point.assign(x.begin(), x.end());
    out.gradient.assign(x.size(), 0.0);
    const double r = radial_part(x);
    if (!in_patch(g, x, r) || r >= 2.0 * g.R) {
        out.value = p.value * u.value;
        for (std::size_t i = 0; i < x.size(); ++i)
            out.gradient[i] = p.gradient[i] * u.value + p.value * u.gradient[i];
        return out;
    }
    const Jet c = patch_cutoff(r, g.R);
    const Jet h1 = g.h1(r);
    std::vector<double> top(x.begin(), x.end());
    top.back() = g.epsilon + h1.f;
    const FieldSample pt = psi(top);
    // weight W(x) = c G(x') + (1 - c) psi(x), with G(x') = psi(x', eps + h1(x'))
    std::vector<double> gW(x.size(), 0.0);
    const double W = c.f * pt.value + (1.0 - c.f) * p.value;
    for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double e = r > 0.0 ? x[i] / r : 0.0;
        const double gG = pt.gradient[i] + pt.gradient.back() * h1.d1 * e;
        gW[i] = c.f * gG + c.d1 * e * (pt.value - p.value) + (1.0 - c.f) * p.gradient[i];
    }
    gW.back() = (1.0 - c.f) * p.gradient.back();
    out.value = W * u.value;
    for (std::size_t i = 0; i < x.size(); ++i)
        out.gradient[i] = gW[i] * u.value + W * u.gradient[i];
    return out;
}

double boundary_c2_norm(const BoundaryData& phi, const StripMap& map, int samples)
{
    double sup0 = 0.0, sup1 = 0.0, sup2 = 0.0;
    const double lo = map.s_min(), hi = map.s_max();
    const double hstep = (hi - lo) / samples;
    auto tangential = [&](double s) {
        const auto [v, d] = phi.along_boundary(map, s);
        const StripSection q = map.section(s);
        return std::array<double, 2>{v, d / std::hypot(q.dB[0], q.dB[1])};
    };
    for (int i = 0; i <= samples; ++i) {
        const double s = lo + i * hstep;
        const auto [v, d] = tangential(s);
        sup0 = std::max(sup0, std::abs(v));
        sup1 = std::max(sup1, std::abs(d));
        if (i > 0 && i < samples) {
            const double dp = tangential(s + hstep)[1];
            const double dm = tangential(s - hstep)[1];
            const StripSection q = map.section(s);
            const double ds = std::hypot(q.dB[0], q.dB[1]) * 2.0 * hstep;
            sup2 = std::max(sup2, std::abs(dp - dm) / ds);
        }
    }
    return sup0 + sup1 + sup2;
}

}  // namespace narrowgap
