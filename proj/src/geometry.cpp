#include "narrowgap/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "narrowgap/errors.hpp"

namespace narrowgap {

RadialProfile::RadialProfile(std::vector<ProfileTerm> terms) : terms_(std::move(terms))
{
    std::erase_if(terms_, [](const ProfileTerm& t) { return t.coefficient == 0.0; });
    for (const auto& t : terms_)
        if (t.power < 0.0)
            throw DomainError("profile powers must be non-negative");
    label_ = "terms";
}

RadialProfile::RadialProfile(std::function<Jet(double)> fn, std::string label)
    : fn_(std::move(fn)), label_(std::move(label))
{
}

RadialProfile RadialProfile::monomial(double coefficient, double power)
{
    return RadialProfile({{coefficient, power}});
}

RadialProfile RadialProfile::polynomial(const std::vector<double>& coefficients)
{
    std::vector<ProfileTerm> terms;
    for (std::size_t i = 0; i < coefficients.size(); ++i)
        terms.push_back({coefficients[i], static_cast<double>(i)});
    return RadialProfile(std::move(terms));
}

Jet RadialProfile::operator()(double r) const
{
    if (fn_)
        return fn_(r);
    constexpr double inf = std::numeric_limits<double>::infinity();
    Jet j;
    for (const auto& [c, p] : terms_) {
        if (r > 0.0) {
            const double rp = std::pow(r, p);
            j.f += c * rp;
            j.d1 += c * p * rp / r;
            j.d2 += c * p * (p - 1.0) * rp / (r * r);
        } else if (p == 0.0) {
            j.f += c;
        } else if (p == 1.0) {
            j.d1 += c;
        } else if (p == 2.0) {
            j.d2 += 2.0 * c;
        } else if (p < 2.0) {
            j.d2 += c > 0 ? inf : -inf;
            if (p < 1.0)
                j.d1 += c > 0 ? inf : -inf;
        }
    }
    return j;
}

Jet superellipse_bottom(double r, double a, double b, int m)
{
    const double q = std::abs(r) / a;
    const double u = std::pow(q, m);
    if (u >= 1.0)
        throw DomainError(fmt::format("radius {} outside superellipse half-width {}", r, a));
    const double g = std::sqrt(1.0 - u);
    const double u1 = m * std::pow(q, m - 1) / a;
    const double u2 = m * (m - 1) * std::pow(q, m - 2) / (a * a);
    return {b * u / (1.0 + g), b * u1 / (2.0 * g), b * (u2 / (2.0 * g) + u1 * u1 / (4.0 * g * g * g))};
}

void GapGeometry::validate() const
{
    if (n < 2)
        throw DomainError("dimension n must be at least 2");
    if (m < 2)
        throw DomainError("convexity order m must be at least 2");
    if (!(epsilon >= 0.0) || !(R > 0.0) || !(lambda > 0.0))
        throw DomainError("need epsilon >= 0, R > 0, lambda > 0");
    if (!(kappa1 > 0.0) || !(kappa2 > 0.0))
        throw DomainError("kappa1 and kappa2 must be positive");
    if (outer) {
        const auto& o = *outer;
        const double a = o.inclusion_half_width;
        if (!(a > 0.0))
            throw DomainError("inclusion_half_width must be positive");
        if (!(0.0 < o.vertical_fraction && o.vertical_fraction < o.blend_fraction && o.blend_fraction < 1.0))
            throw DomainError("need 0 < vertical_fraction < blend_fraction < 1");
        if (o.flat_fraction < o.blend_fraction)
            throw DomainError("flat_fraction must be at least blend_fraction");
        if (2.0 * R > o.vertical_fraction * a)
            throw DomainError(fmt::format("patch 2R = {} exceeds the vertical mesh zone {}", 2.0 * R,
                                          o.vertical_fraction * a));
        if (!(o.cap_blend_angle > 0.0))
            throw DomainError("cap_blend_angle must be positive");
    }
}

GapGeometry GapGeometry::with_epsilon(double eps) const
{
    GapGeometry g = *this;
    g.epsilon = eps;
    return g;
}

namespace {

double default_kappa1(int m, double lambda) { return std::max(10.0, 2.0 * m * (m - 1) * lambda); }

}  // namespace

GapGeometry make_patch_geometry(int n, int m, double lambda, double epsilon, double R)
{
    GapGeometry g;
    g.n = n;
    g.m = m;
    g.lambda = lambda;
    g.epsilon = epsilon;
    g.R = R;
    g.kappa1 = default_kappa1(m, lambda);
    g.h1 = RadialProfile::monomial(lambda, m);
    g.validate();
    return g;
}

GapGeometry make_solver_geometry(int n, int m, double lambda, double epsilon, double R, const OuterDomain& outer)
{
    GapGeometry g;
    g.n = n;
    g.m = m;
    g.lambda = lambda;
    g.epsilon = epsilon;
    g.R = R;
    g.kappa1 = default_kappa1(m, lambda);
    g.outer = outer;
    const double a = outer.inclusion_half_width;
    const double b = 2.0 * lambda * std::pow(a, m);
    g.h1 = RadialProfile([a, b, m](double r) { return superellipse_bottom(r, a, b, m); }, "superellipse");
    g.validate();
    return g;
}

double radial_part(std::span<const double> x)
{
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < x.size(); ++i)
        s += x[i] * x[i];
    return std::sqrt(s);
}

double gap_delta_radial(const GapGeometry& g, double r)
{
    if (r > 2.0 * g.R * (1.0 + 1e-12))
        throw DomainError(fmt::format("|z'| = {} outside the patch 2R = {}", r, 2.0 * g.R));
    const double d = g.epsilon + g.h1(r).f - g.h(r).f;
    if (!(d > 0.0))
        throw SingularGeometryError(fmt::format("non-positive gap width {} at |z'| = {}", d, r));
    return d;
}

Jet gap_delta_jet(const GapGeometry& g, double r)
{
    const Jet a = g.h1(r);
    const Jet c = g.h(r);
    return {gap_delta_radial(g, r), a.d1 - c.d1, a.d2 - c.d2};
}

double gap_delta(const GapGeometry& g, std::span<const double> z_prime)
{
    if (static_cast<int>(z_prime.size()) != g.n - 1)
        throw DomainError(fmt::format("z' must have {} components", g.n - 1));
    double s = 0.0;
    for (double z : z_prime)
        s += z * z;
    return gap_delta_radial(g, std::sqrt(s));
}

std::vector<double> boundary_normal(const GapGeometry& g, std::span<const double> x_prime)
{
    if (static_cast<int>(x_prime.size()) != g.n - 1)
        throw DomainError(fmt::format("x' must have {} components", g.n - 1));
    double r2 = 0.0;
    for (double z : x_prime)
        r2 += z * z;
    const double r = std::sqrt(r2);
    if (r > 2.0 * g.R * (1.0 + 1e-12))
        throw DomainError("boundary_normal outside the patch");
    std::vector<double> nu(g.n, 0.0);
    const double d1 = r > 0.0 ? g.h1(r).d1 : 0.0;
    double norm2 = 1.0;
    for (int i = 0; i + 1 < g.n; ++i) {
        nu[i] = r > 0.0 ? d1 * x_prime[i] / r : 0.0;
        norm2 += nu[i] * nu[i];
    }
    nu[g.n - 1] = -1.0;
    const double inv = 1.0 / std::sqrt(norm2);
    for (double& v : nu)
        v *= inv;
    return nu;
}

namespace {

/// Sampled C^{2,1/2} proxy of a radial profile on [0, L] using finite differences
/// of the even extension.
double c2alpha_proxy(const RadialProfile& p, double L, int count)
{
    const int N = std::max(count, 8);
    const double step = L / N;
    const double eta = step * 1e-2;
    std::vector<double> r(N + 1), f(N + 1), d1(N + 1), d2(N + 1);
    for (int i = 0; i <= N; ++i) {
        r[i] = i * step;
        auto val = [&](double x) { return p(std::abs(x)).f; };
        f[i] = val(r[i]);
        d1[i] = (val(r[i] + eta) - val(r[i] - eta)) / (2.0 * eta);
        d2[i] = (val(r[i] + eta) - 2.0 * f[i] + val(r[i] - eta)) / (eta * eta);
    }
    double sup_f = 0.0, sup_d1 = 0.0, sup_d2 = 0.0, holder = 0.0;
    for (int i = 0; i <= N; ++i) {
        sup_f = std::max(sup_f, std::abs(f[i]));
        sup_d1 = std::max(sup_d1, std::abs(d1[i]));
        sup_d2 = std::max(sup_d2, std::abs(d2[i]));
        for (int j = i + 1; j <= N; ++j)
            holder = std::max(holder, std::abs(d2[j] - d2[i]) / std::sqrt(r[j] - r[i]));
    }
    return sup_f + sup_d1 + sup_d2 + holder;
}

}  // namespace

HypothesisReport check_hypotheses(const GapGeometry& g, int sample_count)
{
    if (sample_count < 8)
        throw DomainError("check_hypotheses needs at least 8 samples");
    HypothesisReport rep;
    rep.h1 = {"H1", 0.0, g.kappa1, 0.0, false};
    rep.h2 = {"H2", 0.0, g.kappa1, 0.0, false};
    rep.h3 = {"H3", 0.0, g.kappa2, 0.0, false};

    const double top = 2.0 * g.R;
    const double bottom = top * 1e-3;
    const double q = std::pow(bottom / top, 1.0 / (sample_count - 1));
    const bool tangential = g.n >= 3;
    for (int j = 0; j < sample_count; ++j) {
        const double r = top * std::pow(q, j);
        const Jet a = g.h1(r);
        const Jet c = g.h(r);
        const double lead = g.lambda * std::pow(r, g.m);
        const double corr = std::abs(a.f - c.f - lead);
        const double ratio1 = corr / (lead * r);
        if (!(ratio1 <= rep.h1.worst_ratio)) {
            rep.h1.worst_ratio = ratio1;
            rep.h1.worst_radius = r;
        }
        rep.correction_residual = std::max(rep.correction_residual, corr / lead);

        for (const Jet& p : {a, c}) {
            const double g1 = std::abs(p.d1) / std::pow(r, g.m - 1);
            double hess = std::abs(p.d2);
            if (tangential)
                hess = std::max(hess, std::abs(p.d1) / r);
            const double g2 = hess / std::pow(r, g.m - 2);
            const double worst = std::max(g1, g2);
            if (!(worst <= rep.h2.worst_ratio)) {
                rep.h2.worst_ratio = worst;
                rep.h2.worst_radius = r;
            }
        }
    }
    rep.h1.pass = std::isfinite(rep.h1.worst_ratio) && rep.h1.worst_ratio <= rep.h1.bound;
    rep.h2.pass = std::isfinite(rep.h2.worst_ratio) && rep.h2.worst_ratio <= rep.h2.bound;

    rep.h3.worst_ratio = std::max(c2alpha_proxy(g.h1, top, sample_count), c2alpha_proxy(g.h, top, sample_count));
    rep.h3.worst_radius = top;
    rep.h3.pass = std::isfinite(rep.h3.worst_ratio) && rep.h3.worst_ratio <= rep.h3.bound;
    return rep;
}

bool in_gap(const GapGeometry& g, std::span<const double> x, double t)
{
    if (static_cast<int>(x.size()) != g.n)
        throw DomainError(fmt::format("point must have {} components", g.n));
    const double r = radial_part(x);
    if (!(r < t))
        return false;
    const double xn = x.back();
    return g.h(r).f < xn && xn < g.epsilon + g.h1(r).f;
}

}  // namespace narrowgap
