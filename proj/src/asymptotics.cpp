#include "narrowgap/asymptotics.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "narrowgap/errors.hpp"

namespace narrowgap {

namespace {

// eps^{1/m}, eps^{1/m}|ln eps| or |ln eps|^{-1} as m passes above, onto, or one below threshold
RatePower threshold_remainder(int m, int threshold)
{
    if (m > threshold)
        return {Rational(1, m), 0};
    if (m == threshold)
        return {Rational(1, m), 1};
    return {Rational(0), -1};
}

double require_q_star(const std::optional<LimitQuantities>& limits)
{
    if (!limits || !limits->Q_star)
        throw RegimeError("Q* required for this branch");
    return *limits->Q_star;
}

double require_a11_star(const std::optional<LimitQuantities>& limits)
{
    if (!limits || !limits->a11_star)
        throw RegimeError("a11* required for this branch");
    return *limits->a11_star;
}

}  // namespace

double Expansion::value(double eps) const { return coefficient * power.evaluate(eps); }

double Expansion::remainder_value(double eps) const { return remainder.evaluate(eps); }

Expansion expand_Q(int n, int m, const BoundaryClassInfo& data, double lambda, double eta,
                   const std::optional<LimitQuantities>& limits)
{
    if (!(lambda > 0.0))
        throw DomainError("lambda must be positive");
    const RegimeCase rc = classify(n, m, data);
    Expansion e;
    if (rc.regime == Regime::s1_explicit) {
        const int k = data.k;
        e.coefficient = sphere_factor(n) * eta * gamma_const(n, m, k) /
                        (m * std::pow(lambda, static_cast<double>(n + k - 1) / m));
        e.power = rho_power(n, m, k);
        e.remainder = threshold_remainder(m, n + k);
        return e;
    }
    e.coefficient = require_q_star(limits);
    e.uses_limit = LimitTag::Q_star;
    e.remainder_absolute = true;
    if (data.cls == BoundaryClass::s1) {
        const int d = n + data.k - 1;
        e.remainder = {Rational(d - m, static_cast<std::int64_t>(d) * (m + 1)), 0};
    } else {
        e.remainder = {Rational(m + n - 2, static_cast<std::int64_t>(m + 1) * (2 * m + n - 2)), 0};
    }
    return e;
}

Expansion expand_a11(int n, int m, double lambda, const std::optional<LimitQuantities>& limits)
{
    if (!(lambda > 0.0))
        throw DomainError("lambda must be positive");
    Expansion e;
    if (m >= n - 1) {
        e.coefficient = sphere_factor(n) * gamma_const(n, m, 0) / (m * std::pow(lambda, static_cast<double>(n - 1) / m));
        e.power = rho_power(n, m, 0);
        e.remainder = threshold_remainder(m, n);
        return e;
    }
    e.coefficient = require_a11_star(limits);
    e.uses_limit = LimitTag::a11_star;
    e.remainder = {Rational(1, 6), 0};
    e.remainder_absolute = true;
    return e;
}

GradientCoefficient gradient_coefficient(int n, int m, const RegimeCase& regime, double lambda, double eta,
                                         const std::optional<LimitQuantities>& limits)
{
    if (!(lambda > 0.0))
        throw DomainError("lambda must be positive");
    GradientCoefficient c;
    const bool odd = regime.boundary.cls == BoundaryClass::s2;
    c.relative_remainder = odd ? remainder_rate_odd_power(n, m) : remainder_rate_power(n, m, regime.boundary.k);

    switch (regime.regime) {
    case Regime::s1_explicit: {
        const int k = regime.boundary.k;
        c.coefficient = eta * gamma_const(n, m, k) /
                        (std::pow(lambda, static_cast<double>(k) / m) * gamma_const(n, m, 0));
        c.power = rho_power(n, m, k) / rho_power(n, m, 0);
        return c;
    }
    case Regime::s1_mixed:
    case Regime::s2_mixed: {
        const double q = require_q_star(limits);
        if (std::abs(q) <= q_star_zero_tolerance) {
            c.degenerate = true;
            return c;
        }
        c.coefficient = m * std::pow(lambda, static_cast<double>(n - 1) / m) * q / (sphere_factor(n) * gamma_const(n, m, 0));
        c.power = RatePower{} / rho_power(n, m, 0);
        return c;
    }
    case Regime::s1_limit:
    case Regime::s2_limit: {
        const double q = require_q_star(limits);
        const double a = require_a11_star(limits);
        if (std::abs(q) <= q_star_zero_tolerance) {
            c.degenerate = true;
            return c;
        }
        if (!(a > 0.0))
            throw RegimeError("a11* must be positive");
        c.coefficient = q / a;
        return c;
    }
    }
    throw RegimeError("unknown regime");
}

double patch_c2_norm(const GapGeometry& g, const BoundaryData& phi, int samples)
{
    if (phi.kind() == BoundaryKind::tabulated)
        throw DomainError("patch norm needs closed-form boundary data");
    if (phi.is_zero())
        return 0.0;
    const double r_max = 2.0 * g.R;
    const double dr = 1e-5 * r_max;
    auto trace = [&](double r) {
        std::vector<double> x(static_cast<std::size_t>(g.n), 0.0);
        x[0] = r;
        x.back() = g.h(std::abs(r)).f;
        return phi.evaluate(x);
    };
    // S2 data are odd in x_1; sample both sides and also along x_2 when n = 3
    double norm = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double r = -r_max + 2.0 * r_max * i / samples;
        const double r0 = std::clamp(r - dr, -r_max, r_max - 2.0 * dr);
        const FieldSample f0 = trace(r0);
        const FieldSample f1 = trace(r0 + 2.0 * dr);
        const FieldSample f = trace(r);
        double grad = 0.0;
        for (double gi : f.gradient)
            grad = std::max(grad, std::abs(gi));
        double hess = 0.0;
        for (std::size_t d = 0; d < f.gradient.size(); ++d)
            hess = std::max(hess, std::abs(f1.gradient[d] - f0.gradient[d]) / (2.0 * dr));
        norm = std::max({norm, std::abs(f.value), grad, hess});
    }
    return norm;
}

GradientPrediction gradient_asymptotic(const GapGeometry& g, const BoundaryData& phi, const RegimeCase& regime,
                                       const std::optional<LimitQuantities>& limits, std::span<const double> x)
{
    if (static_cast<int>(x.size()) != g.n)
        throw DomainError("point dimension does not match the geometry");
    const double r = radial_part(x);
    if (r > 2.0 * g.R)
        throw DomainError(fmt::format("point |x'| = {} outside the patch radius {}", r, 2.0 * g.R));

    GradientPrediction p;
    const double eta = phi.is_zero() ? 0.0 : phi.eta();
    p.coefficient = gradient_coefficient(g.n, g.m, regime, g.lambda, eta, limits);
    p.degenerate = p.coefficient.degenerate;
    p.coefficient_value = p.coefficient.value(g.epsilon);
    p.relative_remainder = p.coefficient.relative_remainder.evaluate(g.epsilon);

    const FieldSample ub = ubar(g, x);
    const FieldSample ub0 = ubar0(g, phi, x);
    p.field.point.assign(x.begin(), x.end());
    p.field.gradient.resize(x.size());
    double mag = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        p.field.gradient[i] = p.coefficient_value * ub.gradient[i] + ub0.gradient[i];
        mag += p.field.gradient[i] * p.field.gradient[i];
    }
    p.field.value = std::sqrt(mag);
    p.remainder_bound = std::pow(gap_delta_radial(g, r), 1.0 - 2.0 / g.m) * patch_c2_norm(g, phi);
    return p;
}

MaxLocation predicted_max_location(const RegimeCase& regime, int n, int m)
{
    MaxLocation loc;
    const RatePower ring{Rational(1, m), 0};
    if (regime.boundary.cls == BoundaryClass::s1) {
        if (m > n + regime.boundary.k - 1) {
            loc.tag = MaxTag::both;
            loc.ring_radius_scale = ring;
        }
        return loc;
    }
    if (m == n) {
        loc.tag = MaxTag::both;
        loc.ring_radius_scale = ring;
    } else if (m > n) {
        loc.tag = MaxTag::ring_only;
        loc.ring_radius_scale = ring;
    }
    return loc;
}

std::string max_tag_name(MaxTag t)
{
    switch (t) {
    case MaxTag::axis_only: return "axis_only";
    case MaxTag::ring_only: return "ring_only";
    case MaxTag::both: return "both";
    }
    return "unknown";
}

std::string limit_tag_name(LimitTag t)
{
    switch (t) {
    case LimitTag::Q_star: return "Q_star";
    case LimitTag::a11_star: return "a11_star";
    case LimitTag::both: return "both";
    }
    return "unknown";
}

void to_json(nlohmann::json& j, const RatePower& p)
{
    j = {{"epsilon_exponent", {{"num", p.epsilon_exponent.num()}, {"den", p.epsilon_exponent.den()}}},
         {"log_power", p.log_exponent},
         {"text", p.str()}};
}

void to_json(nlohmann::json& j, const Expansion& e)
{
    j = {{"coefficient", e.coefficient},
         {"power", e.power},
         {"remainder", e.remainder},
         {"remainder_kind", e.remainder_absolute ? "absolute" : "relative"}};
    j["uses_limit"] = e.uses_limit ? nlohmann::json(limit_tag_name(*e.uses_limit)) : nlohmann::json(nullptr);
}

void to_json(nlohmann::json& j, const MaxLocation& l)
{
    j = {{"tag", max_tag_name(l.tag)}};
    j["ring_radius_scale"] = l.ring_radius_scale ? nlohmann::json(*l.ring_radius_scale) : nlohmann::json(nullptr);
}

}  // namespace narrowgap
