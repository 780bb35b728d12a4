#include "narrowgap/regimes.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include <fmt/format.h>

#include "narrowgap/errors.hpp"

namespace narrowgap {

Rational::Rational(std::int64_t num, std::int64_t den)
{
    if (den == 0)
        throw DomainError("rational with zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const std::int64_t g = std::gcd(num, den);
    num_ = num / g;
    den_ = den / g;
}

Rational operator+(Rational a, Rational b) { return {a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_}; }
Rational operator-(Rational a, Rational b) { return {a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_}; }
Rational operator*(Rational a, Rational b) { return {a.num_ * b.num_, a.den_ * b.den_}; }
Rational operator/(Rational a, Rational b) { return {a.num_ * b.den_, a.den_ * b.num_}; }
bool operator<(Rational a, Rational b) { return a.num_ * b.den_ < b.num_ * a.den_; }

std::string Rational::str() const
{
    return den_ == 1 ? fmt::format("{}", num_) : fmt::format("{}/{}", num_, den_);
}

double RatePower::evaluate(double eps) const
{
    double v = std::pow(eps, epsilon_exponent.value());
    if (log_exponent != 0)
        v *= std::pow(std::abs(std::log(eps)), log_exponent);
    return v;
}

std::string RatePower::str() const
{
    std::string s;
    if (epsilon_exponent.num() != 0)
        s = fmt::format("eps^({})", epsilon_exponent.str());
    if (log_exponent != 0) {
        if (!s.empty())
            s += "*";
        s += log_exponent == 1 ? std::string("|ln eps|") : fmt::format("|ln eps|^({})", log_exponent);
    }
    return s.empty() ? "1" : s;
}

RatePower operator*(const RatePower& a, const RatePower& b)
{
    return {a.epsilon_exponent + b.epsilon_exponent, a.log_exponent + b.log_exponent};
}

RatePower operator/(const RatePower& a, const RatePower& b)
{
    return {a.epsilon_exponent - b.epsilon_exponent, a.log_exponent - b.log_exponent};
}

namespace {

void require_eps(double eps)
{
    if (!(eps > 0.0 && eps < 1.0))
        throw DomainError(fmt::format("eps must lie in (0, 1), got {}", eps));
}

void require_nm(int n, int m)
{
    if (n < 2 || m < 2)
        throw DomainError(fmt::format("need n >= 2 and m >= 2, got n={} m={}", n, m));
}

}  // namespace

RatePower rho_power(int n, int m, int i)
{
    require_nm(n, m);
    if (i < 0)
        throw DomainError("rho index must be non-negative");
    const int d = n + i - 1;
    if (m > d)
        return {Rational(d, m) - Rational(1), 0};
    if (m == d)
        return {Rational(0), 1};
    return {Rational(0), 0};
}

RateValue rho(int n, int m, int i, double eps)
{
    require_eps(eps);
    const RatePower p = rho_power(n, m, i);
    return {p, p.evaluate(eps)};
}

double gamma_const(int n, int m, int i)
{
    require_nm(n, m);
    const int d = n + i - 1;
    if (m < d)
        throw DomainError(fmt::format("Gamma_m^(n+i) undefined for m={} < n+i-1={}", m, d));
    if (m == d)
        return 1.0;
    const double s = static_cast<double>(d) / m;
    return std::tgamma(1.0 - s) * std::tgamma(s);
}

double sphere_factor(int n)
{
    if (n < 2)
        throw DomainError("sphere_factor needs n >= 2");
    // |S^{d-1}| = 2 pi^{d/2} / Gamma(d/2) with d = n-1
    const double d = n - 1;
    return 2.0 * std::pow(std::numbers::pi, d / 2.0) / std::tgamma(d / 2.0);
}

RatePower remainder_rate_power(int n, int m, int k)
{
    require_nm(n, m);
    if (k < 2)
        throw DomainError("growth order k must exceed 1");
    const int d = n + k - 1;
    const RatePower inv_m{Rational(1, m), 0};
    const Rational mid(d - m, static_cast<std::int64_t>(d) * (m + 1));
    if (m > n + k)
        return inv_m;
    if (m == n + k)
        return {Rational(1, m), 1};
    if (m == d)
        return {Rational(0), -1};
    if (m > n - 1)
        return {mid, 0};
    if (m == n - 1)
        return {Rational(0), -1};
    // eps < 1: the larger of two powers has the smaller exponent
    const Rational sixth(1, 6);
    return {mid < sixth ? mid : sixth, 0};
}

RateValue remainder_rate(int n, int m, int k, double eps)
{
    require_eps(eps);
    const RatePower p = remainder_rate_power(n, m, k);
    return {p, p.evaluate(eps)};
}

RatePower remainder_rate_odd_power(int n, int m)
{
    require_nm(n, m);
    const Rational e(m + n - 2, static_cast<std::int64_t>(m + 1) * (2 * m + n - 2));
    if (m > n - 1)
        return {e, 0};
    if (m == n - 1)
        return {Rational(0), -1};
    const Rational sixth(1, 6);
    return {e < sixth ? e : sixth, 0};
}

RateValue remainder_rate_odd(int n, int m, double eps)
{
    require_eps(eps);
    const RatePower p = remainder_rate_odd_power(n, m);
    return {p, p.evaluate(eps)};
}

RegimeCase classify(int n, int m, const BoundaryClassInfo& boundary)
{
    require_nm(n, m);
    RegimeCase rc;
    rc.boundary = boundary;
    if (boundary.cls == BoundaryClass::s1) {
        if (boundary.k < 2)
            throw DomainError("growth order k must exceed 1");
        const int d = n + boundary.k - 1;
        if (m >= d)
            rc.regime = Regime::s1_explicit;
        else if (m >= n - 1)
            rc.regime = Regime::s1_mixed;
        else
            rc.regime = Regime::s1_limit;
        rc.tie = (m == d) || (m == n - 1);
    } else {
        if (boundary.odd_axis < 1 || boundary.odd_axis > n - 1)
            throw DomainError(fmt::format("odd axis must lie in [1, {}]", n - 1));
        rc.regime = m >= n - 1 ? Regime::s2_mixed : Regime::s2_limit;
        rc.tie = (m == n - 1);
    }
    return rc;
}

std::string regime_name(Regime r)
{
    switch (r) {
    case Regime::s1_explicit: return "s1_explicit";
    case Regime::s1_mixed: return "s1_mixed";
    case Regime::s1_limit: return "s1_limit";
    case Regime::s2_mixed: return "s2_mixed";
    case Regime::s2_limit: return "s2_limit";
    }
    return "unknown";
}

}  // namespace narrowgap
