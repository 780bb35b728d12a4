#pragma once

#include <cstdint>
#include <string>

namespace narrowgap {

/// Exact rational number with positive, reduced denominator.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }

    friend Rational operator+(Rational a, Rational b);
    friend Rational operator-(Rational a, Rational b);
    friend Rational operator*(Rational a, Rational b);
    friend Rational operator/(Rational a, Rational b);
    friend bool operator==(Rational a, Rational b) = default;
    friend bool operator<(Rational a, Rational b);

    std::string str() const;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

/// The rate eps^p |ln eps|^q with exact exponents.
struct RatePower {
    Rational epsilon_exponent;
    int log_exponent = 0;

    double evaluate(double eps) const;
    std::string str() const;

    friend RatePower operator*(const RatePower& a, const RatePower& b);
    friend RatePower operator/(const RatePower& a, const RatePower& b);
    friend bool operator==(const RatePower& a, const RatePower& b) = default;
};

struct RateValue {
    RatePower power;
    double value = 0.0;
};

/// rho_i(n,m;eps): eps^{(n+i-1)/m-1} if m > n+i-1, |ln eps| if equal, 1 otherwise.
RateValue rho(int n, int m, int i, double eps);
RatePower rho_power(int n, int m, int i);

/// Gamma(1-s)Gamma(s) with s = (n+i-1)/m; exactly 1 when m = n+i-1.
double gamma_const(int n, int m, int i);

/// (n-1) omega_{n-1}, the measure of the unit sphere in R^{n-1}.
double sphere_factor(int n);

/// Relative remainder factor of the gradient asymptotics for k-order growth data.
RateValue remainder_rate(int n, int m, int k, double eps);
RatePower remainder_rate_power(int n, int m, int k);

/// Relative remainder factor for odd data.
RateValue remainder_rate_odd(int n, int m, double eps);
RatePower remainder_rate_odd_power(int n, int m);

enum class BoundaryClass { s1, s2 };

struct BoundaryClassInfo {
    BoundaryClass cls = BoundaryClass::s1;
    int k = 2;         ///< growth order (s1 only)
    int odd_axis = 1;  ///< odd coordinate, 1-based (s2 only)
};

/// Asymptotic branch of the gradient expansion.
enum class Regime {
    s1_explicit,  ///< k-order data, m >= n+k-1: all constants explicit
    s1_mixed,     ///< k-order data, n-1 <= m < n+k-1: needs Q*
    s1_limit,     ///< k-order data, m < n-1: needs Q* and a11*
    s2_mixed,     ///< odd data, m >= n-1: needs Q*
    s2_limit,     ///< odd data, m < n-1: needs Q* and a11*
};

struct RegimeCase {
    Regime regime = Regime::s1_explicit;
    BoundaryClassInfo boundary;
    bool tie = false;  ///< m sits exactly on a branch threshold

    bool needs_q_star() const { return regime != Regime::s1_explicit; }
    bool needs_a11_star() const { return regime == Regime::s1_limit || regime == Regime::s2_limit; }
};

RegimeCase classify(int n, int m, const BoundaryClassInfo& boundary);

std::string regime_name(Regime r);

}  // namespace narrowgap
