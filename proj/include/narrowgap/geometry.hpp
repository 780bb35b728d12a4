#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace narrowgap {

/// Value with first and second derivative of a scalar function of one variable.
struct Jet {
    double f = 0.0;
    double d1 = 0.0;
    double d2 = 0.0;
};

struct ProfileTerm {
    double coefficient = 0.0;
    double power = 0.0;
};

/// Height profile as a function of r = |x'|: a sum of c r^p terms, or a callable.
class RadialProfile {
public:
    RadialProfile() = default;
    explicit RadialProfile(std::vector<ProfileTerm> terms);
    RadialProfile(std::function<Jet(double)> fn, std::string label);

    static RadialProfile monomial(double coefficient, double power);
    /// Coefficients of r^0, r^1, r^2, ...
    static RadialProfile polynomial(const std::vector<double>& coefficients);

    Jet operator()(double r) const;

    bool is_zero() const { return !fn_ && terms_.empty(); }
    bool is_callable() const { return static_cast<bool>(fn_); }
    const std::vector<ProfileTerm>& terms() const { return terms_; }
    const std::string& label() const { return label_; }

private:
    std::vector<ProfileTerm> terms_;
    std::function<Jet(double)> fn_;
    std::string label_;
};

/// Far-field construction used by the reference solver.
///
/// The inclusion is the superellipse |x'/a|^m + ((x_n - eps - b)/b)^2 <= 1 with
/// b = 2 lambda a^m, so its lower boundary is x_n = eps + lambda|x'|^m + O(|x'|^{2m}).
/// The matrix boundary is flat (h = 0) on |x'| <= flat_fraction*a and closes as a
/// circle of radius outer_radius about the inclusion centre.
struct OuterDomain {
    double inclusion_half_width = 1.2;
    double vertical_fraction = 0.5;  ///< mesh lines vertical for |x'| <= fraction*a
    double blend_fraction = 0.9;     ///< mesh lines radial for |x'| >= fraction*a
    double flat_fraction = 1.2;      ///< bottom of D flat for |x'| <= fraction*a
    double outer_radius = 0.0;       ///< 0 selects 1.6 max(a, b) + 0.5
    double cap_blend_angle = 0.5;    ///< angular width of the flat-to-circle transition
};

struct GapGeometry {
    int n = 2;
    int m = 2;
    double epsilon = 1e-3;
    double R = 0.25;
    double lambda = 1.0;
    double kappa1 = 10.0;
    double kappa2 = 100.0;
    RadialProfile h;   ///< lower (matrix) boundary
    RadialProfile h1;  ///< upper (inclusion) boundary, shifted by eps
    std::optional<OuterDomain> outer;

    /// Throws DomainError on inconsistent parameters.
    void validate() const;

    GapGeometry with_epsilon(double eps) const;
};

/// Geometry with h = 0, h1 = lambda|x'|^m exactly; no far field.
GapGeometry make_patch_geometry(int n, int m, double lambda, double epsilon, double R);

/// Geometry whose profiles come from the superellipse far-field construction.
GapGeometry make_solver_geometry(int n, int m, double lambda, double epsilon, double R,
                                 const OuterDomain& outer = {});

/// Superellipse lower boundary b(1 - sqrt(1 - (r/a)^m)).
Jet superellipse_bottom(double r, double a, double b, int m);

/// delta(z') = eps + h1(z') - h(z'), z' in R^{n-1}.
double gap_delta(const GapGeometry& g, std::span<const double> z_prime);
double gap_delta_radial(const GapGeometry& g, double r);
/// d delta / dr and second derivative at radius r.
Jet gap_delta_jet(const GapGeometry& g, double r);

/// Outward unit normal of D1 on its lower boundary, (grad h1, -1)/sqrt(1+|grad h1|^2).
std::vector<double> boundary_normal(const GapGeometry& g, std::span<const double> x_prime);

struct HypothesisCheck {
    std::string name;
    double worst_ratio = 0.0;
    double bound = 0.0;
    double worst_radius = 0.0;
    bool pass = false;
};

struct HypothesisReport {
    HypothesisCheck h1;  ///< leading-order contact
    HypothesisCheck h2;  ///< derivative bounds
    HypothesisCheck h3;  ///< sampled second-difference and Hoelder bound
    double correction_residual = 0.0;  ///< sup |h1 - h - lambda r^m| / (lambda r^m)
    bool all_pass() const { return h1.pass && h2.pass && h3.pass; }
};

HypothesisReport check_hypotheses(const GapGeometry& g, int sample_count);

/// True iff h(x') < x_n < eps + h1(x') and |x'| < t.
bool in_gap(const GapGeometry& g, std::span<const double> x, double t);

/// |x'| of a point in R^n.
double radial_part(std::span<const double> x);

}  // namespace narrowgap
