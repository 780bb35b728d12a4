#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "narrowgap/geometry.hpp"
#include "narrowgap/regimes.hpp"
#include "narrowgap/strip_map.hpp"

namespace narrowgap {

struct FieldSample {
    std::vector<double> point;
    double value = 0.0;
    std::vector<double> gradient;
};

/// Smooth radial cutoff: 1 for |x'| <= inner, 0 for |x'| >= outer, quintic in between.
struct Cutoff {
    double inner = std::numeric_limits<double>::infinity();
    double outer = std::numeric_limits<double>::infinity();

    Jet operator()(double r) const;
};

enum class BoundaryKind { constant, s1, s2, tabulated };

/// Dirichlet datum phi on the matrix boundary.
///
/// s1: eta |x'|^k chi(|x'|); s2: eta x_{i0} |x'|^{k-1} chi(|x'|); tabulated: a
/// cubic spline in the strip parameter s of the matrix boundary.
class BoundaryData {
public:
    static BoundaryData constant(double value);
    static BoundaryData s1(double eta, int k, Cutoff cutoff = {});
    static BoundaryData s2(double eta, int k, int odd_axis, Cutoff cutoff = {});
    static BoundaryData tabulated(std::vector<double> s, std::vector<double> values, bool periodic);

    BoundaryKind kind() const { return kind_; }
    double eta() const { return eta_; }
    int k() const { return k_; }
    int odd_axis() const { return odd_axis_; }
    double constant_value() const { return constant_; }
    const Cutoff& cutoff() const { return cutoff_; }

    /// Regime input; throws RegimeError for constant and tabulated data.
    BoundaryClassInfo class_info() const;

    /// Value and ambient gradient at x in R^n (not for tabulated data).
    FieldSample evaluate(std::span<const double> x) const;
    /// Value and s-derivative along the matrix boundary B(s) of a strip map.
    std::array<double, 2> along_boundary(const StripMap& map, double s) const;

    BoundaryData scaled(double alpha) const;
    bool is_zero() const;

private:
    struct Spline;

    BoundaryKind kind_ = BoundaryKind::constant;
    double constant_ = 0.0;
    double eta_ = 0.0;
    int k_ = 0;
    int odd_axis_ = 1;
    Cutoff cutoff_;
    std::shared_ptr<const Spline> spline_;
    double table_scale_ = 1.0;
};

using FieldFunction = std::function<FieldSample(std::span<const double>)>;

/// Normalised height (x_n - h)/delta in the patch, the strip coordinate t elsewhere.
FieldSample ubar(const GapGeometry& g, std::span<const double> x);

/// phi(x', h(x')) (1 - ubar) in the patch, phi(B(s)) (1 - t) elsewhere.
FieldSample ubar0(const GapGeometry& g, const BoundaryData& phi, std::span<const double> x);

/// psi(x', eps + h1(x')) ubar on |x'| <= 3R/2, blended to psi(x) ubar by 2R.
FieldSample vbar(const GapGeometry& g, const FieldFunction& psi, std::span<const double> x);

/// Cutoff used by vbar: 1 on [0, 3R/2], 0 beyond 2R.
Jet patch_cutoff(double r, double R);

/// Sampled C^2 norm of phi along the matrix boundary of the strip map.
double boundary_c2_norm(const BoundaryData& phi, const StripMap& map, int samples = 2048);

/// Meridian coordinates (x_1 or |x'|, x_n) of a point.
Vec2 meridian(std::span<const double> x);

}  // namespace narrowgap
