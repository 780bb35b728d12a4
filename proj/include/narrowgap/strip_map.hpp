#pragma once

#include <array>
#include <optional>

#include "narrowgap/geometry.hpp"

namespace narrowgap {

using Vec2 = std::array<double, 2>;

/// Both ends of the mesh line with parameter s, and their s-derivatives.
struct StripSection {
    Vec2 B;   ///< on the matrix boundary (t = 0)
    Vec2 dB;
    Vec2 A;   ///< on the inclusion boundary (t = 1)
    Vec2 dA;
};

/// Ruled map x(s, t) = (1 - t) B(s) + t A(s) of the meridian section of Omega.
///
/// Coordinates are (x_1, x_n) for n = 2 and (|x'|, x_n) for axisymmetric n = 3.
/// For |x'| below the vertical zone the lines are vertical and t equals
/// (x_n - h)/delta exactly. With an excision radius sigma > 0 the parameter range
/// stops at the vertical line |x'| = sigma on either side of the contact point.
class StripMap {
public:
    explicit StripMap(const GapGeometry& g, double excision = 0.0);

    StripSection section(double s) const;
    Vec2 point(double s, double t) const;

    double s_min() const { return s_min_; }
    double s_max() const { return s_max_; }
    bool periodic() const { return periodic_; }
    int n() const { return n_; }

    double centre_height() const { return b_; }
    double half_width() const { return a_; }
    double outer_radius() const { return rB_; }
    double vertical_limit() const { return Xv_; }
    double blend_limit() const { return Xw_; }
    double excision() const { return sigma_; }

    /// Mesh parameter of the vertical line through abscissa x (|x| <= vertical_limit).
    double s_of_abscissa(double x) const;
    /// (s, t) of a meridian point, if it lies in the closed strip.
    std::optional<Vec2> locate(const Vec2& x) const;

    /// Inclusion boundary radius about the centre along polar angle phi, and its derivative.
    std::array<double, 2> inclusion_radius(double phi) const;

private:
    StripSection half_section(double s) const;  // s in [0, pi]
    std::array<double, 3> outer_rho(double s) const;
    Jet h1(double x) const;

    int n_;
    int m_;
    double eps_;
    double a_, b_, rB_;
    double Xv_, Xw_;
    double s_v_, s_w_, s_1_, s_2_;
    std::array<double, 6> cap_;  // quintic coefficients of the outer radius on [s_1, s_2]
    double sigma_;
    double s_min_, s_max_;
    bool periodic_;
};

}  // namespace narrowgap
