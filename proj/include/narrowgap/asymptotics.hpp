#pragma once

#include <optional>
#include <span>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "narrowgap/auxfields.hpp"
#include "narrowgap/geometry.hpp"
#include "narrowgap/refsolver.hpp"
#include "narrowgap/regimes.hpp"

namespace narrowgap {

enum class LimitTag { Q_star, a11_star, both };

/// coefficient * power(eps) * (1 + O(remainder(eps))); the remainder is
/// absolute (O(remainder) added to the value) when remainder_absolute is set.
struct Expansion {
    double coefficient = 0.0;
    RatePower power;
    RatePower remainder;
    bool remainder_absolute = false;
    std::optional<LimitTag> uses_limit;

    double value(double eps) const;
    double remainder_value(double eps) const;
};

/// Leading-order flux Q[phi] for S1 or S2 data.
Expansion expand_Q(int n, int m, const BoundaryClassInfo& data, double lambda, double eta,
                   const std::optional<LimitQuantities>& limits = std::nullopt);

/// Leading-order energy a11.
Expansion expand_a11(int n, int m, double lambda, const std::optional<LimitQuantities>& limits = std::nullopt);

/// Factor multiplying grad ubar in the leading-order gradient: coefficient * power(eps).
struct GradientCoefficient {
    double coefficient = 0.0;
    RatePower power;
    RatePower relative_remainder;  ///< r_eps or its odd-data counterpart
    bool degenerate = false;       ///< Q* vanished; only grad ubar0 is reported

    double value(double eps) const { return coefficient * power.evaluate(eps); }
};

struct GradientPrediction {
    FieldSample field;                 ///< value slot holds |grad u|
    GradientCoefficient coefficient;
    double coefficient_value = 0.0;    ///< at the geometry's eps
    double relative_remainder = 0.0;   ///< at the geometry's eps
    double remainder_bound = 0.0;      ///< delta^{1-2/m} ||phi||_{C^2}
    bool degenerate = false;
};

/// |Q*| at or below this is treated as zero.
inline constexpr double q_star_zero_tolerance = 1e-10;

GradientCoefficient gradient_coefficient(int n, int m, const RegimeCase& regime, double lambda, double eta,
                                         const std::optional<LimitQuantities>& limits = std::nullopt);

/// Leading-order grad u at x in the patch |x'| <= 2R.
GradientPrediction gradient_asymptotic(const GapGeometry& g, const BoundaryData& phi, const RegimeCase& regime,
                                       const std::optional<LimitQuantities>& limits, std::span<const double> x);

/// C^2 norm of phi(x', h(x')) over |x'| <= 2R.
double patch_c2_norm(const GapGeometry& g, const BoundaryData& phi, int samples = 512);

enum class MaxTag { axis_only, ring_only, both };

struct MaxLocation {
    MaxTag tag = MaxTag::axis_only;
    std::optional<RatePower> ring_radius_scale;  ///< eps^{1/m} when a ring is predicted
};

MaxLocation predicted_max_location(const RegimeCase& regime, int n, int m);

std::string max_tag_name(MaxTag t);
std::string limit_tag_name(LimitTag t);

void to_json(nlohmann::json& j, const RatePower& p);
void to_json(nlohmann::json& j, const Expansion& e);
void to_json(nlohmann::json& j, const MaxLocation& l);

}  // namespace narrowgap
