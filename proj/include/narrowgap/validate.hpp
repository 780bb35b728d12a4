#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "narrowgap/asymptotics.hpp"
#include "narrowgap/auxfields.hpp"
#include "narrowgap/geometry.hpp"
#include "narrowgap/refsolver.hpp"
#include "narrowgap/regimes.hpp"

namespace narrowgap {

/// One sample of the gradient profile at signed abscissa x' (|x'| for n = 3).
struct ProfilePoint {
    double x = 0.0;
    double grad_bottom = 0.0;  ///< |grad u| on the matrix boundary
    double grad_max = 0.0;     ///< max over the gap of |grad u|
};

struct SweepRecord {
    double epsilon = 0.0;
    double Q = 0.0;
    double a11 = 0.0;
    double C1 = 0.0;
    double Q_boundary = 0.0;
    double sup_grad = 0.0;
    double argmax_radius = 0.0;
    double ring_radius = 0.0;      ///< largest off-axis local maximum of the profile, 0 if none
    double v1_residual = 0.0;      ///< sup |grad(v1 - ubar)| / delta^{1-2/m}
    double v0_residual = 0.0;      ///< sup |grad(v0 - ubar0)| / (delta^{1-2/m} (|phi| + delta^{1/m} ||phi||))
    double tangential_sup = 0.0;   ///< sup |grad_{x'} v0| over the patch
    MeshStats mesh_stats;
    std::vector<ProfilePoint> profile;
};

struct SweepResult {
    std::vector<SweepRecord> records;  ///< sorted by eps descending
    std::optional<std::string> error;  ///< set if some solve failed; records hold the rest
};

/// Solves at every eps (in parallel) and reduces each solution to a record.
SweepResult sweep(const GapGeometry& geom_template, const BoundaryData& phi, const std::vector<double>& eps_list,
                  const Resolution& res, int threads = 1);

/// Reduces one solution; exposed for single solves.
SweepRecord summarize(const GapGeometry& g, const BoundaryData& phi, const SolveResult& sol);

/// Radii sampled in the patch: 0 and 64 log-spaced points per decade up to r_max.
std::vector<double> sample_radii(const GapGeometry& g, double r_max);

enum class Column { Q, a11, C1, sup_grad, Q_boundary };
enum class FitModel { power, power_log };

double column_value(const SweepRecord& r, Column c);
std::string column_name(Column c);

struct RateFit {
    FitModel model = FitModel::power;
    double slope = 0.0;        ///< eps exponent (power) or |ln eps| coefficient (power_log)
    double intercept = 0.0;
    double r_squared = 0.0;
    double residual_power = 0.0;  ///< RMS relative misfit of the power model
    double residual_log = 0.0;    ///< RMS relative misfit of c |ln eps| + b
    bool log_detected = false;
    RatePower target;
    double tolerance = 0.05;
    bool pass = false;
};

/// Least-squares fit of one column against eps.
RateFit fit_rate(const std::vector<SweepRecord>& records, Column column, FitModel model, const RatePower& target,
                 double tolerance = 0.05);
RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& values, FitModel model,
                 const RatePower& target, double tolerance = 0.05);

/// value(eps_min) / rate(eps_min).
double leading_constant(const std::vector<SweepRecord>& records, Column column, const RatePower& rate);

struct BoundednessReport {
    std::vector<double> epsilon;
    std::vector<double> ratio;
    double spread = 0.0;  ///< max/min of ratio
    double bound = 10.0;
    bool pass = false;
};

BoundednessReport bounded_sequence(const std::vector<double>& eps, const std::vector<double>& values,
                                   double bound = 10.0);

/// Residual of v1 against ubar across a sweep.
BoundednessReport check_v1_residual(const std::vector<SweepRecord>& records, double bound = 10.0);
BoundednessReport check_v1_residual(const GapGeometry& geom, const Resolution& res, const std::vector<double>& eps_list,
                                    int threads = 1);

struct V0ResidualReport {
    BoundednessReport residual;
    BoundednessReport tangential;
    double phi_norm = 0.0;
    bool pass = false;
};

V0ResidualReport check_v0_residual(const std::vector<SweepRecord>& records, double phi_norm, double bound = 10.0);
V0ResidualReport check_v0_residual(const GapGeometry& geom, const BoundaryData& phi, const Resolution& res,
                                   const std::vector<double>& eps_list, int threads = 1);

struct MaxLocationReport {
    MaxLocation predicted;
    std::vector<double> epsilon;
    std::vector<double> measured;  ///< argmax radius, or ring radius / eps^{1/m} for ring checks
    std::vector<bool> ok;
    std::vector<double> excluded;  ///< eps whose ring scale eps^{1/m} lies outside the patch
    bool skipped = false;
    std::string note;
    bool pass = false;
};

/// Axis: argmax within 3 axis cells. Ring: radius / eps^{1/m} in [1/4, 4], judged only
/// where eps^{1/m} < patch_radius.
MaxLocationReport check_max_location(const std::vector<SweepRecord>& records, const MaxLocation& predicted, int m,
                                     bool degenerate = false,
                                     double patch_radius = std::numeric_limits<double>::infinity());

/// Floats with 17 significant digits.
std::string format_real(double v);

void write_sweep_csv(const std::string& path, const std::vector<SweepRecord>& records);
void write_profile_csv(const std::string& path, const SweepRecord& record);

}  // namespace narrowgap
