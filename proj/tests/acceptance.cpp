// Acceptance run: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>

#include "narrowgap/asymptotics.hpp"
#include "narrowgap/refsolver.hpp"
#include "narrowgap/regimes.hpp"
#include "narrowgap/validate.hpp"

using namespace narrowgap;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double R = 0.25;

struct Outcome {
    bool pass = false;
    std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

int worker_threads() { return static_cast<int>(std::clamp(std::thread::hardware_concurrency(), 1u, 8u)); }

std::vector<double> decade_grid(double from, double to, int per_decade)
{
    std::vector<double> eps;
    const int count = static_cast<int>(std::lround(per_decade * std::log10(from / to)));
    for (int i = 0; i <= count; ++i)
        eps.push_back(from * std::pow(10.0, -static_cast<double>(i) / per_decade));
    return eps;
}

const std::vector<double> two_decades = decade_grid(1e-2, 1e-4, 2);

// Far-field data: eta |x'|^k on the flat part of the matrix boundary, cut off before it bends.
const Cutoff data_cutoff{1.0, 1.3};

std::vector<SweepRecord> run_sweep(int n, int m, const BoundaryData& phi, const std::vector<double>& eps,
                                   const Resolution& res = {})
{
    SweepResult s = sweep(make_solver_geometry(n, m, 1.0, eps.front(), R), phi, eps, res, worker_threads());
    if (s.error)
        throw std::runtime_error(*s.error);
    return std::move(s.records);
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome criterion_1()
{
    const auto t0 = Clock::now();
    const auto rec = run_sweep(2, 2, BoundaryData::constant(0.0), two_decades);
    const RateFit fit = fit_rate(rec, Column::a11, FitModel::power, RatePower{Rational(-1, 2), 0}, 0.05);
    const double c = leading_constant(rec, Column::a11, RatePower{Rational(-1, 2), 0});
    const double secs = seconds_since(t0);
    const bool pass = fit.pass && rel(c, pi) <= 0.10 && secs <= 300.0;
    return {pass, fmt::format("a11 slope {:.4f} (target -0.5 +/- 0.05), constant {:.4f} vs pi ({:.2f}%), {:.1f} s",
                              fit.slope, c, 100.0 * rel(c, pi), secs)};
}

Outcome criterion_2()
{
    const BoundaryData phi = BoundaryData::s1(1.0, 2, data_cutoff);
    const auto rec = run_sweep(2, 4, phi, two_decades);
    const Expansion e = expand_Q(2, 4, phi.class_info(), 1.0, 1.0);
    const RateFit fit = fit_rate(rec, Column::Q, FitModel::power, e.power, 0.05);
    const double c = leading_constant(rec, Column::Q, e.power);
    const double target = pi / std::sqrt(2.0);
    const bool pass = fit.pass && e.power == RatePower{Rational(-1, 4), 0} && rel(e.coefficient, target) < 1e-12 &&
                      rel(c, target) <= 0.10;
    return {pass, fmt::format("Q slope {:.4f} (target -0.25 +/- 0.05), constant {:.4f} vs pi/sqrt2 = {:.4f} ({:.2f}%)",
                              fit.slope, c, target, 100.0 * rel(c, target))};
}

Outcome criterion_3()
{
    const auto rec = run_sweep(3, 2, BoundaryData::constant(0.0), two_decades);
    const RateFit fit = fit_rate(rec, Column::a11, FitModel::power_log, RatePower{Rational(0), 1});
    const bool pass = fit.log_detected && rel(fit.slope, pi) <= 0.15;
    return {pass, fmt::format("residual log {:.3e} vs power {:.3e}, log coefficient {:.4f} vs pi ({:.2f}%)",
                              fit.residual_log, fit.residual_power, fit.slope, 100.0 * rel(fit.slope, pi))};
}

Outcome criterion_4()
{
    double worst_identity = 0.0, worst_grad = 0.0;
    int cases = 0;
    for (const auto& [n, m] : std::vector<std::pair<int, int>>{{2, 2}, {2, 4}, {2, 6}, {3, 2}, {3, 4}})
        for (int refine : {0, 1}) {
            Resolution res;
            res.refine = refine;
            const GapGeometry g = make_solver_geometry(n, m, 1.0, 1e-3, R);
            const BoundaryData one = BoundaryData::constant(1.0);
            const SolveResult sol = solve(g, one, res);
            const SweepRecord r = summarize(g, one, sol);
            const double u_norm = std::max(std::abs(sol.u.min_value()), std::abs(sol.u.max_value()));
            worst_identity = std::max(worst_identity, rel(sol.Q, sol.a11));
            worst_grad = std::max(worst_grad, r.sup_grad / u_norm);
            ++cases;
        }
    const bool pass = worst_identity <= 1e-6 && worst_grad <= 1e-8;
    return {pass, fmt::format("{} geometry/mesh cases, max |Q[1]/a11 - 1| = {:.2e}, max sup|grad u|/|u| = {:.2e}",
                              cases, worst_identity, worst_grad)};
}

Outcome criterion_5()
{
    std::string detail;
    bool pass = true;
    for (int m : {2, 4}) {
        const BoundednessReport b =
            check_v1_residual(make_solver_geometry(2, m, 1.0, 1e-2, R), Resolution{}, two_decades, worker_threads());
        pass = pass && b.pass;
        detail += fmt::format("m={} spread {:.3f}; ", m, b.spread);
    }
    return {pass, detail + "bound 10"};
}

Outcome criterion_6()
{
    const BoundaryData phi = BoundaryData::s1(1.0, 2, data_cutoff);
    const V0ResidualReport r =
        check_v0_residual(make_solver_geometry(2, 2, 1.0, 1e-2, R), phi, Resolution{}, two_decades, worker_threads());
    const auto [lo, hi] = std::minmax_element(r.tangential.ratio.begin(), r.tangential.ratio.end());
    return {r.pass, fmt::format("v0 residual spread {:.3f}, tangential sup in [{:.4f}, {:.4f}] spread {:.3f}; bound 10",
                                r.residual.spread, *lo, *hi, r.tangential.spread)};
}

Outcome criterion_7()
{
    const BoundaryData phi = BoundaryData::s1(1.0, 2, data_cutoff);
    const auto axis_rec = run_sweep(2, 2, phi, two_decades);
    const MaxLocation axis = predicted_max_location(classify(2, 2, phi.class_info()), 2, 2);
    const MaxLocationReport ra = check_max_location(axis_rec, axis, 2, false, R);

    // the ring separates from the axis only once eps^{1/6} is well inside the patch
    const std::vector<double> ring_eps{1e-4, 1e-5, 1e-6, 1e-7};
    const auto ring_rec = run_sweep(2, 6, phi, ring_eps);
    const MaxLocation ring = predicted_max_location(classify(2, 6, phi.class_info()), 2, 6);
    const MaxLocationReport rr = check_max_location(ring_rec, ring, 6, false, R);

    double max_axis = 0.0;
    for (const SweepRecord& r : axis_rec)
        max_axis = std::max(max_axis, r.argmax_radius);
    const auto [lo, hi] = std::minmax_element(rr.measured.begin(), rr.measured.end());
    const bool pass = axis.tag == MaxTag::axis_only && ring.tag == MaxTag::both && ra.pass && rr.pass &&
                      rr.excluded.empty() && ra.ok.size() == axis_rec.size();
    return {pass, fmt::format("m=2 {} max argmax |x'| {:.2e}; m=6 {} ring/eps^(1/6) in [{:.3f}, {:.3f}]",
                              max_tag_name(axis.tag), max_axis, max_tag_name(ring.tag), *lo, *hi)};
}

Outcome criterion_8()
{
    const BoundaryData phi = BoundaryData::s1(1.0, 2, data_cutoff);
    const double sigma = 1e-3 * R;
    const LimitQuantities lq = solve_touching(make_solver_geometry(2, 2, 1.0, 0.0, R), phi, sigma, Resolution{});
    const double q_star = *lq.Q_star_half_sigma;
    const double halving = rel(*lq.Q_star_half_sigma, *lq.Q_star);

    const auto rec = run_sweep(2, 2, phi, two_decades);
    std::vector<double> eps, gap;
    bool monotone = true;
    for (const SweepRecord& r : rec) {
        eps.push_back(r.epsilon);
        gap.push_back(std::abs(r.Q - q_star));
        if (gap.size() > 1 && !(gap.back() < gap[gap.size() - 2]))
            monotone = false;
    }
    const RatePower rate{Rational(1, 9), 0};
    const RateFit fit = fit_rate(eps, gap, FitModel::power, rate, 0.05);
    // the remainder is an upper bound: decay at least as fast as eps^{1/9}, within the band
    const bool rate_ok = fit.slope >= rate.epsilon_exponent.value() - 0.05;
    const bool pass = halving < 0.01 && monotone && rate_ok;
    return {pass, fmt::format("Q* = {:.6f}, sigma halving changes it by {:.3f}%, |Q - Q*| {} with slope {:.3f} "
                              "(bound rate 1/9, band 0.05)",
                              q_star, 100.0 * halving, monotone ? "decreasing" : "NOT decreasing", fit.slope)};
}

// Literal transcriptions of the remainder case tables.
double table_k(int n, int m, int k, double eps)
{
    const double d = n + k - 1, L = std::abs(std::log(eps));
    const double mid = std::pow(eps, (d - m) / (d * (m + 1)));
    if (m > n + k)
        return std::pow(eps, 1.0 / m);
    if (m == n + k)
        return std::pow(eps, 1.0 / m) * L;
    if (m == n + k - 1 || m == n - 1)
        return 1.0 / L;
    if (m > n - 1)
        return mid;
    return std::max(mid, std::pow(eps, 1.0 / 6.0));
}

double table_odd(int n, int m, double eps)
{
    const double e = std::pow(eps, (m + n - 2.0) / ((m + 1.0) * (2.0 * m + n - 2.0)));
    if (m > n - 1)
        return e;
    if (m == n - 1)
        return 1.0 / std::abs(std::log(eps));
    return std::max(e, std::pow(eps, 1.0 / 6.0));
}

Outcome criterion_9()
{
    const auto t0 = Clock::now();
    double gamma_err = 0.0, quotient_err = 0.0, table_err = 0.0;
    int checks = 0;
    const std::vector<double> eps_list{1e-2, 1e-4, 1e-6, 1e-9, 1e-12};
    for (int n = 2; n <= 6; ++n)
        for (int m = 2; m <= 10; ++m) {
            for (int i = 0; i <= 5; ++i)
                if (m > n + i - 1) {
                    const double s = (n + i - 1.0) / m;
                    gamma_err = std::max(gamma_err, rel(gamma_const(n, m, i), pi / std::sin(pi * s)));
                    ++checks;
                }
            for (double eps : eps_list) {
                table_err = std::max(table_err, rel(remainder_rate_odd(n, m, eps).value, table_odd(n, m, eps)));
                ++checks;
            }
            for (int k = 2; k <= 5; ++k) {
                for (double eps : eps_list) {
                    table_err = std::max(table_err, rel(remainder_rate(n, m, k, eps).value, table_k(n, m, k, eps)));
                    ++checks;
                }
                if (m < n + k - 1)
                    continue;
                const BoundaryClassInfo info{BoundaryClass::s1, k};
                const GradientCoefficient c = gradient_coefficient(n, m, classify(n, m, info), 1.0, 1.0);
                for (double eps : eps_list) {
                    const double ratio = expand_Q(n, m, info, 1.0, 1.0).value(eps) / expand_a11(n, m, 1.0).value(eps);
                    quotient_err = std::max(quotient_err, rel(c.value(eps), ratio));
                    ++checks;
                }
            }
        }
    const double secs = seconds_since(t0);
    const bool pass = gamma_err <= 1e-12 && quotient_err <= 1e-10 && table_err <= 1e-12 && secs <= 10.0;
    return {pass, fmt::format("{} checks: gamma {:.1e}, quotient {:.1e}, tables {:.1e}, {:.3f} s", checks, gamma_err,
                              quotient_err, table_err, secs)};
}

Outcome criterion_10()
{
    std::string detail;
    bool pass = true;
    const BoundaryData phi = BoundaryData::s1(1.0, 2, data_cutoff);
    for (const auto& [n, m] : std::vector<std::pair<int, int>>{{2, 2}, {2, 4}, {3, 2}}) {
        const GapGeometry g = make_solver_geometry(n, m, 1.0, 1e-3, R);
        std::vector<double> q, a;
        for (int refine : {0, 1, 2}) {
            const SolveResult s = solve(g, phi, Resolution{6, 8, 32, refine});
            q.push_back(s.Q);
            a.push_back(s.a11);
        }
        const auto order = [](const std::vector<double>& v) {
            return std::log2(std::abs(v[0] - v[1]) / std::abs(v[1] - v[2]));
        };
        const double oq = order(q), oa = order(a);
        pass = pass && oq >= 1.0 && oa >= 1.0;
        detail += fmt::format("(n={}, m={}) order Q {:.2f}, a11 {:.2f}; ", n, m, oq, oa);
    }
    return {pass, detail + "required >= 1"};
}

}  // namespace

int main()
{
    const std::vector<std::function<Outcome()>> criteria{criterion_1, criterion_2, criterion_3, criterion_4,
                                                         criterion_5, criterion_6, criterion_7, criterion_8,
                                                         criterion_9, criterion_10};
    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        Outcome o;
        try {
            o = criteria[i]();
        } catch (const std::exception& e) {
            o = {false, fmt::format("exception: {}", e.what())};
        }
        failures += o.pass ? 0 : 1;
        fmt::print("criterion {}: {} {}\n", i + 1, o.pass ? "PASS" : "FAIL", o.detail);
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
