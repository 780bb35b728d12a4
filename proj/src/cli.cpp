#include "narrowgap/cli.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <ostream>

#include <CLI11.hpp>
#include <Eigen/Core>
#include <fmt/chrono.h>
#include <fmt/format.h>
#include <gsl/gsl_version.h>
#include <nlohmann/json.hpp>

#include "narrowgap/asymptotics.hpp"
#include "narrowgap/errors.hpp"
#include "narrowgap/refsolver.hpp"
#include "narrowgap/regimes.hpp"
#include "narrowgap/validate.hpp"

#ifndef NARROWGAP_VERSION
#define NARROWGAP_VERSION "unknown"
#endif

namespace narrowgap {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;
using Clock = std::chrono::system_clock;

constexpr double identity_tolerance = 1e-6;

std::string timestamp(Clock::time_point t) { return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(Clock::to_time_t(t))); }

json real(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

void write_json(const fs::path& path, const json& j)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    out << j.dump(2) << '\n';
}

class RunDirectory {
public:
    RunDirectory(const RunConfig& cfg, const RunOptions& opt, std::string command)
        : root_(opt.out_dir), command_(std::move(command)), cfg_(cfg), threads_(opt.threads), start_(Clock::now())
    {
        fs::create_directories(root_ / "profiles");
        write_json(root_ / "config.json", cfg.raw);
    }

    const fs::path& root() const { return root_; }
    fs::path profile(const std::string& name) const { return root_ / "profiles" / name; }

    void finish(int status) const
    {
        const json manifest = {
            {"command", command_},
            {"config_hash", config_hash(cfg_.raw)},
            {"threads", threads_},
            {"exit_status", status},
            {"started", timestamp(start_)},
            {"finished", timestamp(Clock::now())},
            {"versions",
             {{"narrowgap", NARROWGAP_VERSION},
              {"compiler", __VERSION__},
              {"eigen", fmt::format("{}.{}.{}", EIGEN_WORLD_VERSION, EIGEN_MAJOR_VERSION, EIGEN_MINOR_VERSION)},
              {"gsl", GSL_VERSION},
              {"fmt", fmt::format("{}.{}.{}", FMT_VERSION / 10000, FMT_VERSION / 100 % 100, FMT_VERSION % 100)},
              {"nlohmann_json", fmt::format("{}.{}.{}", NLOHMANN_JSON_VERSION_MAJOR, NLOHMANN_JSON_VERSION_MINOR,
                                            NLOHMANN_JSON_VERSION_PATCH)}}},
        };
        write_json(root_ / "manifest.json", manifest);
    }

private:
    fs::path root_;
    std::string command_;
    const RunConfig& cfg_;
    int threads_;
    Clock::time_point start_;
};

void require_solver_dimension(const RunConfig& cfg)
{
    if (cfg.geometry.n != 2 && cfg.geometry.n != 3)
        throw ConfigError("geometry.n: the solver supports n = 2 and axisymmetric n = 3");
}

bool is_constant(const BoundaryData& phi) { return phi.kind() == BoundaryKind::constant; }

/// Limits from the config, or computed on the touching domain when touching_sigma is set.
std::optional<LimitQuantities> resolve_limits(const RunConfig& cfg, const RegimeCase& rc, std::ostream& log)
{
    if (cfg.limits)
        return cfg.limits;
    if (!cfg.touching_sigma || !rc.needs_q_star())
        return std::nullopt;
    require_solver_dimension(cfg);
    const GapGeometry g_star = cfg.geometry.with_epsilon(0.0);
    LimitQuantities lq = solve_touching(g_star, cfg.boundary, *cfg.touching_sigma, cfg.resolution);
    log << fmt::format("Q* = {} (sigma = {}), {} (sigma/2)\n", format_real(*lq.Q_star), format_real(lq.cutoff_sigma),
                       format_real(*lq.Q_star_half_sigma));
    // the smaller excision is the reported estimate
    lq.Q_star = lq.Q_star_half_sigma;
    if (rc.needs_a11_star()) {
        const LimitQuantities la = solve_touching(g_star, std::nullopt, *cfg.touching_sigma, cfg.resolution);
        lq.a11_star = la.a11_star_half_sigma;
        lq.a11_star_half_sigma = la.a11_star_half_sigma;
        lq.a11_star_richardson = la.a11_star_richardson;
    }
    return lq;
}

json limits_json(const std::optional<LimitQuantities>& lq)
{
    if (!lq)
        return nullptr;
    json j;
    auto put = [&j](const char* key, const std::optional<double>& v) { j[key] = v ? real(*v) : json(nullptr); };
    put("Q_star", lq->Q_star);
    put("a11_star", lq->a11_star);
    put("Q_star_half_sigma", lq->Q_star_half_sigma);
    put("Q_star_richardson", lq->Q_star_richardson);
    put("a11_star_half_sigma", lq->a11_star_half_sigma);
    put("a11_star_richardson", lq->a11_star_richardson);
    j["cutoff_sigma"] = real(lq->cutoff_sigma);
    return j;
}

json fit_json(const RateFit& f)
{
    return {{"model", f.model == FitModel::power ? "power" : "power_log"},
            {"slope", real(f.slope)},
            {"intercept", real(f.intercept)},
            {"r_squared", real(f.r_squared)},
            {"residual_power", real(f.residual_power)},
            {"residual_log", real(f.residual_log)},
            {"log_detected", f.log_detected},
            {"target", f.target},
            {"tolerance", f.tolerance},
            {"pass", f.pass}};
}

json boundedness_json(const BoundednessReport& r)
{
    json ratio = json::array();
    for (std::size_t i = 0; i < r.ratio.size(); ++i)
        ratio.push_back({{"epsilon", r.epsilon[i]}, {"value", real(r.ratio[i])}});
    return {{"sequence", ratio}, {"spread", real(r.spread)}, {"bound", r.bound}, {"pass", r.pass}};
}

json mesh_json(const MeshStats& s)
{
    return {{"nodes", s.nodes},
            {"cells", s.cells},
            {"s_cells", s.s_cells},
            {"t_cells", s.t_cells},
            {"min_gap_resolution", real(s.min_gap_resolution)},
            {"axis_cell_size", real(s.axis_cell_size)},
            {"min_jacobian", real(s.min_jacobian)}};
}

std::string verdict(bool pass) { return pass ? "PASS" : "FAIL"; }

/// Default asym points: on the axis and at the ring scale, both mid-gap.
std::vector<std::vector<double>> default_points(const GapGeometry& g)
{
    std::vector<std::vector<double>> pts;
    for (const double r : {0.0, std::min(std::pow(g.epsilon, 1.0 / g.m), g.R)}) {
        std::vector<double> x(static_cast<std::size_t>(g.n), 0.0);
        x[0] = r;
        x.back() = g.h(r).f + 0.5 * gap_delta_radial(g, r);
        pts.push_back(std::move(x));
    }
    return pts;
}

}  // namespace

int cmd_asym(const RunConfig& cfg, const RunOptions& opt, std::ostream& log)
{
    const GapGeometry& g = cfg.geometry;
    const BoundaryData& phi = cfg.boundary;
    const auto points = cfg.points.empty() ? default_points(g) : cfg.points;
    for (const auto& x : points)
        if (radial_part(x) > 2.0 * g.R)
            throw ConfigError("points: every point must satisfy |x'| <= 2R");

    RunDirectory run(cfg, opt, "asym");
    json report;
    std::ofstream csv(run.profile("asym_points.csv"));
    csv << "point,x_prime_norm,x_n,grad_norm";
    for (int i = 1; i <= g.n; ++i)
        csv << ",grad_" << i;
    csv << '\n';

    if (is_constant(phi)) {
        log << "constant boundary data: u is constant and its gradient vanishes\n";
        report["regime"] = "constant_data";
        report["leading_coefficient"] = 0.0;
        for (std::size_t p = 0; p < points.size(); ++p) {
            csv << fmt::format("{},{},{},{}", p, format_real(radial_part(points[p])), format_real(points[p].back()),
                               format_real(0.0));
            for (int i = 0; i < g.n; ++i)
                csv << ',' << format_real(0.0);
            csv << '\n';
        }
        write_json(run.root() / "fits.json", report);
        run.finish(exit_ok);
        return exit_ok;
    }

    const RegimeCase rc = classify(g.n, g.m, phi.class_info());
    const auto limits = resolve_limits(cfg, rc, log);
    if (rc.needs_q_star() && (!limits || !limits->Q_star))
        throw ConfigError(fmt::format("Q* required for regime {}: give limits.Q_star or touching_sigma",
                                      regime_name(rc.regime)));
    if (rc.needs_a11_star() && (!limits || !limits->a11_star))
        throw ConfigError(fmt::format("a11* required for regime {}: give limits.a11_star", regime_name(rc.regime)));

    const GradientCoefficient coef = gradient_coefficient(g.n, g.m, rc, g.lambda, phi.eta(), limits);
    const MaxLocation loc = predicted_max_location(rc, g.n, g.m);
    log << fmt::format("regime            {}{}\n", regime_name(rc.regime), rc.tie ? " (threshold case)" : "");
    if (coef.degenerate)
        log << "Q* vanishes: outside theorem hypotheses, reporting grad ubar0 only\n";
    log << fmt::format("coefficient       {} * {}\n", format_real(coef.coefficient), coef.power.str());
    log << fmt::format("at eps = {}     {}\n", format_real(g.epsilon), format_real(coef.value(g.epsilon)));
    log << fmt::format("relative remainder {}\n", coef.relative_remainder.str());
    log << fmt::format("max location      {}\n", max_tag_name(loc.tag));

    report["regime"] = regime_name(rc.regime);
    report["tie"] = rc.tie;
    report["degenerate"] = coef.degenerate;
    report["gradient_coefficient"] = {{"coefficient", real(coef.coefficient)},
                                      {"power", coef.power},
                                      {"relative_remainder", coef.relative_remainder},
                                      {"value", real(coef.value(g.epsilon))}};
    report["max_location"] = loc;
    report["limits"] = limits_json(limits);
    report["expansion_Q"] = expand_Q(g.n, g.m, phi.class_info(), g.lambda, phi.eta(), limits);
    if (!rc.needs_a11_star() || (limits && limits->a11_star))
        report["expansion_a11"] = expand_a11(g.n, g.m, g.lambda, limits);

    json samples = json::array();
    for (std::size_t p = 0; p < points.size(); ++p) {
        const GradientPrediction pred = gradient_asymptotic(g, phi, rc, limits, points[p]);
        csv << fmt::format("{},{},{},{}", p, format_real(radial_part(points[p])), format_real(points[p].back()),
                           format_real(pred.field.value));
        for (const double gi : pred.field.gradient)
            csv << ',' << format_real(gi);
        csv << '\n';
        samples.push_back({{"point", points[p]},
                           {"gradient", pred.field.gradient},
                           {"remainder_bound", real(pred.remainder_bound)},
                           {"relative_remainder", real(pred.relative_remainder)}});
        log << fmt::format("grad u at ({}) = ({})\n", fmt::join(points[p], ", "),
                           fmt::join(pred.field.gradient, ", "));
    }
    report["samples"] = samples;
    write_json(run.root() / "fits.json", report);
    run.finish(exit_ok);
    return exit_ok;
}

int cmd_solve(const RunConfig& cfg, const RunOptions& opt, std::ostream& log)
{
    require_solver_dimension(cfg);
    const GapGeometry& g = cfg.geometry;
    RunDirectory run(cfg, opt, "solve");

    const SolveResult sol = solve(g, cfg.boundary, cfg.resolution);
    const SweepRecord rec = summarize(g, cfg.boundary, sol);

    // Q[1] = a11 on the same discretization
    const auto& disc = sol.v1.shared_discretization();
    const double q_one = flux_Q(disc->solve(disc->v0_data(BoundaryData::constant(1.0))), g);
    const double identity_error = std::abs(q_one - sol.a11) / std::abs(sol.a11);
    const bool identity_ok = identity_error <= identity_tolerance;

    log << fmt::format("Q        {}\na11      {}\nC1       {}\nsup|Du|  {} at |x'| = {}\n", format_real(sol.Q),
                       format_real(sol.a11), format_real(sol.C1), format_real(rec.sup_grad),
                       format_real(rec.argmax_radius));
    log << fmt::format("Q[1]/a11 - 1 = {:.3e} {}\n", identity_error, verdict(identity_ok));

    const json result = {{"epsilon", g.epsilon},
                         {"Q", real(sol.Q)},
                         {"a11", real(sol.a11)},
                         {"C1", real(sol.C1)},
                         {"Q_boundary", real(sol.Q_boundary)},
                         {"sup_grad", real(rec.sup_grad)},
                         {"argmax_radius", real(rec.argmax_radius)},
                         {"mesh", mesh_json(sol.mesh_stats)},
                         {"identity_check", {{"Q_of_one", real(q_one)}, {"relative_error", real(identity_error)},
                                             {"pass", identity_ok}}}};
    write_json(run.root() / "result.json", result);
    write_sweep_csv((run.root() / "sweep.csv").string(), {rec});
    write_profile_csv(run.profile("profile.csv").string(), rec);
    const int status = identity_ok ? exit_ok : exit_check_failed;
    run.finish(status);
    return status;
}

int cmd_sweep(const RunConfig& cfg, const RunOptions& opt, std::ostream& log)
{
    require_solver_dimension(cfg);
    if (cfg.eps_list.size() < 4)
        throw ConfigError(">= 4 points required in eps_list");
    const GapGeometry& g = cfg.geometry;
    const BoundaryData& phi = cfg.boundary;
    RunDirectory run(cfg, opt, "sweep");

    const SweepResult result = sweep(g, phi, cfg.eps_list, cfg.resolution, opt.threads);
    write_sweep_csv((run.root() / "sweep.csv").string(), result.records);
    for (std::size_t i = 0; i < result.records.size(); ++i)
        write_profile_csv(run.profile(fmt::format("eps_{:02d}.csv", i)).string(), result.records[i]);
    if (result.error) {
        log << "sweep aborted: " << *result.error << '\n';
        run.finish(exit_check_failed);
        return exit_check_failed;
    }

    json fits;
    bool all_pass = true;
    auto report = [&](const std::string& name, bool pass, const std::string& detail) {
        log << fmt::format("{:<28} {}  {}\n", name, verdict(pass), detail);
        all_pass = all_pass && pass;
    };

    const Expansion a11_exp = expand_a11(g.n, g.m, g.lambda);
    const bool log_rate = a11_exp.power.log_exponent != 0 && a11_exp.power.epsilon_exponent == Rational(0);
    const RateFit fa = fit_rate(result.records, Column::a11, log_rate ? FitModel::power_log : FitModel::power,
                                a11_exp.power);
    fits["a11"] = fit_json(fa);
    if (log_rate) {
        const double rel = std::abs(fa.slope - a11_exp.coefficient) / a11_exp.coefficient;
        fits["a11"]["coefficient_target"] = a11_exp.coefficient;
        fits["a11"]["coefficient_relative_error"] = real(rel);
        report("a11 log rate", fa.pass && rel <= 0.15,
               fmt::format("coefficient {} vs {}", format_real(fa.slope), format_real(a11_exp.coefficient)));
    } else {
        const double c = leading_constant(result.records, Column::a11, a11_exp.power);
        const double rel = std::abs(c - a11_exp.coefficient) / a11_exp.coefficient;
        fits["a11"]["leading_constant"] = real(c);
        fits["a11"]["constant_relative_error"] = real(rel);
        report("a11 rate", fa.pass && rel <= 0.10,
               fmt::format("slope {} vs {}, constant {} vs {}", format_real(fa.slope), a11_exp.power.str(),
                           format_real(c), format_real(a11_exp.coefficient)));
    }

    if (is_constant(phi)) {
        double worst = 0.0;
        for (const SweepRecord& r : result.records)
            worst = std::max(worst, std::abs(r.Q - phi.constant_value() * r.a11) / std::abs(r.a11));
        fits["Q_identity"] = {{"max_relative_error", real(worst)}, {"pass", worst <= identity_tolerance}};
        report("Q = c a11 identity", worst <= identity_tolerance, fmt::format("max error {:.3e}", worst));
    } else {
        const RegimeCase rc = classify(g.n, g.m, phi.class_info());
        if (rc.regime == Regime::s1_explicit) {
            const Expansion q_exp = expand_Q(g.n, g.m, phi.class_info(), g.lambda, phi.eta());
            const RateFit fq = fit_rate(result.records, Column::Q, FitModel::power, q_exp.power);
            const double c = leading_constant(result.records, Column::Q, q_exp.power);
            const double rel = std::abs(c - q_exp.coefficient) / std::abs(q_exp.coefficient);
            fits["Q"] = fit_json(fq);
            fits["Q"]["leading_constant"] = real(c);
            fits["Q"]["constant_relative_error"] = real(rel);
            report("Q rate", fq.pass && rel <= 0.10,
                   fmt::format("slope {} vs {}, constant {} vs {}", format_real(fq.slope), q_exp.power.str(),
                               format_real(c), format_real(q_exp.coefficient)));
        } else {
            log << fmt::format("{:<28} SKIP  Q tends to Q* in regime {}\n", "Q rate", regime_name(rc.regime));
        }

        const auto limits = resolve_limits(cfg, rc, log);
        const bool degenerate = rc.needs_q_star() && limits && limits->Q_star &&
                                std::abs(*limits->Q_star) <= q_star_zero_tolerance;
        if (rc.needs_q_star() && !limits) {
            log << fmt::format("{:<28} SKIP  Q* unknown; set touching_sigma or limits.Q_star\n", "max location");
        } else {
            const MaxLocationReport ml = check_max_location(result.records, predicted_max_location(rc, g.n, g.m),
                                                            g.m, degenerate, g.R);
            fits["max_location"] = {{"predicted", ml.predicted}, {"epsilon", ml.epsilon},  {"measured", ml.measured},
                                    {"excluded", ml.excluded},   {"skipped", ml.skipped}, {"note", ml.note},
                                    {"pass", ml.pass}};
            report("max location", ml.pass,
                   ml.skipped ? ml.note
                              : fmt::format("{} measured ({}){}{}", max_tag_name(ml.predicted.tag),
                                            fmt::join(ml.measured, ", "), ml.note.empty() ? "" : "; ", ml.note));
        }
        fits["limits"] = limits_json(limits);

        const V0ResidualReport v0 = check_v0_residual(result.records, patch_c2_norm(g, phi), cfg.check_bound);
        fits["v0_residual"] = boundedness_json(v0.residual);
        fits["v0_tangential"] = boundedness_json(v0.tangential);
        report("v0 residual bounded", v0.residual.pass, fmt::format("spread {}", format_real(v0.residual.spread)));
        report("v0 tangential bounded", v0.tangential.pass,
               fmt::format("spread {}", format_real(v0.tangential.spread)));
    }

    const BoundednessReport v1 = check_v1_residual(result.records, cfg.check_bound);
    fits["v1_residual"] = boundedness_json(v1);
    report("v1 residual bounded", v1.pass, fmt::format("spread {}", format_real(v1.spread)));

    json meshes = json::array();
    for (const SweepRecord& r : result.records)
        meshes.push_back({{"epsilon", r.epsilon}, {"mesh", mesh_json(r.mesh_stats)}});
    fits["meshes"] = meshes;
    fits["pass"] = all_pass;
    write_json(run.root() / "fits.json", fits);
    const int status = all_pass ? exit_ok : exit_check_failed;
    run.finish(status);
    return status;
}

int cmd_check_geometry(const RunConfig& cfg, const RunOptions& opt, std::ostream& log)
{
    RunDirectory run(cfg, opt, "check-geometry");
    const HypothesisReport rep = check_hypotheses(cfg.geometry, cfg.hypothesis_samples);
    json j;
    for (const HypothesisCheck* c : {&rep.h1, &rep.h2, &rep.h3}) {
        log << fmt::format("{:<6} worst {} bound {} at |x'| = {}  {}\n", c->name, format_real(c->worst_ratio),
                           format_real(c->bound), format_real(c->worst_radius), verdict(c->pass));
        j[c->name] = {{"worst_ratio", real(c->worst_ratio)},
                      {"bound", c->bound},
                      {"worst_radius", real(c->worst_radius)},
                      {"pass", c->pass}};
    }
    log << fmt::format("correction |h1 - h - lambda r^m| / (lambda r^m) <= {}\n", format_real(rep.correction_residual));
    j["correction_residual"] = real(rep.correction_residual);
    j["pass"] = rep.all_pass();
    write_json(run.root() / "fits.json", j);
    const int status = rep.all_pass() ? exit_ok : exit_check_failed;
    run.finish(status);
    return status;
}

int run_cli(int argc, char** argv)
{
    CLI::App app{"Gradient asymptotics and reference solves for narrow-gap conductivity problems"};
    app.require_subcommand(1);
    app.fallthrough();
    std::string config_path;
    RunOptions opt;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", opt.out_dir, "output directory for this run");
    app.add_option("--threads", opt.threads, "worker threads for sweeps")->check(CLI::PositiveNumber);

    auto* asym = app.add_subcommand("asym", "closed-form leading-order gradient");
    auto* solve_cmd = app.add_subcommand("solve", "reference solve at geometry.epsilon");
    auto* sweep_cmd = app.add_subcommand("sweep", "eps sweep with rate fits and residual checks");
    auto* geom = app.add_subcommand("check-geometry", "sample the contact hypotheses");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_config_error;
    }

    try {
        const RunConfig cfg = load_config(config_path);
        if (asym->parsed())
            return cmd_asym(cfg, opt, std::cout);
        if (solve_cmd->parsed())
            return cmd_solve(cfg, opt, std::cout);
        if (sweep_cmd->parsed())
            return cmd_sweep(cfg, opt, std::cout);
        if (geom->parsed())
            return cmd_check_geometry(cfg, opt, std::cout);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const RegimeError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return exit_config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_check_failed;
    }
    return exit_config_error;
}

}  // namespace narrowgap
