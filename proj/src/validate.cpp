#include "narrowgap/validate.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>

#include "narrowgap/errors.hpp"

namespace narrowgap {

namespace {

constexpr int per_decade = 64;
constexpr int t_samples = 16;

std::vector<double> ambient(int n, double x, double y)
{
    if (n == 2)
        return {x, y};
    return {std::abs(x), 0.0, y};
}

Vec2 meridian_of(const FieldSample& f) { return {f.gradient.front(), f.gradient.back()}; }

double norm2(const Vec2& v) { return std::hypot(v[0], v[1]); }

struct LineFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r_squared = 1.0;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y)
{
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx <= 0.0)
        throw DomainError("fit needs distinct abscissae");
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (f.intercept + f.slope * x[i]);
        sse += r * r;
    }
    f.r_squared = syy > 0.0 ? std::clamp(1.0 - sse / syy, 0.0, 1.0) : 1.0;
    return f;
}

}  // namespace

std::vector<double> sample_radii(const GapGeometry& g, double r_max)
{
    const double ell = std::pow(g.epsilon / g.lambda, 1.0 / g.m);
    const double r_min = std::min(1e-2 * ell, 1e-3 * r_max);
    const int count = static_cast<int>(std::ceil(per_decade * std::log10(r_max / r_min)));
    std::vector<double> r{0.0};
    for (int i = 0; i <= count; ++i)
        r.push_back(r_min * std::pow(r_max / r_min, static_cast<double>(i) / count));
    return r;
}

SweepRecord summarize(const GapGeometry& g, const BoundaryData& phi, const SolveResult& sol)
{
    SweepRecord rec;
    rec.epsilon = g.epsilon;
    rec.Q = sol.Q;
    rec.a11 = sol.a11;
    rec.C1 = sol.C1;
    rec.Q_boundary = sol.Q_boundary;
    rec.mesh_stats = sol.mesh_stats;

    const StripMap& map = sol.u.discretization().map();
    const bool closed_form = phi.kind() != BoundaryKind::tabulated && !phi.is_zero();
    const double phi_norm = closed_form ? patch_c2_norm(g, phi) : 0.0;
    const double expo = 1.0 - 2.0 / g.m;

    const std::vector<double> radii = sample_radii(g, 2.0 * g.R);
    std::vector<double> xs;
    if (g.n == 2)
        for (auto it = radii.rbegin(); it != radii.rend() - 1; ++it)
            xs.push_back(-*it);
    xs.insert(xs.end(), radii.begin(), radii.end());

    rec.profile.reserve(xs.size());
    for (const double x : xs) {
        const double r = std::abs(x);
        const double s = map.s_of_abscissa(x);
        const double h = g.h(r).f;
        const double delta = gap_delta_radial(g, r);
        const bool inner = r <= g.R;
        std::vector<double> xb = ambient(g.n, x, h);
        xb.back() = h;
        const double phi_h = closed_form ? std::abs(phi.evaluate(xb).value) : 0.0;

        ProfilePoint p{x, 0.0, 0.0};
        for (int j = 0; j < t_samples; ++j) {
            const double t = static_cast<double>(j) / (t_samples - 1);
            const double gu = norm2(sol.u.meridian_gradient_at(s, t));
            if (j == 0)
                p.grad_bottom = gu;
            p.grad_max = std::max(p.grad_max, gu);
            if (gu > rec.sup_grad) {
                rec.sup_grad = gu;
                rec.argmax_radius = r;
            }
            if (!inner)
                continue;
            const std::vector<double> xa = ambient(g.n, x, h + t * delta);
            const Vec2 dv1 = sol.v1.meridian_gradient_at(s, t);
            const Vec2 du = meridian_of(ubar(g, xa));
            rec.v1_residual =
                std::max(rec.v1_residual, std::hypot(dv1[0] - du[0], dv1[1] - du[1]) / std::pow(delta, expo));
            if (!closed_form)
                continue;
            const Vec2 dv0 = sol.v0.meridian_gradient_at(s, t);
            const Vec2 du0 = meridian_of(ubar0(g, phi, xa));
            const double weight = std::pow(delta, expo) * (phi_h + std::pow(delta, 1.0 / g.m) * phi_norm);
            rec.v0_residual = std::max(rec.v0_residual, std::hypot(dv0[0] - du0[0], dv0[1] - du0[1]) / weight);
            rec.tangential_sup = std::max(rec.tangential_sup, std::abs(dv0[0]));
        }
        rec.profile.push_back(p);
    }

    // fold both sides onto |x'| and look for the highest off-axis local maximum
    std::vector<double> folded(radii.size(), 0.0);
    for (const ProfilePoint& p : rec.profile) {
        const auto it = std::lower_bound(radii.begin(), radii.end(), std::abs(p.x));
        const std::size_t i = static_cast<std::size_t>(it - radii.begin());
        if (i < folded.size())
            folded[i] = std::max(folded[i], p.grad_max);
    }
    double best = -1.0;
    for (std::size_t i = 1; i + 1 < folded.size(); ++i) {
        if (folded[i] >= folded[i - 1] && folded[i] > folded[i + 1] && folded[i] > best) {
            best = folded[i];
            rec.ring_radius = radii[i];
        }
    }
    return rec;
}

SweepResult sweep(const GapGeometry& geom_template, const BoundaryData& phi, const std::vector<double>& eps_list,
                  const Resolution& res, int threads)
{
    if (eps_list.empty())
        throw DomainError("empty eps list");
    std::vector<double> eps = eps_list;
    std::sort(eps.begin(), eps.end(), std::greater<>());

    std::vector<std::optional<SweepRecord>> out(eps.size());
    std::vector<std::string> errors(eps.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < eps.size(); i = next++) {
            try {
                const GapGeometry g = geom_template.with_epsilon(eps[i]);
                out[i] = summarize(g, phi, solve(g, phi, res));
            } catch (const std::exception& e) {
                errors[i] = fmt::format("eps={}: {}", eps[i], e.what());
            }
        }
    };
    const int nthreads = std::clamp(threads, 1, static_cast<int>(eps.size()));
    if (nthreads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int t = 0; t < nthreads; ++t)
            pool.emplace_back(worker);
    }

    SweepResult result;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (out[i])
            result.records.push_back(std::move(*out[i]));
        else if (!result.error)
            result.error = errors[i];
    }
    return result;
}

double column_value(const SweepRecord& r, Column c)
{
    switch (c) {
    case Column::Q: return r.Q;
    case Column::a11: return r.a11;
    case Column::C1: return r.C1;
    case Column::sup_grad: return r.sup_grad;
    case Column::Q_boundary: return r.Q_boundary;
    }
    return std::numeric_limits<double>::quiet_NaN();
}

std::string column_name(Column c)
{
    switch (c) {
    case Column::Q: return "Q";
    case Column::a11: return "a11";
    case Column::C1: return "C1";
    case Column::sup_grad: return "sup_grad";
    case Column::Q_boundary: return "Q_boundary";
    }
    return "unknown";
}

RateFit fit_rate(const std::vector<double>& eps, const std::vector<double>& values, FitModel model,
                 const RatePower& target, double tolerance)
{
    if (eps.size() != values.size())
        throw DomainError("eps and value lists differ in length");
    if (eps.size() < 4)
        throw DomainError(">= 4 points required for a rate fit");
    std::vector<double> lx, ly, lnabs;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        if (!(eps[i] > 0.0 && eps[i] < 1.0))
            throw DomainError("eps must lie in (0, 1)");
        if (!(values[i] > 0.0))
            throw DomainError(fmt::format("non-positive value {} in a log fit", values[i]));
        lx.push_back(std::log(eps[i]));
        ly.push_back(std::log(values[i]));
        lnabs.push_back(std::abs(std::log(eps[i])));
    }
    const LineFit pw = least_squares(lx, ly);
    const LineFit lg = least_squares(lnabs, values);

    RateFit fit;
    fit.model = model;
    fit.target = target;
    fit.tolerance = tolerance;
    double sp = 0.0, sl = 0.0;
    for (std::size_t i = 0; i < eps.size(); ++i) {
        const double rp = (std::exp(pw.intercept + pw.slope * lx[i]) - values[i]) / values[i];
        const double rl = (lg.intercept + lg.slope * lnabs[i] - values[i]) / values[i];
        sp += rp * rp;
        sl += rl * rl;
    }
    fit.residual_power = std::sqrt(sp / eps.size());
    fit.residual_log = std::sqrt(sl / eps.size());
    fit.log_detected = fit.residual_log < fit.residual_power;

    if (model == FitModel::power) {
        fit.slope = pw.slope;
        fit.intercept = pw.intercept;
        fit.r_squared = pw.r_squared;
        fit.pass = target.log_exponent == 0 && std::abs(pw.slope - target.epsilon_exponent.value()) <= tolerance;
    } else {
        fit.slope = lg.slope;
        fit.intercept = lg.intercept;
        fit.r_squared = lg.r_squared;
        fit.pass = fit.log_detected;
    }
    return fit;
}

RateFit fit_rate(const std::vector<SweepRecord>& records, Column column, FitModel model, const RatePower& target,
                 double tolerance)
{
    std::vector<double> eps, values;
    for (const SweepRecord& r : records) {
        eps.push_back(r.epsilon);
        values.push_back(column_value(r, column));
    }
    return fit_rate(eps, values, model, target, tolerance);
}

double leading_constant(const std::vector<SweepRecord>& records, Column column, const RatePower& rate)
{
    if (records.empty())
        throw DomainError("no records");
    const auto it = std::min_element(records.begin(), records.end(),
                                     [](const SweepRecord& a, const SweepRecord& b) { return a.epsilon < b.epsilon; });
    return column_value(*it, column) / rate.evaluate(it->epsilon);
}

BoundednessReport bounded_sequence(const std::vector<double>& eps, const std::vector<double>& values, double bound)
{
    BoundednessReport rep;
    rep.epsilon = eps;
    rep.ratio = values;
    rep.bound = bound;
    if (values.empty())
        return rep;
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (*hi <= 0.0) {
        rep.spread = 1.0;
    } else if (*lo <= 0.0) {
        rep.spread = std::numeric_limits<double>::infinity();
    } else {
        rep.spread = *hi / *lo;
    }
    rep.pass = std::isfinite(rep.spread) && rep.spread <= bound;
    return rep;
}

BoundednessReport check_v1_residual(const std::vector<SweepRecord>& records, double bound)
{
    std::vector<double> eps, vals;
    for (const SweepRecord& r : records) {
        eps.push_back(r.epsilon);
        vals.push_back(r.v1_residual);
    }
    return bounded_sequence(eps, vals, bound);
}

BoundednessReport check_v1_residual(const GapGeometry& geom, const Resolution& res, const std::vector<double>& eps_list,
                                    int threads)
{
    const SweepResult s = sweep(geom, BoundaryData::constant(0.0), eps_list, res, threads);
    if (s.error)
        throw SolverError(*s.error);
    return check_v1_residual(s.records);
}

V0ResidualReport check_v0_residual(const std::vector<SweepRecord>& records, double phi_norm, double bound)
{
    V0ResidualReport rep;
    rep.phi_norm = phi_norm;
    std::vector<double> eps, res, tan;
    for (const SweepRecord& r : records) {
        eps.push_back(r.epsilon);
        res.push_back(r.v0_residual);
        tan.push_back(r.tangential_sup);
    }
    rep.residual = bounded_sequence(eps, res, bound);
    rep.tangential = bounded_sequence(eps, tan, bound);
    rep.pass = rep.residual.pass && rep.tangential.pass;
    return rep;
}

V0ResidualReport check_v0_residual(const GapGeometry& geom, const BoundaryData& phi, const Resolution& res,
                                   const std::vector<double>& eps_list, int threads)
{
    const SweepResult s = sweep(geom, phi, eps_list, res, threads);
    if (s.error)
        throw SolverError(*s.error);
    const double norm = phi.is_zero() ? 0.0 : patch_c2_norm(geom, phi);
    return check_v0_residual(s.records, norm);
}

MaxLocationReport check_max_location(const std::vector<SweepRecord>& records, const MaxLocation& predicted, int m,
                                     bool degenerate, double patch_radius)
{
    MaxLocationReport rep;
    rep.predicted = predicted;
    if (degenerate) {
        rep.skipped = true;
        rep.pass = true;
        rep.note = "Q* vanishes: outside theorem hypotheses, check skipped";
        return rep;
    }
    for (const SweepRecord& r : records) {
        const double scale = std::pow(r.epsilon, 1.0 / m);
        if (predicted.tag != MaxTag::axis_only && scale >= patch_radius) {
            rep.excluded.push_back(r.epsilon);
            continue;
        }
        rep.epsilon.push_back(r.epsilon);
        double measured = 0.0;
        bool ok = false;
        switch (predicted.tag) {
        case MaxTag::axis_only:
            measured = r.argmax_radius;
            ok = measured <= 3.0 * r.mesh_stats.axis_cell_size;
            break;
        case MaxTag::ring_only:
            measured = r.argmax_radius / scale;
            ok = measured >= 0.25 && measured <= 4.0;
            break;
        case MaxTag::both:
            measured = r.ring_radius / scale;
            ok = measured >= 0.25 && measured <= 4.0;
            break;
        }
        rep.measured.push_back(measured);
        rep.ok.push_back(ok);
    }
    rep.pass = !rep.ok.empty() && std::all_of(rep.ok.begin(), rep.ok.end(), [](bool b) { return b; });
    if (!rep.excluded.empty())
        rep.note = fmt::format("{} eps with eps^(1/m) >= {} not judged", rep.excluded.size(), patch_radius);
    return rep;
}

std::string format_real(double v) { return fmt::format("{:.17g}", v); }

void write_sweep_csv(const std::string& path, const std::vector<SweepRecord>& records)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "epsilon,Q,a11,C1,sup_grad,argmax_radius,nodes,Q_boundary,ring_radius,v1_residual,v0_residual,"
           "tangential_sup,axis_cell_size\n";
    for (const SweepRecord& r : records) {
        out << fmt::format("{},{},{},{},{},{},{},{},{},{},{},{},{}\n", format_real(r.epsilon), format_real(r.Q),
                           format_real(r.a11), format_real(r.C1), format_real(r.sup_grad),
                           format_real(r.argmax_radius), r.mesh_stats.nodes, format_real(r.Q_boundary),
                           format_real(r.ring_radius), format_real(r.v1_residual), format_real(r.v0_residual),
                           format_real(r.tangential_sup), format_real(r.mesh_stats.axis_cell_size));
    }
}

void write_profile_csv(const std::string& path, const SweepRecord& record)
{
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << "x,grad_bottom,grad_max\n";
    for (const ProfilePoint& p : record.profile)
        out << fmt::format("{},{},{}\n", format_real(p.x), format_real(p.grad_bottom), format_real(p.grad_max));
}

}  // namespace narrowgap
