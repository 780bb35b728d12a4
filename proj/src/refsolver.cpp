#include "narrowgap/refsolver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/SparseCholesky>
#include <fmt/format.h>

#include "narrowgap/errors.hpp"
#include "narrowgap/regimes.hpp"

namespace narrowgap {

namespace {

constexpr double pi = std::numbers::pi;

constexpr std::array<double, 4> gauss_x{-0.8611363115940526, -0.3399810435848563, 0.3399810435848563,
                                        0.8611363115940526};
constexpr std::array<double, 4> gauss_w{0.3478548451374538, 0.6521451548625461, 0.6521451548625461,
                                        0.3478548451374538};

std::array<double, 3> lagrange(double x) { return {0.5 * x * (x - 1.0), 1.0 - x * x, 0.5 * x * (x + 1.0)}; }
std::array<double, 3> lagrange_d(double x) { return {x - 0.5, -2.0 * x, x + 0.5}; }

double radial_weight(int n, double rho) { return n == 3 ? 2.0 * pi * rho : 1.0; }

std::vector<double> bisect(const std::vector<double>& v, int times)
{
    std::vector<double> out = v;
    for (int r = 0; r < times; ++r) {
        std::vector<double> next;
        next.reserve(2 * out.size());
        for (std::size_t i = 0; i + 1 < out.size(); ++i) {
            next.push_back(out[i]);
            next.push_back(0.5 * (out[i] + out[i + 1]));
        }
        next.push_back(out.back());
        out.swap(next);
    }
    return out;
}

}  // namespace

struct Discretization::Factor {
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

Discretization::~Discretization() = default;

std::shared_ptr<const Discretization> Discretization::create(const GapGeometry& g, const Resolution& res,
                                                             double excision)
{
    return std::shared_ptr<const Discretization>(new Discretization(g, res, excision));
}

Discretization::Discretization(const GapGeometry& g, const Resolution& res, double excision)
    : geom_(g), map_(g, excision)
{
    if (res.cells_per_scale < 1 || res.t_cells < 1 || res.far_cells < 4 || res.refine < 0)
        throw DomainError("invalid resolution parameters");
    if (res.t_cells * (1 << res.refine) < 8)
        throw DomainError("need at least 8 cells across the gap");
    if (excision == 0.0 && !(g.epsilon > 0.0))
        throw DomainError("eps must be positive unless the contact is excised");
    build_grid(res);
    assemble();
}

void Discretization::build_grid(const Resolution& res)
{
    const double b = map_.centre_height();
    const double sigma = map_.excision();
    double ell = sigma > 0.0 ? sigma : std::pow(geom_.epsilon / geom_.lambda, 1.0 / geom_.m);
    ell = std::min(ell, 0.25 * map_.vertical_limit());
    const double s_w = std::atan(map_.blend_limit() / b);
    const double ds_far = pi / res.far_cells;
    const double s0 = sigma > 0.0 ? std::atan(sigma / b) : 0.0;

    std::vector<double> half{s0};
    double s = s0;
    for (;;) {
        double ds = ds_far;
        if (s < s_w) {
            const double c = std::cos(s);
            const double x = b * std::tan(s);
            ds = std::min(ds_far, std::max(ell, x) * c * c / (res.cells_per_scale * b));
        }
        if (s + 1.5 * ds >= pi)
            break;
        s += ds;
        half.push_back(s);
    }
    half.push_back(pi);

    std::vector<double> br;
    if (map_.periodic()) {
        for (auto it = half.rbegin(); it != half.rend(); ++it)
            br.push_back(-*it);
        br.insert(br.end(), half.begin() + 1, half.end());
    } else if (geom_.n == 2) {
        br = half;
        for (auto it = half.rbegin() + 1; it != half.rend(); ++it)
            br.push_back(2.0 * pi - *it);
    } else {
        br = half;
    }
    s_breaks_ = bisect(br, res.refine);

    const int nt = res.t_cells;
    std::vector<double> tb(nt + 1);
    for (int j = 0; j <= nt; ++j)
        tb[j] = static_cast<double>(j) / nt;
    t_breaks_ = bisect(tb, res.refine);

    const std::size_t ns = s_breaks_.size() - 1;
    for (std::size_t c = 0; c < ns; ++c) {
        s_nodes_.push_back(s_breaks_[c]);
        s_nodes_.push_back(0.5 * (s_breaks_[c] + s_breaks_[c + 1]));
    }
    if (!map_.periodic())
        s_nodes_.push_back(s_breaks_.back());
    for (std::size_t c = 0; c + 1 < t_breaks_.size(); ++c) {
        t_nodes_.push_back(t_breaks_[c]);
        t_nodes_.push_back(0.5 * (t_breaks_[c] + t_breaks_[c + 1]));
    }
    t_nodes_.push_back(1.0);

    stats_.s_cells = static_cast<int>(ns);
    stats_.t_cells = static_cast<int>(t_breaks_.size() - 1);
    stats_.cells = ns * stats_.t_cells;
    stats_.nodes = node_count();
    // first cell next to the contact (or the excision line)
    const auto first = std::upper_bound(s_breaks_.begin(), s_breaks_.end(), s0 + 1e-300);
    const double s_next = first != s_breaks_.end() ? *first : s_breaks_.back();
    stats_.axis_cell_size = b * std::tan(std::min(s_next, s_w)) - (sigma > 0.0 ? sigma : 0.0);
    const double gap0 = sigma > 0.0 ? geom_.epsilon + geom_.h1(sigma).f : geom_.epsilon;
    stats_.min_gap_resolution = gap0 / stats_.t_cells;
}

std::size_t Discretization::s_node_index(std::size_t cell, int local) const
{
    const std::size_t i = 2 * cell + static_cast<std::size_t>(local);
    return map_.periodic() ? i % s_nodes_.size() : i;
}

std::pair<std::size_t, double> Discretization::locate_s(double s) const
{
    const double lo = s_breaks_.front(), hi = s_breaks_.back();
    if (map_.periodic()) {
        const double P = hi - lo;
        s = lo + std::fmod(std::fmod(s - lo, P) + P, P);
    } else if (geom_.n == 2 && s < lo) {
        s += 2.0 * pi;
    }
    if (s < lo - 1e-12 || s > hi + 1e-12)
        throw DomainError(fmt::format("strip parameter {} outside [{}, {}]", s, lo, hi));
    auto it = std::upper_bound(s_breaks_.begin(), s_breaks_.end(), s);
    std::size_t c = it == s_breaks_.begin() ? 0 : static_cast<std::size_t>(it - s_breaks_.begin()) - 1;
    c = std::min(c, s_breaks_.size() - 2);
    const double a = s_breaks_[c], b = s_breaks_[c + 1];
    return {c, std::clamp(2.0 * (s - a) / (b - a) - 1.0, -1.0, 1.0)};
}

std::pair<std::size_t, double> Discretization::locate_t(double t) const
{
    t = std::clamp(t, 0.0, 1.0);
    auto it = std::upper_bound(t_breaks_.begin(), t_breaks_.end(), t);
    std::size_t c = it == t_breaks_.begin() ? 0 : static_cast<std::size_t>(it - t_breaks_.begin()) - 1;
    c = std::min(c, t_breaks_.size() - 2);
    const double a = t_breaks_[c], b = t_breaks_[c + 1];
    return {c, std::clamp(2.0 * (t - a) / (b - a) - 1.0, -1.0, 1.0)};
}

void Discretization::assemble()
{
    const std::size_t ns = s_breaks_.size() - 1;
    const std::size_t nt = t_breaks_.size() - 1;
    const std::size_t N = node_count();
    const std::size_t last_s = s_nodes_.size() - 1;
    const std::size_t last_t = t_nodes_.size() - 1;

    dirichlet_.assign(N, 0);
    for (std::size_t i = 0; i < s_nodes_.size(); ++i) {
        dirichlet_[node(i, 0)] = 1;
        dirichlet_[node(i, last_t)] = 1;
    }
    if (map_.excision() > 0.0) {
        for (std::size_t j = 0; j <= last_t; ++j) {
            dirichlet_[node(0, j)] = 1;
            if (geom_.n == 2)
                dirichlet_[node(last_s, j)] = 1;
        }
    }
    free_index_.assign(N, -1);
    std::ptrdiff_t nfree = 0;
    for (std::size_t k = 0; k < N; ++k)
        if (!dirichlet_[k])
            free_index_[k] = nfree++;

    std::vector<Eigen::Triplet<double>> trip;
    trip.reserve(ns * nt * 81);
    double min_jac = std::numeric_limits<double>::infinity();
    const int n = geom_.n;

    std::array<StripSection, 4> sec;
    for (std::size_t c = 0; c < ns; ++c) {
        const double s0 = s_breaks_[c], s1 = s_breaks_[c + 1];
        const double hs = s1 - s0;
        for (int q = 0; q < 4; ++q)
            sec[q] = map_.section(s0 + 0.5 * (gauss_x[q] + 1.0) * hs);
        std::array<std::size_t, 3> si{s_node_index(c, 0), s_node_index(c, 1), s_node_index(c, 2)};
        for (std::size_t d = 0; d < nt; ++d) {
            const double t0 = t_breaks_[d], ht = t_breaks_[d + 1] - t0;
            double Ke[9][9] = {};
            for (int qs = 0; qs < 4; ++qs) {
                const auto Ls = lagrange(gauss_x[qs]);
                const auto dLs = lagrange_d(gauss_x[qs]);
                const StripSection& S = sec[qs];
                for (int qt = 0; qt < 4; ++qt) {
                    const double t = t0 + 0.5 * (gauss_x[qt] + 1.0) * ht;
                    const auto Lt = lagrange(gauss_x[qt]);
                    const auto dLt = lagrange_d(gauss_x[qt]);
                    const double xs0 = (1.0 - t) * S.dB[0] + t * S.dA[0];
                    const double xs1 = (1.0 - t) * S.dB[1] + t * S.dA[1];
                    const double xt0 = S.A[0] - S.B[0];
                    const double xt1 = S.A[1] - S.B[1];
                    const double det = xs0 * xt1 - xs1 * xt0;
                    min_jac = std::min(min_jac, det);
                    if (!(det > 0.0))
                        throw MeshError(fmt::format("non-positive map Jacobian {} at s = {}, t = {}", det,
                                                    s0 + 0.5 * (gauss_x[qs] + 1.0) * hs, t));
                    const double rho = (1.0 - t) * S.B[0] + t * S.A[0];
                    const double wq = gauss_w[qs] * gauss_w[qt] * 0.25 * hs * ht * radial_weight(n, rho) / det;
                    double gx[9], gy[9];
                    for (int a = 0; a < 3; ++a)
                        for (int bb = 0; bb < 3; ++bb) {
                            const double ds = dLs[a] * 2.0 / hs * Lt[bb];
                            const double dt = Ls[a] * dLt[bb] * 2.0 / ht;
                            gx[3 * a + bb] = xt1 * ds - xs1 * dt;
                            gy[3 * a + bb] = -xt0 * ds + xs0 * dt;
                        }
                    // gx, gy are det times the physical gradient
                    for (int i = 0; i < 9; ++i)
                        for (int j = i; j < 9; ++j)
                            Ke[i][j] += wq * (gx[i] * gx[j] + gy[i] * gy[j]);
                }
            }
            for (int i = 0; i < 9; ++i)
                for (int j = i + 1; j < 9; ++j)
                    Ke[j][i] = Ke[i][j];
            std::array<std::size_t, 9> gid;
            for (int a = 0; a < 3; ++a)
                for (int bb = 0; bb < 3; ++bb)
                    gid[3 * a + bb] = node(si[a], 2 * d + bb);
            for (int i = 0; i < 9; ++i)
                for (int j = 0; j < 9; ++j)
                    trip.emplace_back(static_cast<int>(gid[i]), static_cast<int>(gid[j]), Ke[i][j]);
        }
    }
    stats_.min_jacobian = min_jac;

    K_.resize(static_cast<int>(N), static_cast<int>(N));
    K_.setFromTriplets(trip.begin(), trip.end());
    K_.makeCompressed();

    std::vector<Eigen::Triplet<double>> ftrip;
    ftrip.reserve(K_.nonZeros());
    for (int k = 0; k < K_.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(K_, k); it; ++it) {
            const auto fi = free_index_[it.row()];
            const auto fj = free_index_[it.col()];
            if (fi >= 0 && fj >= 0)
                ftrip.emplace_back(static_cast<int>(fi), static_cast<int>(fj), it.value());
        }
    K_free_.resize(static_cast<int>(nfree), static_cast<int>(nfree));
    K_free_.setFromTriplets(ftrip.begin(), ftrip.end());
    K_free_.makeCompressed();

    factor_ = std::make_unique<Factor>();
    factor_->ldlt.compute(K_free_);
    if (factor_->ldlt.info() != Eigen::Success)
        throw SolverError("sparse factorisation failed");
}

DiscreteField Discretization::solve(const std::vector<double>& boundary_values) const
{
    const std::size_t N = node_count();
    if (boundary_values.size() != N)
        throw DomainError("boundary value vector has the wrong size");
    Eigen::VectorXd uD = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N));
    for (std::size_t k = 0; k < N; ++k)
        if (dirichlet_[k])
            uD[static_cast<Eigen::Index>(k)] = boundary_values[k];
    const Eigen::VectorXd KuD = K_ * uD;
    Eigen::VectorXd rhs(K_free_.rows());
    for (std::size_t k = 0; k < N; ++k)
        if (free_index_[k] >= 0)
            rhs[free_index_[k]] = -KuD[static_cast<Eigen::Index>(k)];

    Eigen::VectorXd x = factor_->ldlt.solve(rhs);
    for (int sweep = 0; sweep < 2; ++sweep) {
        const Eigen::VectorXd r = rhs - K_free_ * x;
        x += factor_->ldlt.solve(r);
    }
    const double rn = (rhs - K_free_ * x).norm();
    const double scale = std::max(rhs.norm(), std::numeric_limits<double>::min());
    if (rhs.norm() > 0.0 && rn > 1e-10 * scale)
        throw SolverError(fmt::format("linear solve residual {} exceeds tolerance", rn / scale));

    std::vector<double> values(N);
    for (std::size_t k = 0; k < N; ++k)
        values[k] = dirichlet_[k] ? boundary_values[k] : x[free_index_[k]];
    return DiscreteField(shared_from_this(), std::move(values));
}

std::vector<double> Discretization::v0_data(const BoundaryData& phi) const
{
    if (geom_.n == 3 && phi.kind() == BoundaryKind::s2)
        throw DomainError("odd data is not axisymmetric; n = 3 solves need radial data");
    std::vector<double> v(node_count(), 0.0);
    const std::size_t last_t = t_nodes_.size() - 1;
    const bool excised = map_.excision() > 0.0;
    for (std::size_t i = 0; i < s_nodes_.size(); ++i) {
        const double pb = phi.along_boundary(map_, s_nodes_[i])[0];
        v[node(i, 0)] = pb;
        v[node(i, last_t)] = 0.0;
        const bool edge = excised && (i == 0 || (geom_.n == 2 && i + 1 == s_nodes_.size()));
        if (edge)
            for (std::size_t j = 0; j <= last_t; ++j)
                v[node(i, j)] = pb * (1.0 - t_nodes_[j]);
    }
    return v;
}

std::vector<double> Discretization::v1_data() const
{
    std::vector<double> v(node_count(), 0.0);
    const std::size_t last_t = t_nodes_.size() - 1;
    const bool excised = map_.excision() > 0.0;
    for (std::size_t i = 0; i < s_nodes_.size(); ++i) {
        v[node(i, last_t)] = 1.0;
        const bool edge = excised && (i == 0 || (geom_.n == 2 && i + 1 == s_nodes_.size()));
        if (edge)
            for (std::size_t j = 0; j <= last_t; ++j)
                v[node(i, j)] = t_nodes_[j];
    }
    return v;
}

DiscreteField::DiscreteField(std::shared_ptr<const Discretization> disc, std::vector<double> values)
    : disc_(std::move(disc)), values_(std::move(values))
{
}

double DiscreteField::value_at(double s, double t) const
{
    const auto [c, xi] = disc_->locate_s(s);
    const auto [d, zeta] = disc_->locate_t(t);
    const auto Ls = lagrange(xi);
    const auto Lt = lagrange(zeta);
    double v = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            v += Ls[a] * Lt[b] * values_[disc_->node(disc_->s_node_index(c, a), 2 * d + b)];
    return v;
}

Vec2 DiscreteField::meridian_gradient_at(double s, double t) const
{
    const auto [c, xi] = disc_->locate_s(s);
    const auto [d, zeta] = disc_->locate_t(t);
    const auto Ls = lagrange(xi);
    const auto Lt = lagrange(zeta);
    const auto dLs = lagrange_d(xi);
    const auto dLt = lagrange_d(zeta);
    const auto& sb = disc_->s_breaks();
    const auto& tb = disc_->t_breaks();
    const double hs = sb[c + 1] - sb[c];
    const double ht = tb[d + 1] - tb[d];
    double us = 0.0, ut = 0.0;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
            const double v = values_[disc_->node(disc_->s_node_index(c, a), 2 * d + b)];
            us += dLs[a] * 2.0 / hs * Lt[b] * v;
            ut += Ls[a] * dLt[b] * 2.0 / ht * v;
        }
    const double sl = sb[c] + 0.5 * (xi + 1.0) * hs;
    const double tl = tb[d] + 0.5 * (zeta + 1.0) * ht;
    const StripSection S = disc_->map().section(sl);
    const double xs0 = (1.0 - tl) * S.dB[0] + tl * S.dA[0];
    const double xs1 = (1.0 - tl) * S.dB[1] + tl * S.dA[1];
    const double xt0 = S.A[0] - S.B[0];
    const double xt1 = S.A[1] - S.B[1];
    const double det = xs0 * xt1 - xs1 * xt0;
    return {(xt1 * us - xs1 * ut) / det, (-xt0 * us + xs0 * ut) / det};
}

FieldSample DiscreteField::sample(std::span<const double> x) const
{
    const auto st = disc_->map().locate(meridian(x));
    if (!st)
        throw DomainError("sample point outside the discretised domain");
    FieldSample out;
    out.point.assign(x.begin(), x.end());
    out.value = value_at((*st)[0], (*st)[1]);
    const Vec2 g = meridian_gradient_at((*st)[0], (*st)[1]);
    out.gradient.assign(x.size(), 0.0);
    out.gradient.back() = g[1];
    if (x.size() == 2) {
        out.gradient[0] = g[0];
    } else {
        const double r = radial_part(x);
        if (r > 0.0)
            for (std::size_t i = 0; i + 1 < x.size(); ++i)
                out.gradient[i] = g[0] * x[i] / r;
    }
    return out;
}

std::vector<double> DiscreteField::gradient(std::span<const double> x) const { return sample(x).gradient; }

double DiscreteField::min_value() const { return *std::min_element(values_.begin(), values_.end()); }
double DiscreteField::max_value() const { return *std::max_element(values_.begin(), values_.end()); }

double DiscreteField::min_boundary_value() const
{
    double v = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (disc_->is_dirichlet(k))
            v = std::min(v, values_[k]);
    return v;
}

double DiscreteField::max_boundary_value() const
{
    double v = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < values_.size(); ++k)
        if (disc_->is_dirichlet(k))
            v = std::max(v, values_[k]);
    return v;
}

DiscreteField solve_v0(const GapGeometry& g, const BoundaryData& phi, const Resolution& res)
{
    const auto disc = Discretization::create(g, res);
    return disc->solve(disc->v0_data(phi));
}

DiscreteField solve_v1(const GapGeometry& g, const Resolution& res)
{
    const auto disc = Discretization::create(g, res);
    return disc->solve(disc->v1_data());
}

double flux_Q(const DiscreteField& v0, const GapGeometry& g)
{
    const Discretization& d = v0.discretization();
    if (d.geometry().epsilon != g.epsilon || d.geometry().n != g.n)
        throw DomainError("field and geometry do not match");
    const Eigen::Map<const Eigen::VectorXd> v(v0.values().data(), static_cast<Eigen::Index>(v0.values().size()));
    const Eigen::VectorXd Kv = d.stiffness() * v;
    double q = 0.0;
    for (std::size_t k = 0; k < v0.values().size(); ++k)
        if (d.is_inclusion_node(k))
            q -= Kv[static_cast<Eigen::Index>(k)];
    return q;
}

double flux_Q_boundary(const DiscreteField& v0)
{
    const Discretization& d = v0.discretization();
    const auto& sb = d.s_breaks();
    const int n = d.geometry().n;
    double q = 0.0;
    for (std::size_t c = 0; c + 1 < sb.size(); ++c) {
        const double hs = sb[c + 1] - sb[c];
        for (int k = 0; k < 4; ++k) {
            const double s = sb[c] + 0.5 * (gauss_x[k] + 1.0) * hs;
            const StripSection S = d.map().section(s);
            const Vec2 g = v0.meridian_gradient_at(s, 1.0);
            const double dn = g[0] * S.dA[1] - g[1] * S.dA[0];
            q += gauss_w[k] * 0.5 * hs * dn * radial_weight(n, S.A[0]);
        }
    }
    return q;
}

double energy_a11(const DiscreteField& v1)
{
    const Discretization& d = v1.discretization();
    const Eigen::Map<const Eigen::VectorXd> v(v1.values().data(), static_cast<Eigen::Index>(v1.values().size()));
    return v.dot(d.stiffness() * v);
}

SolveResult assemble_u(const DiscreteField& v0, const DiscreteField& v1, double Q, double a11)
{
    if (&v0.discretization() != &v1.discretization())
        throw DomainError("v0 and v1 must share one discretization");
    if (!(a11 > 0.0))
        throw SolverError(fmt::format("non-positive energy a11 = {}", a11));
    SolveResult r;
    r.v0 = v0;
    r.v1 = v1;
    r.Q = Q;
    r.a11 = a11;
    r.C1 = Q / a11;
    std::vector<double> u(v0.values().size());
    for (std::size_t k = 0; k < u.size(); ++k)
        u[k] = r.C1 * v1.values()[k] + v0.values()[k];
    r.u = DiscreteField(v0.shared_discretization(), std::move(u));
    r.mesh_stats = v0.discretization().stats();
    return r;
}

SolveResult solve(const GapGeometry& g, const BoundaryData& phi, const Resolution& res)
{
    const auto disc = Discretization::create(g, res);
    const DiscreteField v0 = disc->solve(disc->v0_data(phi));
    const DiscreteField v1 = disc->solve(disc->v1_data());
    SolveResult r = assemble_u(v0, v1, flux_Q(v0, g), energy_a11(v1));
    r.Q_boundary = flux_Q_boundary(v0);
    return r;
}

LimitQuantities solve_touching(const GapGeometry& g_star, const std::optional<BoundaryData>& data, double sigma,
                               const Resolution& res)
{
    if (g_star.epsilon != 0.0)
        throw DomainError("touching-domain solve needs eps = 0");
    const int n = g_star.n, m = g_star.m;
    if (data) {
        switch (data->kind()) {
        case BoundaryKind::s1:
            if (m >= n + data->k() - 1)
                throw DomainError(fmt::format("Q* is undefined for k-order data with m = {} >= n+k-1 = {}", m,
                                              n + data->k() - 1));
            break;
        case BoundaryKind::constant:
            if (data->constant_value() != 0.0)
                throw DomainError("Q* needs data vanishing at the contact point");
            break;
        default: break;
        }
    } else if (m >= n - 1) {
        throw DomainError(fmt::format("a11* diverges for m = {} >= n-1 = {}", m, n - 1));
    }
    if (!(sigma > 0.0))
        sigma = 1e-3 * g_star.R;

    auto measure = [&](double sig) {
        const auto disc = Discretization::create(g_star, res, sig);
        if (data) {
            const DiscreteField v = disc->solve(disc->v0_data(*data));
            return flux_Q(v, g_star);
        }
        return energy_a11(disc->solve(disc->v1_data()));
    };
    const double full = measure(sigma);
    const double half = measure(0.5 * sigma);
    LimitQuantities lq;
    lq.cutoff_sigma = sigma;
    if (data) {
        lq.Q_star = full;
        lq.Q_star_half_sigma = half;
        lq.Q_star_richardson = 2.0 * half - full;
    } else {
        lq.a11_star = full;
        lq.a11_star_half_sigma = half;
        lq.a11_star_richardson = 2.0 * half - full;
    }
    return lq;
}

}  // namespace narrowgap
