#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/SparseCore>

#include "narrowgap/auxfields.hpp"
#include "narrowgap/geometry.hpp"
#include "narrowgap/strip_map.hpp"

namespace narrowgap {

/// Mesh parameters for the strip discretization.
struct Resolution {
    int cells_per_scale = 12;  ///< s-cells per local length scale max(l, |x'|) near the contact
    int t_cells = 16;          ///< cells across the strip
    int far_cells = 64;        ///< s-cells per half turn away from the contact
    int refine = 0;            ///< uniform bisections of every cell
};

struct MeshStats {
    std::size_t nodes = 0;
    std::size_t cells = 0;
    int s_cells = 0;
    int t_cells = 0;
    double min_gap_resolution = 0.0;  ///< smallest cell height across the gap
    double axis_cell_size = 0.0;      ///< |x'|-width of the cells next to the contact
    double min_jacobian = 0.0;
};

class Discretization;

/// Nodal Q2 field on a Discretization.
class DiscreteField {
public:
    DiscreteField() = default;
    DiscreteField(std::shared_ptr<const Discretization> disc, std::vector<double> values);

    const Discretization& discretization() const { return *disc_; }
    std::shared_ptr<const Discretization> shared_discretization() const { return disc_; }
    const std::vector<double>& values() const { return values_; }

    double value_at(double s, double t) const;
    /// Gradient in meridian coordinates at strip point (s, t).
    Vec2 meridian_gradient_at(double s, double t) const;
    /// Value and ambient gradient at a point of Omega in R^n.
    FieldSample sample(std::span<const double> x) const;
    std::vector<double> gradient(std::span<const double> x) const;

    double min_value() const;
    double max_value() const;
    double min_boundary_value() const;
    double max_boundary_value() const;

private:
    std::shared_ptr<const Discretization> disc_;
    std::vector<double> values_;
};

/// Q2 finite elements on the strip map, with the stiffness matrix factorised once.
class Discretization : public std::enable_shared_from_this<Discretization> {
public:
    static std::shared_ptr<const Discretization> create(const GapGeometry& g, const Resolution& res,
                                                        double excision = 0.0);

    const GapGeometry& geometry() const { return geom_; }
    const StripMap& map() const { return map_; }
    const MeshStats& stats() const { return stats_; }
    const std::vector<double>& s_breaks() const { return s_breaks_; }
    const std::vector<double>& t_breaks() const { return t_breaks_; }
    const std::vector<double>& s_nodes() const { return s_nodes_; }
    const std::vector<double>& t_nodes() const { return t_nodes_; }
    std::size_t node_count() const { return s_nodes_.size() * t_nodes_.size(); }
    std::size_t node(std::size_t i, std::size_t j) const { return i * t_nodes_.size() + j; }
    bool is_dirichlet(std::size_t node) const { return dirichlet_[node]; }
    bool is_inclusion_node(std::size_t node) const { return node % t_nodes_.size() == t_nodes_.size() - 1; }
    const Eigen::SparseMatrix<double>& stiffness() const { return K_; }

    /// Harmonic extension of the Dirichlet values given at the constrained nodes.
    DiscreteField solve(const std::vector<double>& boundary_values) const;

    /// Dirichlet values for v0: phi on the matrix boundary, 0 on the inclusion,
    /// and the blend phi(B) (1 - t) on excision lines.
    std::vector<double> v0_data(const BoundaryData& phi) const;
    /// Dirichlet values for v1: 0 on the matrix boundary, 1 on the inclusion, t on excision lines.
    std::vector<double> v1_data() const;

    /// Cell index and local coordinate in [-1, 1] of s (wrapped when periodic).
    std::pair<std::size_t, double> locate_s(double s) const;
    std::pair<std::size_t, double> locate_t(double t) const;
    std::size_t s_node_index(std::size_t cell, int local) const;

    ~Discretization();

private:
    Discretization(const GapGeometry& g, const Resolution& res, double excision);
    void build_grid(const Resolution& res);
    void assemble();

    GapGeometry geom_;
    StripMap map_;
    std::vector<double> s_breaks_, t_breaks_;
    std::vector<double> s_nodes_, t_nodes_;
    std::vector<char> dirichlet_;
    std::vector<std::ptrdiff_t> free_index_;
    Eigen::SparseMatrix<double> K_;
    Eigen::SparseMatrix<double> K_free_;
    struct Factor;
    std::unique_ptr<Factor> factor_;
    MeshStats stats_;
};

struct SolveResult {
    DiscreteField v0;
    DiscreteField v1;
    DiscreteField u;
    double Q = 0.0;
    double a11 = 0.0;
    double C1 = 0.0;
    double Q_boundary = 0.0;  ///< direct normal-derivative quadrature of Q (diagnostic)
    MeshStats mesh_stats;
};

struct LimitQuantities {
    std::optional<double> Q_star;
    std::optional<double> a11_star;
    double cutoff_sigma = 0.0;
    std::optional<double> Q_star_half_sigma;  ///< value at sigma/2
    std::optional<double> a11_star_half_sigma;
    std::optional<double> Q_star_richardson;  ///< 2 Q(sigma/2) - Q(sigma)
    std::optional<double> a11_star_richardson;
};

DiscreteField solve_v0(const GapGeometry& g, const BoundaryData& phi, const Resolution& res);
DiscreteField solve_v1(const GapGeometry& g, const Resolution& res);

/// Q[phi] = -chi^T K v0 with chi the indicator of inclusion nodes (discrete flux).
double flux_Q(const DiscreteField& v0, const GapGeometry& g);
/// Normal-derivative quadrature over the inclusion boundary using one-sided element gradients.
double flux_Q_boundary(const DiscreteField& v0);
/// a11 = v1^T K v1.
double energy_a11(const DiscreteField& v1);

SolveResult assemble_u(const DiscreteField& v0, const DiscreteField& v1, double Q, double a11);

/// Full pipeline on a single discretization.
SolveResult solve(const GapGeometry& g, const BoundaryData& phi, const Resolution& res);

/// Limit problems on the touching domain (eps = 0) with the contact excised at radius sigma.
/// With no data the unit-potential energy a11* is computed, otherwise Q*[phi].
LimitQuantities solve_touching(const GapGeometry& g_star, const std::optional<BoundaryData>& data, double sigma,
                               const Resolution& res);

}  // namespace narrowgap
