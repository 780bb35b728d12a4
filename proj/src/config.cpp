#include "narrowgap/config.hpp"

#include <cstdint>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "narrowgap/errors.hpp"

namespace narrowgap {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::string& where, const std::set<std::string>& allowed)
{
    for (const auto& [key, _] : obj.items())
        if (!allowed.contains(key))
            throw ConfigError(fmt::format("{}: unknown key '{}'", where, key));
}

const json& require_object(const json& parent, const std::string& key, const std::string& where)
{
    if (!parent.contains(key))
        throw ConfigError(fmt::format("{}: missing required key '{}'", where, key));
    const json& v = parent.at(key);
    if (!v.is_object())
        throw ConfigError(fmt::format("{}.{}: expected an object", where, key));
    return v;
}

double get_real(const json& obj, const std::string& key, const std::string& where, std::optional<double> fallback = {})
{
    if (!obj.contains(key)) {
        if (fallback)
            return *fallback;
        throw ConfigError(fmt::format("{}: missing required key '{}'", where, key));
    }
    const json& v = obj.at(key);
    if (!v.is_number())
        throw ConfigError(fmt::format("{}.{}: expected a number", where, key));
    return v.get<double>();
}

int get_int(const json& obj, const std::string& key, const std::string& where, std::optional<int> fallback = {})
{
    if (!obj.contains(key)) {
        if (fallback)
            return *fallback;
        throw ConfigError(fmt::format("{}: missing required key '{}'", where, key));
    }
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        throw ConfigError(fmt::format("{}.{}: expected an integer", where, key));
    return v.get<int>();
}

Cutoff parse_cutoff(const json& obj, const std::string& where)
{
    if (!obj.contains("cutoff"))
        return {};
    const json& c = obj.at("cutoff");
    if (!c.is_array() || c.size() != 2 || !c[0].is_number() || !c[1].is_number())
        throw ConfigError(where + ".cutoff: expected [inner, outer]");
    const Cutoff cut{c[0].get<double>(), c[1].get<double>()};
    if (!(cut.inner > 0.0 && cut.outer > cut.inner))
        throw ConfigError(where + ".cutoff: need 0 < inner < outer");
    return cut;
}

BoundaryData parse_boundary(const json& b, int n)
{
    const std::string where = "boundary";
    if (!b.contains("kind") || !b.at("kind").is_string())
        throw ConfigError("boundary: missing string key 'kind'");
    const std::string kind = b.at("kind").get<std::string>();
    if (kind == "constant") {
        reject_unknown(b, where, {"kind", "value"});
        return BoundaryData::constant(get_real(b, "value", where));
    }
    if (kind == "s1") {
        reject_unknown(b, where, {"kind", "eta", "k", "cutoff"});
        const int k = get_int(b, "k", where);
        if (k < 2)
            throw ConfigError("boundary.k: growth order must be at least 2");
        return BoundaryData::s1(get_real(b, "eta", where), k, parse_cutoff(b, where));
    }
    if (kind == "s2") {
        reject_unknown(b, where, {"kind", "eta", "k", "odd_axis", "cutoff"});
        const int k = get_int(b, "k", where, 1);
        const int axis = get_int(b, "odd_axis", where, 1);
        if (k < 1)
            throw ConfigError("boundary.k: must be at least 1");
        if (axis < 1 || axis > n - 1)
            throw ConfigError(fmt::format("boundary.odd_axis: must lie in [1, {}]", n - 1));
        return BoundaryData::s2(get_real(b, "eta", where), k, axis, parse_cutoff(b, where));
    }
    throw ConfigError(fmt::format("boundary.kind: expected constant, s1 or s2, got '{}'", kind));
}

GapGeometry parse_geometry(const json& g)
{
    const std::string where = "geometry";
    reject_unknown(g, where, {"n", "m", "lambda", "R", "epsilon", "kappa1", "kappa2", "outer"});
    const int n = get_int(g, "n", where);
    const int m = get_int(g, "m", where);
    if (n < 2)
        throw ConfigError("geometry.n: must be at least 2");
    if (m < 2)
        throw ConfigError("geometry.m: must be at least 2");
    const double lambda = get_real(g, "lambda", where, 1.0);
    const double R = get_real(g, "R", where, 0.25);
    const double eps = get_real(g, "epsilon", where, 1e-3);
    if (!(lambda > 0.0) || !(R > 0.0) || !(eps > 0.0 && eps < 1.0))
        throw ConfigError("geometry: need lambda > 0, R > 0 and 0 < epsilon < 1");

    OuterDomain outer;
    if (g.contains("outer")) {
        const json& o = require_object(g, "outer", where);
        const std::string ow = where + ".outer";
        reject_unknown(o, ow, {"inclusion_half_width", "vertical_fraction", "blend_fraction", "flat_fraction",
                               "outer_radius", "cap_blend_angle"});
        outer.inclusion_half_width = get_real(o, "inclusion_half_width", ow, outer.inclusion_half_width);
        outer.vertical_fraction = get_real(o, "vertical_fraction", ow, outer.vertical_fraction);
        outer.blend_fraction = get_real(o, "blend_fraction", ow, outer.blend_fraction);
        outer.flat_fraction = get_real(o, "flat_fraction", ow, outer.flat_fraction);
        outer.outer_radius = get_real(o, "outer_radius", ow, outer.outer_radius);
        outer.cap_blend_angle = get_real(o, "cap_blend_angle", ow, outer.cap_blend_angle);
    }
    try {
        GapGeometry geom = make_solver_geometry(n, m, lambda, eps, R, outer);
        geom.kappa1 = get_real(g, "kappa1", where, geom.kappa1);
        geom.kappa2 = get_real(g, "kappa2", where, geom.kappa2);
        geom.validate();
        return geom;
    } catch (const DomainError& e) {
        throw ConfigError(fmt::format("geometry: {}", e.what()));
    }
}

}  // namespace

RunConfig parse_config(const json& j)
{
    if (!j.is_object())
        throw ConfigError("config: top level must be an object");
    reject_unknown(j, "config",
                   {"geometry", "boundary", "eps_list", "resolution", "limits", "touching_sigma", "points",
                    "hypothesis_samples", "check_bound"});
    RunConfig c;
    c.raw = j;
    c.geometry = parse_geometry(require_object(j, "geometry", "config"));
    c.boundary = parse_boundary(require_object(j, "boundary", "config"), c.geometry.n);

    if (j.contains("eps_list")) {
        const json& e = j.at("eps_list");
        if (!e.is_array())
            throw ConfigError("eps_list: expected an array of numbers");
        for (const json& v : e) {
            if (!v.is_number() || !(v.get<double>() > 0.0 && v.get<double>() < 1.0))
                throw ConfigError("eps_list: entries must be numbers in (0, 1)");
            c.eps_list.push_back(v.get<double>());
        }
    }
    if (j.contains("resolution")) {
        const json& r = require_object(j, "resolution", "config");
        reject_unknown(r, "resolution", {"cells_per_scale", "t_cells", "far_cells", "refine"});
        c.resolution.cells_per_scale = get_int(r, "cells_per_scale", "resolution", c.resolution.cells_per_scale);
        c.resolution.t_cells = get_int(r, "t_cells", "resolution", c.resolution.t_cells);
        c.resolution.far_cells = get_int(r, "far_cells", "resolution", c.resolution.far_cells);
        c.resolution.refine = get_int(r, "refine", "resolution", c.resolution.refine);
        if (c.resolution.cells_per_scale < 1 || c.resolution.far_cells < 4 || c.resolution.refine < 0 ||
            c.resolution.t_cells * (1 << c.resolution.refine) < 8)
            throw ConfigError("resolution: need cells_per_scale >= 1, far_cells >= 4, refine >= 0 and at least "
                              "8 cells across the gap");
    }
    if (j.contains("limits")) {
        const json& l = require_object(j, "limits", "config");
        reject_unknown(l, "limits", {"Q_star", "a11_star"});
        LimitQuantities lq;
        if (l.contains("Q_star"))
            lq.Q_star = get_real(l, "Q_star", "limits");
        if (l.contains("a11_star"))
            lq.a11_star = get_real(l, "a11_star", "limits");
        c.limits = lq;
    }
    if (j.contains("touching_sigma")) {
        const double s = get_real(j, "touching_sigma", "config");
        if (!(s > 0.0 && s < 0.5 * c.geometry.R))
            throw ConfigError("touching_sigma: must lie in (0, R/2)");
        c.touching_sigma = s;
    }
    if (j.contains("points")) {
        const json& p = j.at("points");
        if (!p.is_array())
            throw ConfigError("points: expected an array of coordinate arrays");
        for (const json& pt : p) {
            if (!pt.is_array() || static_cast<int>(pt.size()) != c.geometry.n)
                throw ConfigError(fmt::format("points: each point needs {} coordinates", c.geometry.n));
            std::vector<double> x;
            for (const json& v : pt) {
                if (!v.is_number())
                    throw ConfigError("points: coordinates must be numbers");
                x.push_back(v.get<double>());
            }
            c.points.push_back(std::move(x));
        }
    }
    c.hypothesis_samples = get_int(j, "hypothesis_samples", "config", c.hypothesis_samples);
    if (c.hypothesis_samples < 8)
        throw ConfigError("hypothesis_samples: must be at least 8");
    c.check_bound = get_real(j, "check_bound", "config", c.check_bound);
    return c;
}

RunConfig load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(fmt::format("cannot open config '{}'", path));
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError(fmt::format("malformed JSON in '{}': {}", path, e.what()));
    }
    return parse_config(j);
}

std::string config_hash(const json& j)
{
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char ch : j.dump())
        h = (h ^ ch) * 1099511628211ULL;
    return fmt::format("{:016x}", h);
}

}  // namespace narrowgap
