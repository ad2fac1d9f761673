#pragma once

#include <functional>
#include <map>
#include <string>

#include "lsurf/vec4.hpp"

namespace lsurf {

struct Domain {
    double umin = 0.0, umax = 1.0, vmin = 0.0, vmax = 1.0;

    bool contains(double u, double v, double margin = 0.0) const {
        return u >= umin + margin && u <= umax - margin && v >= vmin + margin && v <= vmax - margin;
    }
};

/// z and its first/second partials at a parameter point.
struct SurfaceJet {
    Vec4 z, zu, zv, zuu, zuv, zvv;
};

/// Parametric surface patch in E^4_2, given either by analytic jet closures
/// or by a position closure differenced with step h.
class SurfaceSpec {
public:
    using PosFn = std::function<Vec4(double, double)>;
    using JetFn = std::function<SurfaceJet(double, double)>;

    static SurfaceSpec analytic(JetFn jet, Domain domain, std::string name = "");
    static SurfaceSpec numeric(PosFn z, Domain domain, double h = 1e-4, std::string name = "");

    /// Numeric-mode view of an analytic spec (same position closure, FD jets).
    SurfaceSpec as_numeric(double h = 1e-4) const;

    bool is_analytic() const { return analytic_; }
    const Domain& domain() const { return domain_; }
    const std::string& name() const { return name_; }
    double fd_step() const { return h_; }

    /// Jet at (u,v); throws DomainError outside the domain (with h-margin in
    /// numeric mode).
    SurfaceJet jet(double u, double v) const;

    Vec4 position(double u, double v) const;

private:
    SurfaceSpec() = default;

    bool analytic_ = true;
    JetFn jet_;
    PosFn pos_;
    Domain domain_;
    double h_ = 1e-4;
    std::string name_;
};

SurfaceJet evaluate_jet(const SurfaceSpec& spec, double u, double v);

using ParamMap = std::map<std::string, double>;

/// Built-in surface catalog. Names: plane, saddle, graph2, graphp, graphk,
/// grapht, graphp-principal, chen-minimal. Parameters: c (graphp,
/// graphp-principal), alpha/beta/c (graphk, grapht).
SurfaceSpec catalog_surface(const std::string& name, const ParamMap& params = {});

/// Names accepted by catalog_surface.
std::vector<std::string> catalog_names();

}  // namespace lsurf
