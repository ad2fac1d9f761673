#pragma once

#include <optional>

#include "lsurf/frame.hpp"
#include "lsurf/grid.hpp"
#include "lsurf/invariants.hpp"
#include "lsurf/surface.hpp"

namespace lsurf {

/// Principal frame {x, y, b, l} at a general-type point, with the coordinates
/// of x and y in the (z_u, z_v) basis. Signs: <x, z_u> > 0, <y, z_v> < 0,
/// b = eps H / sqrt(eps <H,H>), l fixed by det[x, y, b, l] < 0.
struct PrincipalFrameData {
    Frame4 frame;  // x, y, b, l with signature (1, -1, eps, -eps)
    int eps = 1;
    double lx = 0, mx = 0;  // x = lx z_u + mx z_v
    double ly = 0, my = 0;  // y = ly z_u + my z_v
    FundamentalData fd;
    InvariantReport rep;
};

PrincipalFrameData principal_frame_data(const SurfaceJet& jet, double tol = kClassifyTol);
PrincipalFrameData principal_frame_at(const SurfaceSpec& spec, double u, double v,
                                      double tol = kClassifyTol);

/// The eight geometric functions of the Frenet-type derivative formulas.
struct GeometricFunctions {
    double gamma1 = 0, gamma2 = 0;
    double nu1 = 0, nu2 = 0;
    double lambda = 0, mu = 0;
    double beta1 = 0, beta2 = 0;
    int eps = 1;
    Frame4 frame;
};

inline constexpr double kFrameFdStep = 1e-4;

/// nu1, nu2, lambda, mu from sigma-contractions in the principal basis;
/// gamma1, gamma2, beta1, beta2 from central differences of the frame field
/// along x and y with parameter step h.
GeometricFunctions geometric_functions_at(const SurfaceSpec& spec, double u, double v,
                                          double h = kFrameFdStep);

/// Geometric functions sampled on a rectangular parameter grid, with the
/// sqrt(E), sqrt(-G) fields of the chart.
struct GFGrid {
    Domain domain;
    double hu = 0, hv = 0;
    int eps = 1;
    GridD gamma1, gamma2, nu1, nu2, lambda, mu, beta1, beta2;
    GridD sqrtE, sqrtG;

    // Extraction byproducts (not serialized): frame and position per node.
    std::optional<Grid2d<Frame4>> frames;
    std::optional<Grid2d<Vec4>> points;

    std::size_t nu_count() const { return gamma1.nu(); }
    std::size_t nv_count() const { return gamma1.nv(); }
    double u_at(std::size_t i) const { return domain.umin + static_cast<double>(i) * hu; }
    double v_at(std::size_t j) const { return domain.vmin + static_cast<double>(j) * hv; }
};

/// Extracts a GFGrid from a surface patch. The chart is taken as the grid
/// parametrization, so downstream integrability/reconstruction semantics
/// expect it to be principal (F = 0, coordinate lines principal).
GFGrid extract_gf_grid(const SurfaceSpec& spec, Domain patch, std::size_t nu, std::size_t nv,
                       double h = kFrameFdStep);

struct ClassFlags {
    bool flat_K = false;
    bool constant_K = false;
    bool flat_normal = false;
    bool constant_normal = false;
    bool cmc = false;
    bool parallel_H = false;
    bool pnmcv = false;
    bool chen = false;
};

/// Pointwise predicates; constancy flags are vacuously true for one sample.
ClassFlags class_predicates(const GeometricFunctions& gf, double tol = 1e-8);
/// Grid predicates; constancy flags test variation across the grid.
ClassFlags class_predicates(const GFGrid& grid, double tol = 1e-8);

/// Signed residual fields (LHS - RHS) of the six integrability conditions,
/// with x(.) = (1/sqrtE) d_u and y(.) = (1/sqrtG) d_v realized by central
/// differences. Boundary ring is NaN.
std::array<GridD, 6> integrability_residuals(const GFGrid& grid);

/// Max |.| over valid (non-NaN) nodes, optionally trimming `margin` extra
/// rings beyond the boundary.
double max_abs_valid(const GridD& g, std::size_t margin = 0);

}  // namespace lsurf
