#pragma once

#include <Eigen/Dense>

#include "lsurf/frame.hpp"
#include "lsurf/geoframe.hpp"
#include "lsurf/grid.hpp"

namespace lsurf {

/// Closure form of the frame system Z_u = A Z, Z_v = B Z assembled from a
/// GFGrid; coefficients are bilinearly interpolated between nodes.
class FrameOdeSystem {
public:
    explicit FrameOdeSystem(const GFGrid& grid);

    Eigen::Matrix4d A(double u, double v) const;
    Eigen::Matrix4d B(double u, double v) const;
    double sqrtE(double u, double v) const;
    double sqrtG(double u, double v) const;

    const GFGrid& grid() const { return grid_; }
    int eps() const { return grid_.eps; }

    /// Coefficient matrices at explicit function values (u-direction /
    /// v-direction), without the metric factor.
    static Eigen::Matrix4d coefficient_matrix_u(double g1, double nu1, double la, double mu,
                                                double b1, int eps);
    static Eigen::Matrix4d coefficient_matrix_v(double g2, double nu2, double la, double mu,
                                                double b2, int eps);

private:
    struct Interp {
        double g1, g2, nu1, nu2, la, mu, b1, b2, sE, sG;
    };
    Interp at(double u, double v) const;

    GFGrid grid_;  // frames/points byproducts dropped
};

/// Max-norm of M^T Eta + Eta M with Eta = diag(1,-1,eps,-eps); zero for the
/// assembled systems, which is what preserves the frame Gram matrix.
double pseudo_skew_residual(const Eigen::Matrix4d& M, int eps);

/// Checks sqrtE, sqrtG > 0 everywhere and builds the system.
FrameOdeSystem assemble_system(const GFGrid& grid);

/// Disagreement between the supplied sqrtE/sqrtG grids and the closed-form
/// expressions sqrtE = mu_u / (2 mu g2 - eps la b1 + eps nu1 b2) (and the
/// v-analogue), evaluated only where the formula is well-posed.
struct MetricFormulaCheck {
    double max_rel_dev_E = 0, max_rel_dev_G = 0;
    std::size_t nodes_checked_E = 0, nodes_checked_G = 0;
};
MetricFormulaCheck metric_formula_check(const GFGrid& grid, double min_slope = 1e-6);

struct ReconstructOptions {
    int substeps = 2;            // RK4 substeps per grid cell
    double origin_u = std::numeric_limits<double>::quiet_NaN();  // default: domain min
    double origin_v = std::numeric_limits<double>::quiet_NaN();
    bool renormalize = false;    // indefinite Gram-Schmidt every renorm_every steps
    int renorm_every = 16;
    double drift_ceiling = 1e-3;             // hard StepTooLarge gate
    double integrability_threshold = 0.5;    // reconstruct precondition
    bool compute_path_discrepancy = true;
};

struct ReconstructedSurface {
    Domain domain;
    double hu = 0, hv = 0;
    int eps = 1;
    Grid2d<Vec4> z;
    Grid2d<Frame4> frames;

    double max_gram_drift = 0;
    double path_discrepancy = 0;        // frame difference, u-then-v vs v-then-u
    double mixed_partial_residual = 0;  // position difference between the sweeps
    double max_renorm_correction = 0;
    MetricFormulaCheck metric_check;
};

/// RK4 march of the frame system from `init` at the origin node: along the
/// origin row in u, then along v for each column.
ReconstructedSurface integrate_frames(const FrameOdeSystem& sys, const Frame4& init,
                                      const ReconstructOptions& opts = {});

/// Frame march plus the position system z_u = sqrtE x, z_v = sqrtG y,
/// integrated in the same RK4 state.
ReconstructedSurface integrate_position(const FrameOdeSystem& sys, const Frame4& init,
                                        const Vec4& p0, const ReconstructOptions& opts = {});

/// Full realization of the fundamental theorem: integrability precondition,
/// assembly, frame+position integration, diagnostics.
ReconstructedSurface reconstruct(const GFGrid& grid, const Frame4& init, const Vec4& p0,
                                 const ReconstructOptions& opts = {});

/// Jet of a grid-sampled surface at an interior node (two-ring margin) by
/// fourth-order central stencils.
SurfaceJet grid_jet(const Grid2d<Vec4>& z, std::size_t i, std::size_t j, double hu, double hv);

/// Pointwise second-order data re-extracted from a position grid via
/// fourth-order FD jets; NaN at nodes where the pipeline fails (and on the
/// two-ring stencil margin).
struct GridExtraction {
    GridD lambda, mu, nu1, nu2;
};
GridExtraction extract_pointwise_from_positions(const Grid2d<Vec4>& z, double hu, double hv);

}  // namespace lsurf
