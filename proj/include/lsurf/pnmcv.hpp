#pragma once

#include <array>
#include <vector>

#include "lsurf/geoframe.hpp"
#include "lsurf/grid.hpp"

namespace lsurf {

/// The three invariant functions of a PNMCV surface in canonical parameters
/// (nu := nu1 = -nu2).
struct CanonicalTriple {
    Domain domain;
    double hu = 0, hv = 0;
    int eps = 1;
    GridD lambda, mu, nu;

    std::size_t nu_count() const { return lambda.nu(); }
    std::size_t nv_count() const { return lambda.nv(); }
};

/// d^2/du^2 - d^2/dv^2 by second-order central differences; boundary NaN.
GridD hyperbolic_laplacian(const GridD& f, double hu, double hv);

/// Residuals of the three natural PDEs:
///   r1 = nu_u + lambda_v - lambda (ln|mu|)_v
///   r2 = nu_v - lambda_u + lambda (ln|mu|)_u
///   r3 = eps (lambda^2 - mu^2 + nu^2) - 1/2 |mu| Lap_h ln|mu|
/// Throws MuVanishes (with the offending node) when mu has a zero.
std::array<GridD, 3> natural_pde_residuals(const CanonicalTriple& t);

/// Warnings attached to a canonical triple (advisory, not errors).
struct CanonicalWarnings {
    bool nu_constant = false;  // PMCV subclass: parallel H, not just parallel b
    double nu_variation = 0;
};
CanonicalWarnings canonical_warnings(const CanonicalTriple& t, double tol = 1e-10);

/// GFGrid of a canonical-parameter PNMCV surface: nu1 = nu, nu2 = -nu,
/// beta = 0, gamma1 = (sqrt|mu|)_v, gamma2 = (sqrt|mu|)_u (one-sided at the
/// boundary), sqrtE = sqrtG = 1/sqrt|mu|.
GFGrid gf_from_canonical(const CanonicalTriple& t);

/// Separability data of a PNMCV grid in non-canonical principal parameters:
/// E|mu| = phi(u), -G|mu| = psi(v), and the canonical change
/// ubar = int sqrt(phi), vbar = int sqrt(psi).
struct SeparabilityReport {
    std::vector<double> phi, psi;          // per-row / per-column factors
    double phi_residual = 0, psi_residual = 0;  // max cross-variation (relative)
    std::vector<double> ubar, vbar;        // strictly increasing maps at the nodes
};

/// PNMCV grid in arbitrary principal parameters (input to canonicalize).
struct PnmcvGrid {
    Domain domain;
    double hu = 0, hv = 0;
    int eps = 1;
    GridD E, G;  // G < 0
    GridD lambda, mu, nu;
};

/// phi/psi by row/column averaging of E|mu| and -G|mu|; maps by cumulative
/// trapezoidal integration anchored at (u0, v0). Throws NonPositive when a
/// factor is not positive and NotSeparable when the cross-variation exceeds
/// tol (relative to the factor magnitude).
SeparabilityReport separability_and_change(const GridD& E, const GridD& G, const GridD& mu,
                                           double hu, double hv, Domain domain, double u0,
                                           double v0, double tol = 1e-6);

/// Resampled canonical-parameter data on the rectangular (ubar, vbar) grid
/// implied by the report (same node counts, bilinear sampling).
struct CanonicalizeResult {
    CanonicalTriple triple;
    GridD E_new, G_new;  // first-form coefficients in the new parameters
};
CanonicalizeResult apply_canonical_change(const PnmcvGrid& grid, const SeparabilityReport& rep);

}  // namespace lsurf
