#pragma once

#include <Eigen/Dense>
#include <vector>

#include "lsurf/fundamental.hpp"
#include "lsurf/vec4.hpp"

namespace lsurf {

struct GeometricFunctions;  // geoframe.hpp

enum class PointClass { Flat, UmbilicalMinimal, QuasiMinimal, GeneralSpacelikeH, GeneralTimelikeH };

const char* point_class_name(PointClass c);

inline constexpr double kClassifyTol = 1e-9;

/// Second-order invariants at a point. `gamma` holds the Weingarten-type map
/// in the coordinate basis: column j = image of z_u (j=0) / z_v (j=1).
struct InvariantReport {
    double Delta1 = 0, Delta2 = 0, Delta3 = 0;
    double L = 0, M = 0, N = 0;
    Eigen::Matrix2d gamma = Eigen::Matrix2d::Zero();
    double k = 0;
    double kappa = 0;
    double K = 0;
    double D = 0;
    Vec4 H;
    Causal H_causal = Causal::Zero;
    PointClass point_class = PointClass::Flat;
    int sign_kappa2_minus_k = 0;  // -1, 0, +1 with scale-aware tolerance

    double lmn_scale = 0;  // magnitude reference for L, M, N zero-tests
};

/// Delta determinants, L/M/N, Weingarten map, k, kappa, Gauss curvature,
/// mean curvature vector, principal discriminant and point class.
InvariantReport second_order_invariants(const FundamentalData& fd, double tol = kClassifyTol);

/// Normalized umbilicity residual: max cross-determinant of (L,M,N) against
/// (E,F,G), scaled by the factor magnitudes. Zero iff the point is umbilical.
double umbilicity_residual(const FundamentalData& fd, const InvariantReport& rep);

PointClass classify_point(const FundamentalData& fd, const InvariantReport& rep,
                          double tol = kClassifyTol);

/// Shape-operator matrices in the unit basis x = z_u/sqrt(E), y = z_v/sqrt(-G);
/// column j = image of x (j=0) / y (j=1). Valid in the F = 0 gauge only.
std::pair<Eigen::Matrix2d, Eigen::Matrix2d> shape_operators(const FundamentalData& fd,
                                                            double tol = 1e-9);

/// <(A2 A1 - A1 A2)(x), y> in the unit basis; equals kappa.
double normal_connection_curvature(const Eigen::Matrix2d& A1, const Eigen::Matrix2d& A2);

/// Tangent direction (la : mu) in the coordinate basis, max-component 1.
struct TangentDir {
    double la = 0, mu = 0;
};

struct TangentStructures {
    std::vector<TangentDir> principal;   // 0, 1 or 2 directions
    std::vector<TangentDir> asymptotic;  // 0, 1 or 2 directions
};

/// Real principal/asymptotic directions by discriminant sign. Throws
/// IndeterminateEquation when every quadratic coefficient vanishes.
TangentStructures tangent_structures(const FundamentalData& fd, const InvariantReport& rep,
                                     double tol = kClassifyTol);

/// L la1 la2 + M (la1 mu2 + la2 mu1) + N mu1 mu2; zero iff d1, d2 conjugate.
double conjugate_residual(const InvariantReport& rep, const TangentDir& d1, const TangentDir& d2);

/// Allied mean curvature vector a(H) = -eps (|nu1-nu2|/2) lambda mu l.
/// Throws NotGeneralType when mu = 0 or nu1 = nu2.
Vec4 allied_mean_curvature(const GeometricFunctions& gf, double tol = kClassifyTol);

}  // namespace lsurf
