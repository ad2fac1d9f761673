#pragma once

#include "lsurf/surface.hpp"
#include "lsurf/vec4.hpp"

namespace lsurf {

struct FirstForm {
    double E = 0, F = 0, G = 0, W = 0;
    bool lorentz_ok = false;
};

/// E, F, G, W = sqrt|EG - F^2|; lorentz_ok iff E > 0, G < 0, EG - F^2 < 0.
FirstForm first_form(const SurfaceJet& jet);

/// Second-order coefficients c^k_ij and tangential coefficients Gamma^k_ij
/// of the decomposition
///   z_ij = Gamma^1_ij z_u - Gamma^2_ij z_v + c^1_ij n1 - c^2_ij n2.
/// Index order inside the arrays: (11, 12, 22).
struct SecondOrderCoeffs {
    double c1[3] = {0, 0, 0};
    double c2[3] = {0, 0, 0};
    double Gamma1[3] = {0, 0, 0};
    double Gamma2[3] = {0, 0, 0};
    /// Max back-substitution residual relative to the input magnitude.
    double residual = 0;

    double scale() const;  // max |c^k_ij|
};

/// First form, normal frame and second-order coefficients at one point.
struct FundamentalData {
    FirstForm ff;
    Vec4 n1, n2;
    SecondOrderCoeffs c;
    SurfaceJet jet;
};

/// Pseudo-orthonormal normal frame: n1 spacelike unit, n2 timelike unit,
/// both orthogonal to z_u, z_v, oriented so det[z_u, n1, z_v, n2] > 0.
/// Construction: pseudo-orthogonal rejections of the coordinate directions,
/// pivoted by largest |<r,r>|, then indefinite Gram-Schmidt.
std::pair<Vec4, Vec4> normal_frame(const SurfaceJet& jet);

/// Solves the 4x4 systems expressing z_uu, z_uv, z_vv in {z_u, z_v, n1, n2}.
SecondOrderCoeffs decompose_second_derivatives(const SurfaceJet& jet, const Vec4& n1,
                                               const Vec4& n2);

/// Convenience: first form + normal frame + decomposition.
FundamentalData fundamental_data(const SurfaceJet& jet);

/// sigma(X1, X2) for tangents X_i = la_i z_u + mu_i z_v (normal-valued
/// second fundamental tensor, from the c-coefficients by bilinearity).
Vec4 sigma(const SecondOrderCoeffs& c, const Vec4& n1, const Vec4& n2,
           double la1, double mu1, double la2, double mu2);

/// Mean curvature vector H = 1/2 tr sigma (trace in the induced metric).
Vec4 mean_curvature_vector(const FundamentalData& fd);

}  // namespace lsurf
