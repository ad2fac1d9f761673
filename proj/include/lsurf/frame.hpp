#pragma once

#include <array>

#include <Eigen/Dense>

#include "lsurf/vec4.hpp"

namespace lsurf {

inline constexpr double kGramTol = 1e-8;

/// Pseudo-orthonormal frame of E^4_2 with expected self-products
/// recorded in `signature` (each +1 or -1).
struct Frame4 {
    std::array<Vec4, 4> e;
    std::array<int, 4> signature{1, 1, -1, -1};
};

/// Max-norm of Gram(frame) - diag(signature).
double gram_residual(const Frame4& f);

/// Standard basis frame with signature (1,1,-1,-1).
Frame4 standard_frame();

/// Standard-basis geometric frame (x,y,b,l) = (e1,e3,e2,±e4) for a given eps,
/// with l chosen so det[x,y,b,l] < 0.
Frame4 standard_geometric_frame(int eps);

Eigen::Matrix4d to_matrix_columns(const Frame4& f);
Vec4 from_eigen(const Eigen::Vector4d& v);
Eigen::Vector4d to_eigen(const Vec4& v);
Eigen::Matrix4d eta_matrix();

/// Rigid motion of E^4_2: p -> Q p + t with Q^T eta Q = eta.
struct Isometry {
    Eigen::Matrix4d Q = Eigen::Matrix4d::Identity();
    Vec4 t;

    Vec4 apply(const Vec4& p) const;
    Vec4 apply_vector(const Vec4& v) const;  // linear part only
    /// Max-norm of Q^T eta Q - eta.
    double orthogonality_residual() const;
};

/// Isometry taking src frame/point onto dst frame/point. Both frames must
/// carry equal signatures and pass the Gram test. Q is built from the frame
/// correspondence as Q = F_dst S^-1 F_src^T eta with S = diag(signature).
Isometry align_rigid(const Vec4& src_point, const Frame4& src_frame,
                     const Vec4& dst_point, const Frame4& dst_frame,
                     double gram_tol = kGramTol);

}  // namespace lsurf
