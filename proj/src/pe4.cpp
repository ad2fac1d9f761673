#include "lsurf/frame.hpp"

#include <ostream>
#include <sstream>

#include "lsurf/errors.hpp"

namespace lsurf {

const char* error_code_name(ErrorCode code) {
    switch (code) {
        case ErrorCode::DomainError: return "DomainError";
        case ErrorCode::DegenerateNormal: return "DegenerateNormal";
        case ErrorCode::SingularBasis: return "SingularBasis";
        case ErrorCode::NotDiagonalGauge: return "NotDiagonalGauge";
        case ErrorCode::NotGeneralType: return "NotGeneralType";
        case ErrorCode::NoPrincipalTangents: return "NoPrincipalTangents";
        case ErrorCode::FrameBranchFlip: return "FrameBranchFlip";
        case ErrorCode::FrameMismatch: return "FrameMismatch";
        case ErrorCode::IndeterminateEquation: return "IndeterminateEquation";
        case ErrorCode::InvalidMetric: return "InvalidMetric";
        case ErrorCode::StepTooLarge: return "StepTooLarge";
        case ErrorCode::IntegrabilityTooLarge: return "IntegrabilityTooLarge";
        case ErrorCode::MuVanishes: return "MuVanishes";
        case ErrorCode::GridTooSmall: return "GridTooSmall";
        case ErrorCode::NotSeparable: return "NotSeparable";
        case ErrorCode::NonPositive: return "NonPositive";
        case ErrorCode::LorentzDegenerate: return "LorentzDegenerate";
        case ErrorCode::IoError: return "IoError";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "UnknownError";
}

const char* causal_name(Causal c) {
    switch (c) {
        case Causal::Spacelike: return "spacelike";
        case Causal::Timelike: return "timelike";
        case Causal::Lightlike: return "lightlike";
        case Causal::Zero: return "zero";
    }
    return "?";
}

std::ostream& operator<<(std::ostream& os, const Vec4& v) {
    return os << "(" << v.x1 << ", " << v.x2 << ", " << v.x3 << ", " << v.x4 << ")";
}

double gram_residual(const Frame4& f) {
    double worst = 0.0;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            const double expected = (i == j) ? static_cast<double>(f.signature[i]) : 0.0;
            worst = std::max(worst, std::abs(inner(f.e[i], f.e[j]) - expected));
        }
    }
    return worst;
}

Frame4 standard_frame() {
    Frame4 f;
    f.e = {Vec4{1, 0, 0, 0}, Vec4{0, 1, 0, 0}, Vec4{0, 0, 1, 0}, Vec4{0, 0, 0, 1}};
    f.signature = {1, 1, -1, -1};
    return f;
}

Frame4 standard_geometric_frame(int eps) {
    Frame4 f;
    if (eps > 0) {
        // x=e1, y=e3, b=e2, l=e4: det[x,y,b,l] = -1 < 0.
        f.e = {Vec4{1, 0, 0, 0}, Vec4{0, 0, 1, 0}, Vec4{0, 1, 0, 0}, Vec4{0, 0, 0, 1}};
        f.signature = {1, -1, 1, -1};
    } else {
        // x=e1, y=e3, b=-e4, l=e2: det = -1 < 0.
        f.e = {Vec4{1, 0, 0, 0}, Vec4{0, 0, 1, 0}, Vec4{0, 0, 0, -1}, Vec4{0, 1, 0, 0}};
        f.signature = {1, -1, -1, 1};
    }
    return f;
}

Eigen::Matrix4d eta_matrix() {
    Eigen::Matrix4d eta = Eigen::Matrix4d::Zero();
    eta.diagonal() << 1, 1, -1, -1;
    return eta;
}

Eigen::Vector4d to_eigen(const Vec4& v) { return Eigen::Vector4d(v.x1, v.x2, v.x3, v.x4); }

Vec4 from_eigen(const Eigen::Vector4d& v) { return Vec4{v[0], v[1], v[2], v[3]}; }

Eigen::Matrix4d to_matrix_columns(const Frame4& f) {
    Eigen::Matrix4d m;
    for (int j = 0; j < 4; ++j) m.col(j) = to_eigen(f.e[j]);
    return m;
}

Vec4 Isometry::apply(const Vec4& p) const {
    return from_eigen(Q * to_eigen(p)) + t;
}

Vec4 Isometry::apply_vector(const Vec4& v) const {
    return from_eigen(Q * to_eigen(v));
}

double Isometry::orthogonality_residual() const {
    const Eigen::Matrix4d eta = eta_matrix();
    return (Q.transpose() * eta * Q - eta).cwiseAbs().maxCoeff();
}

Isometry align_rigid(const Vec4& src_point, const Frame4& src_frame,
                     const Vec4& dst_point, const Frame4& dst_frame,
                     double gram_tol) {
    if (src_frame.signature != dst_frame.signature) {
        std::ostringstream msg;
        msg << "frame signatures differ";
        throw GeomError(ErrorCode::FrameMismatch, msg.str());
    }
    const double rs = gram_residual(src_frame);
    const double rd = gram_residual(dst_frame);
    if (rs > gram_tol || rd > gram_tol) {
        std::ostringstream msg;
        msg << "Gram residuals " << rs << ", " << rd << " exceed tolerance " << gram_tol;
        throw GeomError(ErrorCode::FrameMismatch, msg.str());
    }

    // F_src^-1 = S^-1 F_src^T eta, S = diag(signature); S^-1 = S.
    Eigen::Matrix4d S = Eigen::Matrix4d::Zero();
    for (int i = 0; i < 4; ++i) S(i, i) = src_frame.signature[i];
    const Eigen::Matrix4d Fs = to_matrix_columns(src_frame);
    const Eigen::Matrix4d Fd = to_matrix_columns(dst_frame);

    Isometry iso;
    iso.Q = Fd * S * Fs.transpose() * eta_matrix();
    iso.t = dst_point - iso.apply_vector(src_point);
    return iso;
}

}  // namespace lsurf
