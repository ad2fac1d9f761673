#include "lsurf/fundamental.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <sstream>

#include "lsurf/errors.hpp"
#include "lsurf/frame.hpp"

namespace lsurf {

FirstForm first_form(const SurfaceJet& jet) {
    FirstForm ff;
    ff.E = inner(jet.zu, jet.zu);
    ff.F = inner(jet.zu, jet.zv);
    ff.G = inner(jet.zv, jet.zv);
    const double det = ff.E * ff.G - ff.F * ff.F;
    ff.W = std::sqrt(std::abs(det));
    ff.lorentz_ok = ff.E > 0 && ff.G < 0 && det < 0;
    return ff;
}

double SecondOrderCoeffs::scale() const {
    double s = 0;
    for (int i = 0; i < 3; ++i) s = std::max(s, std::max(std::abs(c1[i]), std::abs(c2[i])));
    return s;
}

namespace {

/// Rejection of w from the tangent plane (pseudo-orthogonal projection onto
/// the normal space).
Vec4 normal_rejection(const SurfaceJet& jet, const FirstForm& ff, const Vec4& w) {
    const double det = ff.E * ff.G - ff.F * ff.F;
    const double bu = inner(w, jet.zu), bv = inner(w, jet.zv);
    const double alpha = (ff.G * bu - ff.F * bv) / det;
    const double beta = (-ff.F * bu + ff.E * bv) / det;
    return w - jet.zu * alpha - jet.zv * beta;
}

double det4_columns(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
    Eigen::Matrix4d m;
    m.col(0) = to_eigen(a);
    m.col(1) = to_eigen(b);
    m.col(2) = to_eigen(c);
    m.col(3) = to_eigen(d);
    return m.determinant();
}

}  // namespace

std::pair<Vec4, Vec4> normal_frame(const SurfaceJet& jet) {
    const FirstForm ff = first_form(jet);
    if (!ff.lorentz_ok)
        throw GeomError(ErrorCode::LorentzDegenerate,
                        "first fundamental form is not Lorentzian (E>0, G<0 required)");

    // Rejections of the four coordinate directions; rank by |<r,r>|, a
    // combined size/causal-margin score that skips near-lightlike starters.
    Vec4 rej[4];
    double q[4];
    for (int k = 0; k < 4; ++k) {
        Vec4 e;
        e[k] = 1.0;
        rej[k] = normal_rejection(jet, ff, e);
        q[k] = inner(rej[k], rej[k]);
    }
    int i0 = 0;
    for (int k = 1; k < 4; ++k) {
        if (std::abs(q[k]) > std::abs(q[i0]) ||
            (std::abs(q[k]) == std::abs(q[i0]) && q[k] > 0 && q[i0] < 0))
            i0 = k;
    }
    const double scale_e = std::max(1.0, rej[i0].euclid_norm());
    if (std::abs(q[i0]) < 1e-12 * scale_e * scale_e)
        throw GeomError(ErrorCode::DegenerateNormal, "no robust causal direction in normal space");
    const Vec4 m1 = rej[i0] / std::sqrt(std::abs(q[i0]));
    const double s1 = q[i0] > 0 ? 1.0 : -1.0;

    int ibest = -1;
    Vec4 r2best;
    double q2best = 0;
    for (int k = 0; k < 4; ++k) {
        if (k == i0) continue;
        const Vec4 r2 = rej[k] - m1 * (inner(rej[k], m1) / inner(m1, m1));
        const double q2 = inner(r2, r2);
        if (ibest < 0 || std::abs(q2) > std::abs(q2best)) {
            ibest = k;
            r2best = r2;
            q2best = q2;
        }
    }
    const double scale2 = std::max(1.0, r2best.euclid_norm());
    if (std::abs(q2best) < 1e-12 * scale2 * scale2)
        throw GeomError(ErrorCode::DegenerateNormal, "normal space is numerically lightlike");
    const Vec4 m2 = r2best / std::sqrt(std::abs(q2best));
    const double s2 = q2best > 0 ? 1.0 : -1.0;
    if (s1 * s2 > 0)
        throw GeomError(ErrorCode::DegenerateNormal,
                        "normal space does not have signature (+,-)");

    Vec4 n1 = s1 > 0 ? m1 : m2;
    Vec4 n2 = s1 > 0 ? m2 : m1;
    if (det4_columns(jet.zu, n1, jet.zv, n2) < 0) n2 = -n2;
    return {n1, n2};
}

SecondOrderCoeffs decompose_second_derivatives(const SurfaceJet& jet, const Vec4& n1,
                                               const Vec4& n2) {
    Eigen::Matrix4d B;
    B.col(0) = to_eigen(jet.zu);
    B.col(1) = to_eigen(jet.zv);
    B.col(2) = to_eigen(n1);
    B.col(3) = to_eigen(n2);

    Eigen::FullPivLU<Eigen::Matrix4d> lu(B);
    // Gram-style conditioning guard on the basis matrix.
    const double amax = B.cwiseAbs().maxCoeff();
    if (!lu.isInvertible() ||
        std::abs(lu.determinant()) < 1e-12 * amax * amax * amax * amax) {
        throw GeomError(ErrorCode::SingularBasis, "tangent+normal basis is numerically singular");
    }

    SecondOrderCoeffs out;
    const Vec4 rhs[3] = {jet.zuu, jet.zuv, jet.zvv};
    double worst = 0, scale = 0;
    for (int i = 0; i < 3; ++i) {
        const Eigen::Vector4d b = to_eigen(rhs[i]);
        const Eigen::Vector4d coef = lu.solve(b);
        out.Gamma1[i] = coef[0];
        out.Gamma2[i] = -coef[1];
        out.c1[i] = coef[2];
        out.c2[i] = -coef[3];
        worst = std::max(worst, (B * coef - b).cwiseAbs().maxCoeff());
        scale = std::max(scale, b.cwiseAbs().maxCoeff());
    }
    out.residual = worst / std::max(scale, 1e-300);
    return out;
}

FundamentalData fundamental_data(const SurfaceJet& jet) {
    FundamentalData fd;
    fd.jet = jet;
    fd.ff = first_form(jet);
    auto [n1, n2] = normal_frame(jet);
    fd.n1 = n1;
    fd.n2 = n2;
    fd.c = decompose_second_derivatives(jet, n1, n2);
    return fd;
}

Vec4 sigma(const SecondOrderCoeffs& c, const Vec4& n1, const Vec4& n2,
           double la1, double mu1, double la2, double mu2) {
    const double w11 = la1 * la2;
    const double w12 = la1 * mu2 + la2 * mu1;
    const double w22 = mu1 * mu2;
    const double a1 = w11 * c.c1[0] + w12 * c.c1[1] + w22 * c.c1[2];
    const double a2 = w11 * c.c2[0] + w12 * c.c2[1] + w22 * c.c2[2];
    return n1 * a1 - n2 * a2;
}

Vec4 mean_curvature_vector(const FundamentalData& fd) {
    // H = 1/2 (sigma(x,x) - sigma(y,y)) with x = z_u/sqrt(E) and y the unit
    // timelike tangent after Gram-Schmidt against x in the induced metric.
    const double E = fd.ff.E, F = fd.ff.F;
    const double lx = 1.0 / std::sqrt(E), mx = 0.0;
    // y' = z_v - (F/E) z_u has <y',y'> = G - F^2/E < 0.
    const double gp = fd.ff.G - F * F / E;
    const double s = 1.0 / std::sqrt(-gp);
    const double ly = -(F / E) * s, my = s;
    const Vec4 sxx = sigma(fd.c, fd.n1, fd.n2, lx, mx, lx, mx);
    const Vec4 syy = sigma(fd.c, fd.n1, fd.n2, ly, my, ly, my);
    return (sxx - syy) * 0.5;
}

}  // namespace lsurf
