#include "lsurf/invariants.hpp"

#include <cmath>
#include <sstream>

#include "lsurf/errors.hpp"
#include "lsurf/geoframe.hpp"

namespace lsurf {

const char* point_class_name(PointClass c) {
    switch (c) {
        case PointClass::Flat: return "flat";
        case PointClass::UmbilicalMinimal: return "umbilical-minimal";
        case PointClass::QuasiMinimal: return "quasi-minimal";
        case PointClass::GeneralSpacelikeH: return "general-spacelike-H";
        case PointClass::GeneralTimelikeH: return "general-timelike-H";
    }
    return "?";
}

namespace {

double det2(double a, double b, double c, double d) { return a * d - b * c; }

/// Stable real roots of a t1^2 + b t1 t2 + c t2^2 = 0 as directions (t1:t2).
/// Returns 0, 1 or 2 normalized directions depending on the discriminant.
std::vector<TangentDir> quadratic_directions(double a, double b, double c, double tol) {
    const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
    std::vector<TangentDir> dirs;
    const double disc = b * b - 4 * a * c;
    if (disc < -tol * scale * scale) return dirs;
    auto push = [&dirs](double la, double mu) {
        const double m = std::max(std::abs(la), std::abs(mu));
        dirs.push_back({la / m, mu / m});
    };
    const bool double_root = disc <= tol * scale * scale;
    const double sq = double_root ? 0.0 : std::sqrt(disc);
    if (std::abs(a) < 1e-13 * std::abs(b) && std::abs(c) < 1e-13 * std::abs(b)) {
        push(1, 0);
        push(0, 1);
        return dirs;
    }
    // Cancellation-free form, pivoting on the larger outer coefficient.
    const double q = -0.5 * (b + (b >= 0 ? sq : -sq));
    if (std::abs(a) >= std::abs(c)) {
        push(q / a, 1);
        if (!double_root) push(std::abs(q) > 0 ? c / q : 0.0, 1);
    } else {
        push(1, q / c);
        if (!double_root) push(1, std::abs(q) > 0 ? a / q : 0.0);
    }
    if (double_root && !dirs.empty()) dirs.resize(1);
    return dirs;
}

}  // namespace

InvariantReport second_order_invariants(const FundamentalData& fd, double tol) {
    const auto& c = fd.c;
    const double E = fd.ff.E, F = fd.ff.F, G = fd.ff.G, W = fd.ff.W;
    const double den = E * G - F * F;
    if (!fd.ff.lorentz_ok)
        throw GeomError(ErrorCode::LorentzDegenerate, "invariants need a Lorentzian first form");

    InvariantReport r;
    r.Delta1 = det2(c.c1[0], c.c1[1], c.c2[0], c.c2[1]);
    r.Delta2 = det2(c.c1[0], c.c1[2], c.c2[0], c.c2[2]);
    r.Delta3 = det2(c.c1[1], c.c1[2], c.c2[1], c.c2[2]);
    r.L = 2 * r.Delta1 / W;
    r.M = r.Delta2 / W;
    r.N = 2 * r.Delta3 / W;
    r.lmn_scale = std::max(c.scale() * c.scale() / W, 1e-300);

    r.gamma(0, 0) = (F * r.M - G * r.L) / den;
    r.gamma(1, 0) = (F * r.L - E * r.M) / den;
    r.gamma(0, 1) = (F * r.N - G * r.M) / den;
    r.gamma(1, 1) = (F * r.M - E * r.N) / den;
    r.k = (r.L * r.N - r.M * r.M) / den;
    r.kappa = (E * r.N + G * r.L - 2 * F * r.M) / (2 * den);

    // Gauss equation quotient.
    const Vec4 s11 = sigma(c, fd.n1, fd.n2, 1, 0, 1, 0);
    const Vec4 s12 = sigma(c, fd.n1, fd.n2, 1, 0, 0, 1);
    const Vec4 s22 = sigma(c, fd.n1, fd.n2, 0, 1, 0, 1);
    r.K = (inner(s11, s22) - inner(s12, s12)) / den;

    r.D = 4 * den * den * (r.kappa * r.kappa - r.k);

    r.H = mean_curvature_vector(fd);
    const double h_scale = std::max(c.scale() / std::min(E, -G), 1e-300);
    // components compare against h_scale, the self-product against h_scale^2
    const double hh = inner(r.H, r.H);
    if (r.H.max_abs() <= tol * h_scale)
        r.H_causal = Causal::Zero;
    else if (std::abs(hh) <= tol * h_scale * h_scale)
        r.H_causal = Causal::Lightlike;
    else
        r.H_causal = hh > 0 ? Causal::Spacelike : Causal::Timelike;

    const double k2k = r.kappa * r.kappa - r.k;
    const double k_scale = std::max({r.kappa * r.kappa, std::abs(r.k), 1e-300});
    r.sign_kappa2_minus_k = std::abs(k2k) <= tol * k_scale ? 0 : (k2k > 0 ? 1 : -1);

    r.point_class = classify_point(fd, r, tol);
    return r;
}

double umbilicity_residual(const FundamentalData& fd, const InvariantReport& rep) {
    const double E = fd.ff.E, F = fd.ff.F, G = fd.ff.G;
    const double s1 = std::max({std::abs(rep.L), std::abs(rep.M), std::abs(rep.N), rep.lmn_scale});
    const double s2 = std::max({std::abs(E), std::abs(F), std::abs(G)});
    const double r = std::max({std::abs(rep.L * F - rep.M * E), std::abs(rep.L * G - rep.N * E),
                               std::abs(rep.M * G - rep.N * F)});
    return r / (s1 * s2);
}

PointClass classify_point(const FundamentalData& fd, const InvariantReport& rep, double tol) {
    const double lmn_max = std::max({std::abs(rep.L), std::abs(rep.M), std::abs(rep.N)});
    if (lmn_max <= tol * rep.lmn_scale) return PointClass::Flat;

    const double h_scale =
        std::max(fd.c.scale() / std::min(fd.ff.E, -fd.ff.G), 1e-300);
    if (rep.H.max_abs() <= tol * h_scale) return PointClass::UmbilicalMinimal;

    const double hh = inner(rep.H, rep.H);
    if (std::abs(hh) <= tol * h_scale * h_scale) return PointClass::QuasiMinimal;
    return hh > 0 ? PointClass::GeneralSpacelikeH : PointClass::GeneralTimelikeH;
}

std::pair<Eigen::Matrix2d, Eigen::Matrix2d> shape_operators(const FundamentalData& fd,
                                                            double tol) {
    const double E = fd.ff.E, F = fd.ff.F, G = fd.ff.G;
    if (std::abs(F) > tol * std::max(E, -G))
        throw GeomError(ErrorCode::NotDiagonalGauge, "shape operators need the F = 0 gauge");
    const double sEG = std::sqrt(-E * G);
    Eigen::Matrix2d A1, A2;
    A1 << fd.c.c1[0] / E, fd.c.c1[1] / sEG, -fd.c.c1[1] / sEG, fd.c.c1[2] / G;
    A2 << fd.c.c2[0] / E, fd.c.c2[1] / sEG, -fd.c.c2[1] / sEG, fd.c.c2[2] / G;
    return {A1, A2};
}

double normal_connection_curvature(const Eigen::Matrix2d& A1, const Eigen::Matrix2d& A2) {
    const Eigen::Matrix2d C = A2 * A1 - A1 * A2;
    // (C x) = C(0,0) x + C(1,0) y; pairing with y carries <y,y> = -1.
    return -C(1, 0);
}

TangentStructures tangent_structures(const FundamentalData& fd, const InvariantReport& rep,
                                     double tol) {
    const double E = fd.ff.E, F = fd.ff.F, G = fd.ff.G;
    TangentStructures ts;

    const double pa = E * rep.M - F * rep.L;
    const double pb = E * rep.N - G * rep.L;
    const double pc = F * rep.N - G * rep.M;
    const double pscale = rep.lmn_scale * std::max({std::abs(E), std::abs(F), std::abs(G)});
    if (std::max({std::abs(pa), std::abs(pb), std::abs(pc)}) <= tol * pscale)
        throw GeomError(ErrorCode::IndeterminateEquation,
                        "principal-tangent equation vanishes identically (flat or umbilical point)");
    ts.principal = quadratic_directions(pa, pb, pc, tol);

    const double ascale = rep.lmn_scale;
    if (std::max({std::abs(rep.L), std::abs(rep.M), std::abs(rep.N)}) <= tol * ascale)
        throw GeomError(ErrorCode::IndeterminateEquation,
                        "asymptotic-tangent equation vanishes identically (flat point)");
    ts.asymptotic = quadratic_directions(rep.L, 2 * rep.M, rep.N, tol);
    return ts;
}

double conjugate_residual(const InvariantReport& rep, const TangentDir& d1, const TangentDir& d2) {
    return rep.L * d1.la * d2.la + rep.M * (d1.la * d2.mu + d2.la * d1.mu) + rep.N * d1.mu * d2.mu;
}

Vec4 allied_mean_curvature(const GeometricFunctions& gf, double tol) {
    const double scale = std::max({std::abs(gf.nu1), std::abs(gf.nu2), std::abs(gf.mu), 1e-300});
    if (std::abs(gf.mu) <= tol * scale || std::abs(gf.nu1 - gf.nu2) <= tol * scale)
        throw GeomError(ErrorCode::NotGeneralType,
                        "allied vector needs mu != 0 and nu1 != nu2");
    const double eps = gf.eps;
    return gf.frame.e[3] * (-eps * 0.5 * std::abs(gf.nu1 - gf.nu2) * gf.lambda * gf.mu);
}

}  // namespace lsurf
