#include "lsurf/geoframe.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <sstream>

#include "lsurf/errors.hpp"

namespace lsurf {

namespace {

double det4_rows(const Vec4& a, const Vec4& b, const Vec4& c, const Vec4& d) {
    Eigen::Matrix4d m;
    m.row(0) = to_eigen(a);
    m.row(1) = to_eigen(b);
    m.row(2) = to_eigen(c);
    m.row(3) = to_eigen(d);
    return m.determinant();
}

/// Vector pseudo-orthogonal to a, b, c: eta applied to the Euclidean
/// generalized cross product (cofactor expansion).
Vec4 eta_cross(const Vec4& a, const Vec4& b, const Vec4& c) {
    Eigen::Matrix<double, 3, 4> m;
    m.row(0) = to_eigen(a);
    m.row(1) = to_eigen(b);
    m.row(2) = to_eigen(c);
    Vec4 w;
    for (int i = 0; i < 4; ++i) {
        Eigen::Matrix3d sub;
        int col = 0;
        for (int j = 0; j < 4; ++j) {
            if (j == i) continue;
            sub.col(col++) = m.col(j);
        }
        w[i] = ((i % 2 == 0) ? 1.0 : -1.0) * sub.determinant() * metric_sign(i);
    }
    return w;
}

}  // namespace

PrincipalFrameData principal_frame_data(const SurfaceJet& jet, double tol) {
    PrincipalFrameData out;
    out.fd = fundamental_data(jet);
    out.rep = second_order_invariants(out.fd, tol);

    switch (out.rep.point_class) {
        case PointClass::Flat:
            throw GeomError(ErrorCode::NotGeneralType, "flat point");
        case PointClass::UmbilicalMinimal:
            throw GeomError(ErrorCode::NotGeneralType, "umbilical (minimal) point");
        case PointClass::QuasiMinimal:
            throw GeomError(ErrorCode::NotGeneralType, "quasi-minimal point (lightlike H)");
        default:
            break;
    }
    if (out.rep.sign_kappa2_minus_k <= 0)
        throw GeomError(ErrorCode::NoPrincipalTangents,
                        "kappa^2 - k <= 0: no real principal tangents");

    TangentStructures ts = tangent_structures(out.fd, out.rep, tol);
    if (ts.principal.size() != 2)
        throw GeomError(ErrorCode::NoPrincipalTangents, "principal tangents are not distinct");

    // Classify the two principal directions by causal character.
    const Vec4 zu = jet.zu, zv = jet.zv;
    double co[2][2];
    Vec4 X[2];
    double q[2];
    for (int i = 0; i < 2; ++i) {
        co[i][0] = ts.principal[i].la;
        co[i][1] = ts.principal[i].mu;
        X[i] = zu * co[i][0] + zv * co[i][1];
        q[i] = inner(X[i], X[i]);
    }
    const double qs = std::max(X[0].euclid_norm(), X[1].euclid_norm());
    if (q[0] * q[1] >= 0 || std::min(std::abs(q[0]), std::abs(q[1])) < 1e-12 * qs * qs)
        throw GeomError(ErrorCode::NoPrincipalTangents,
                        "principal tangents are not one spacelike / one timelike");

    const int is = q[0] > 0 ? 0 : 1;
    const int it = 1 - is;
    double ns = std::sqrt(q[is]);
    Vec4 x = X[is] / ns;
    out.lx = co[is][0] / ns;
    out.mx = co[is][1] / ns;
    if (inner(x, zu) < 0) {
        x = -x;
        out.lx = -out.lx;
        out.mx = -out.mx;
    }
    double nt = std::sqrt(-q[it]);
    Vec4 y = X[it] / nt;
    out.ly = co[it][0] / nt;
    out.my = co[it][1] / nt;
    if (inner(y, zv) > 0) {
        y = -y;
        out.ly = -out.ly;
        out.my = -out.my;
    }

    const double hh = inner(out.rep.H, out.rep.H);
    out.eps = hh > 0 ? 1 : -1;
    const Vec4 b = out.rep.H * (out.eps / std::sqrt(out.eps > 0 ? hh : -hh));

    Vec4 l = eta_cross(x, y, b);
    const double ll = inner(l, l);
    // span{x,y,b} has signature (+,-,eps); the complement is forced to -eps.
    if (ll * static_cast<double>(-out.eps) <= 0)
        throw GeomError(ErrorCode::DegenerateNormal, "frame completion has wrong causal type");
    l = l / std::sqrt(std::abs(ll));
    if (det4_rows(x, y, b, l) > 0) l = -l;

    out.frame.e = {x, y, b, l};
    out.frame.signature = {1, -1, out.eps, -out.eps};
    return out;
}

PrincipalFrameData principal_frame_at(const SurfaceSpec& spec, double u, double v, double tol) {
    return principal_frame_data(spec.jet(u, v), tol);
}

GeometricFunctions geometric_functions_at(const SurfaceSpec& spec, double u, double v, double h) {
    const PrincipalFrameData f0 = principal_frame_at(spec, u, v);
    const Vec4 x = f0.frame.e[0], y = f0.frame.e[1], b = f0.frame.e[2], l = f0.frame.e[3];

    GeometricFunctions gf;
    gf.eps = f0.eps;
    gf.frame = f0.frame;

    const auto& c = f0.fd.c;
    const Vec4 sxx = sigma(c, f0.fd.n1, f0.fd.n2, f0.lx, f0.mx, f0.lx, f0.mx);
    const Vec4 sxy = sigma(c, f0.fd.n1, f0.fd.n2, f0.lx, f0.mx, f0.ly, f0.my);
    const Vec4 syy = sigma(c, f0.fd.n1, f0.fd.n2, f0.ly, f0.my, f0.ly, f0.my);
    gf.nu1 = inner(sxx, b);
    gf.nu2 = inner(syy, b);
    gf.lambda = inner(sxy, b);
    gf.mu = inner(sxy, l);

    // Stencil frames along the x- and y-directions (parameter displacement
    // h * (coefficients of the direction)), sign-aligned to the center frame.
    auto aligned_frame = [&](double uu, double vv) {
        PrincipalFrameData fs = principal_frame_at(spec, uu, vv);
        if (fs.eps != f0.eps)
            throw GeomError(ErrorCode::FrameBranchFlip, "epsilon changes across the FD stencil");
        Vec4 xs = fs.frame.e[0], ys = fs.frame.e[1], bs = fs.frame.e[2], ls = fs.frame.e[3];
        const double ax = inner(xs, x);
        if (std::abs(ax) < 0.5)
            throw GeomError(ErrorCode::FrameBranchFlip,
                            "principal direction rotates too fast across the FD stencil");
        if (ax < 0) xs = -xs;
        if (inner(ys, y) > 0) ys = -ys;
        if (inner(ls, l) * static_cast<double>(-f0.eps) < 0) ls = -ls;
        return std::array<Vec4, 4>{xs, ys, bs, ls};
    };

    const auto xp = aligned_frame(u + h * f0.lx, v + h * f0.mx);
    const auto xm = aligned_frame(u - h * f0.lx, v - h * f0.mx);
    const auto yp = aligned_frame(u + h * f0.ly, v + h * f0.my);
    const auto ym = aligned_frame(u - h * f0.ly, v - h * f0.my);

    const Vec4 dx_x = (xp[0] - xm[0]) / (2 * h);  // nabla'_x x
    const Vec4 dy_x = (yp[0] - ym[0]) / (2 * h);  // nabla'_y x
    const Vec4 dx_b = (xp[2] - xm[2]) / (2 * h);  // nabla'_x b
    const Vec4 dy_b = (yp[2] - ym[2]) / (2 * h);  // nabla'_y b

    gf.gamma1 = inner(dx_x, y);
    gf.gamma2 = inner(dy_x, y);
    gf.beta1 = inner(dx_b, l);
    gf.beta2 = inner(dy_b, l);
    return gf;
}

GFGrid extract_gf_grid(const SurfaceSpec& spec, Domain patch, std::size_t nu, std::size_t nv,
                       double h) {
    if (nu < 3 || nv < 3)
        throw GeomError(ErrorCode::GridTooSmall, "extraction grid needs at least 3x3 nodes");
    GFGrid g;
    g.domain = patch;
    g.hu = (patch.umax - patch.umin) / static_cast<double>(nu - 1);
    g.hv = (patch.vmax - patch.vmin) / static_cast<double>(nv - 1);
    for (GridD* f : {&g.gamma1, &g.gamma2, &g.nu1, &g.nu2, &g.lambda, &g.mu, &g.beta1, &g.beta2,
                     &g.sqrtE, &g.sqrtG})
        *f = GridD(nu, nv);
    g.frames = Grid2d<Frame4>(nu, nv);
    g.points = Grid2d<Vec4>(nu, nv);

    bool first = true;
    for (std::size_t i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
            const double u = g.u_at(i), v = g.v_at(j);
            const GeometricFunctions gf = geometric_functions_at(spec, u, v, h);
            if (first) {
                g.eps = gf.eps;
                first = false;
            } else if (gf.eps != g.eps) {
                std::ostringstream msg;
                msg << "epsilon switches sign at node (" << i << ", " << j << ")";
                throw GeomError(ErrorCode::FrameBranchFlip, msg.str());
            }
            g.gamma1(i, j) = gf.gamma1;
            g.gamma2(i, j) = gf.gamma2;
            g.nu1(i, j) = gf.nu1;
            g.nu2(i, j) = gf.nu2;
            g.lambda(i, j) = gf.lambda;
            g.mu(i, j) = gf.mu;
            g.beta1(i, j) = gf.beta1;
            g.beta2(i, j) = gf.beta2;
            const SurfaceJet jet = spec.jet(u, v);
            const FirstForm ff = first_form(jet);
            g.sqrtE(i, j) = std::sqrt(ff.E);
            g.sqrtG(i, j) = std::sqrt(-ff.G);
            (*g.frames)(i, j) = gf.frame;
            (*g.points)(i, j) = jet.z;
        }
    }
    return g;
}

namespace {

double grid_variation(const GridD& g) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (double v : g.data()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    return hi - lo;
}

double grid_max_abs(const GridD& g) {
    double m = 0;
    for (double v : g.data()) m = std::max(m, std::abs(v));
    return m;
}

ClassFlags predicates_impl(double flatK_resid, double var_K, double flat_normal_resid,
                           double var_normal, double var_cmc, double beta_max, double lam_max,
                           double scale, double tol) {
    ClassFlags f;
    const double s = std::max(scale, 1e-300);
    f.flat_K = flatK_resid <= tol * s * s;
    f.constant_K = var_K <= tol * s * s;
    f.flat_normal = flat_normal_resid <= tol * s;
    f.constant_normal = var_normal <= tol * s * s;
    f.cmc = var_cmc <= tol * s;
    f.pnmcv = beta_max <= tol * s;
    f.parallel_H = f.pnmcv && f.cmc;
    f.chen = lam_max <= tol * s;
    return f;
}

}  // namespace

ClassFlags class_predicates(const GeometricFunctions& gf, double tol) {
    const double scale = std::max({std::abs(gf.nu1), std::abs(gf.nu2), std::abs(gf.lambda),
                                   std::abs(gf.mu), std::abs(gf.beta1), std::abs(gf.beta2)});
    return predicates_impl(std::abs(gf.lambda * gf.lambda - gf.mu * gf.mu - gf.nu1 * gf.nu2), 0.0,
                           std::abs(gf.nu1 + gf.nu2), 0.0, 0.0,
                           std::max(std::abs(gf.beta1), std::abs(gf.beta2)), std::abs(gf.lambda),
                           scale, tol);
}

ClassFlags class_predicates(const GFGrid& g, double tol) {
    const std::size_t nu = g.nu_count(), nv = g.nv_count();
    GridD gaussK(nu, nv), normalK(nu, nv), cmcq(nu, nv), flatn(nu, nv), flatK(nu, nv);
    for (std::size_t i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
            const double l = g.lambda(i, j), m = g.mu(i, j);
            const double n1 = g.nu1(i, j), n2 = g.nu2(i, j);
            gaussK(i, j) = g.eps * (l * l - m * m - n1 * n2);
            flatK(i, j) = l * l - m * m - n1 * n2;
            normalK(i, j) = m * (n1 + n2);
            cmcq(i, j) = n1 - n2;
            flatn(i, j) = n1 + n2;
        }
    }
    const double scale = std::max({grid_max_abs(g.nu1), grid_max_abs(g.nu2), grid_max_abs(g.lambda),
                                   grid_max_abs(g.mu), grid_max_abs(g.beta1),
                                   grid_max_abs(g.beta2)});
    return predicates_impl(grid_max_abs(flatK), grid_variation(gaussK), grid_max_abs(flatn),
                           grid_variation(normalK), grid_variation(cmcq),
                           std::max(grid_max_abs(g.beta1), grid_max_abs(g.beta2)),
                           grid_max_abs(g.lambda), scale, tol);
}

std::array<GridD, 6> integrability_residuals(const GFGrid& g) {
    const std::size_t nu = g.nu_count(), nv = g.nv_count();
    if (nu < 3 || nv < 3)
        throw GeomError(ErrorCode::GridTooSmall, "residuals need at least 3x3 nodes");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::array<GridD, 6> r;
    for (auto& f : r) f = GridD(nu, nv, nan);

    const double eps = g.eps;
    auto du = [&](const GridD& f, std::size_t i, std::size_t j) {
        return (f(i + 1, j) - f(i - 1, j)) / (2 * g.hu);
    };
    auto dv = [&](const GridD& f, std::size_t i, std::size_t j) {
        return (f(i, j + 1) - f(i, j - 1)) / (2 * g.hv);
    };

    for (std::size_t i = 1; i + 1 < nu; ++i) {
        for (std::size_t j = 1; j + 1 < nv; ++j) {
            const double g1 = g.gamma1(i, j), g2 = g.gamma2(i, j);
            const double n1 = g.nu1(i, j), n2 = g.nu2(i, j);
            const double la = g.lambda(i, j), m = g.mu(i, j);
            const double b1 = g.beta1(i, j), b2 = g.beta2(i, j);
            const double isE = 1.0 / g.sqrtE(i, j), isG = 1.0 / g.sqrtG(i, j);
            auto X = [&](const GridD& f) { return isE * du(f, i, j); };
            auto Y = [&](const GridD& f) { return isG * dv(f, i, j); };

            r[0](i, j) = 2 * m * g2 - eps * la * b1 + eps * n1 * b2 - X(g.mu);
            r[1](i, j) = 2 * m * g1 + eps * n2 * b1 - eps * la * b2 - Y(g.mu);
            r[2](i, j) = 2 * la * g2 - eps * m * b1 - (n1 + n2) * g1 - (X(g.lambda) - Y(g.nu1));
            r[3](i, j) = 2 * la * g1 - eps * m * b2 - (n1 + n2) * g2 - (-X(g.nu2) + Y(g.lambda));
            r[4](i, j) = g1 * b1 - g2 * b2 + (n1 + n2) * m - (-X(g.beta2) + Y(g.beta1));
            r[5](i, j) = eps * (la * la - m * m - n1 * n2) -
                         (X(g.gamma2) - Y(g.gamma1) + g1 * g1 - g2 * g2);
        }
    }
    return r;
}

double max_abs_valid(const GridD& g, std::size_t margin) {
    double m = 0;
    const std::size_t nu = g.nu(), nv = g.nv();
    for (std::size_t i = margin; i + margin < nu; ++i) {
        for (std::size_t j = margin; j + margin < nv; ++j) {
            const double v = g(i, j);
            if (!std::isnan(v)) m = std::max(m, std::abs(v));
        }
    }
    return m;
}

}  // namespace lsurf
