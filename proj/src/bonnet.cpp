#include "lsurf/bonnet.hpp"

#include <cmath>
#include <sstream>

#include "lsurf/errors.hpp"

namespace lsurf {

namespace {

using Mat54 = Eigen::Matrix<double, 5, 4>;

Eigen::Matrix4d frame_rows(const Frame4& f) {
    Eigen::Matrix4d m;
    for (int i = 0; i < 4; ++i) m.row(i) = to_eigen(f.e[i]);
    return m;
}

Frame4 frame_from_rows(const Eigen::Matrix4d& m, int eps) {
    Frame4 f;
    for (int i = 0; i < 4; ++i) f.e[i] = from_eigen(m.row(i).transpose());
    f.signature = {1, -1, eps, -eps};
    return f;
}

Eigen::Matrix4d eta_eps(int eps) {
    Eigen::Matrix4d h = Eigen::Matrix4d::Zero();
    h.diagonal() << 1, -1, eps, -eps;
    return h;
}

double gram_drift_of(const Eigen::Matrix4d& Z, int eps) {
    static const Eigen::Matrix4d eta = eta_matrix();
    return (Z * eta * Z.transpose() - eta_eps(eps)).cwiseAbs().maxCoeff();
}

/// Indefinite Gram-Schmidt on the frame rows against signature (1,-1,eps,-eps).
/// Returns the max correction applied.
double renormalize_rows(Eigen::Matrix4d& Z, int eps) {
    static const Eigen::Matrix4d eta = eta_matrix();
    const Eigen::Vector4d sig(1, -1, eps, -eps);
    Eigen::Matrix4d out = Z;
    for (int i = 0; i < 4; ++i) {
        Eigen::RowVector4d r = out.row(i);
        for (int j = 0; j < i; ++j) {
            const double proj = (r * eta * out.row(j).transpose())(0, 0) / sig[j];
            r -= proj * out.row(j);
        }
        const double q = (r * eta * r.transpose())(0, 0);
        r /= std::sqrt(std::abs(q));
        out.row(i) = r;
    }
    const double corr = (out - Z).cwiseAbs().maxCoeff();
    Z = out;
    return corr;
}

}  // namespace

FrameOdeSystem::FrameOdeSystem(const GFGrid& grid) : grid_(grid) {
    grid_.frames.reset();
    grid_.points.reset();
}

FrameOdeSystem::Interp FrameOdeSystem::at(double u, double v) const {
    const std::size_t nu = grid_.nu_count(), nv = grid_.nv_count();
    double fi = (u - grid_.domain.umin) / grid_.hu;
    double fj = (v - grid_.domain.vmin) / grid_.hv;
    fi = std::clamp(fi, 0.0, static_cast<double>(nu - 1));
    fj = std::clamp(fj, 0.0, static_cast<double>(nv - 1));
    const std::size_t i0 = std::min(static_cast<std::size_t>(fi), nu - 2);
    const std::size_t j0 = std::min(static_cast<std::size_t>(fj), nv - 2);
    const double a = fi - static_cast<double>(i0), b = fj - static_cast<double>(j0);

    auto lerp = [&](const GridD& g) {
        return g(i0, j0) * (1 - a) * (1 - b) + g(i0 + 1, j0) * a * (1 - b) +
               g(i0, j0 + 1) * (1 - a) * b + g(i0 + 1, j0 + 1) * a * b;
    };
    return {lerp(grid_.gamma1), lerp(grid_.gamma2), lerp(grid_.nu1), lerp(grid_.nu2),
            lerp(grid_.lambda), lerp(grid_.mu),     lerp(grid_.beta1), lerp(grid_.beta2),
            lerp(grid_.sqrtE),  lerp(grid_.sqrtG)};
}

Eigen::Matrix4d FrameOdeSystem::coefficient_matrix_u(double g1, double nu1, double la, double mu,
                                                     double b1, int eps) {
    Eigen::Matrix4d m;
    m << 0, -g1, eps * nu1, 0,
        -g1, 0, eps * la, -eps * mu,
        -nu1, la, 0, -eps * b1,
        0, mu, -eps * b1, 0;
    return m;
}

Eigen::Matrix4d FrameOdeSystem::coefficient_matrix_v(double g2, double nu2, double la, double mu,
                                                     double b2, int eps) {
    Eigen::Matrix4d m;
    m << 0, -g2, eps * la, -eps * mu,
        -g2, 0, eps * nu2, 0,
        -la, nu2, 0, -eps * b2,
        -mu, 0, -eps * b2, 0;
    return m;
}

Eigen::Matrix4d FrameOdeSystem::A(double u, double v) const {
    const Interp c = at(u, v);
    return c.sE * coefficient_matrix_u(c.g1, c.nu1, c.la, c.mu, c.b1, grid_.eps);
}

Eigen::Matrix4d FrameOdeSystem::B(double u, double v) const {
    const Interp c = at(u, v);
    return c.sG * coefficient_matrix_v(c.g2, c.nu2, c.la, c.mu, c.b2, grid_.eps);
}

double FrameOdeSystem::sqrtE(double u, double v) const { return at(u, v).sE; }
double FrameOdeSystem::sqrtG(double u, double v) const { return at(u, v).sG; }

double pseudo_skew_residual(const Eigen::Matrix4d& M, int eps) {
    const Eigen::Matrix4d h = eta_eps(eps);
    return (M.transpose() * h + h * M).cwiseAbs().maxCoeff();
}

FrameOdeSystem assemble_system(const GFGrid& grid) {
    for (std::size_t i = 0; i < grid.nu_count(); ++i) {
        for (std::size_t j = 0; j < grid.nv_count(); ++j) {
            if (!(grid.sqrtE(i, j) > 0) || !(grid.sqrtG(i, j) > 0)) {
                std::ostringstream msg;
                msg << "sqrtE/sqrtG not positive at node (" << i << ", " << j << ")";
                throw GeomError(ErrorCode::InvalidMetric, msg.str());
            }
        }
    }
    return FrameOdeSystem(grid);
}

MetricFormulaCheck metric_formula_check(const GFGrid& g, double min_slope) {
    MetricFormulaCheck out;
    const double eps = g.eps;
    for (std::size_t i = 1; i + 1 < g.nu_count(); ++i) {
        for (std::size_t j = 1; j + 1 < g.nv_count(); ++j) {
            const double mu_u = (g.mu(i + 1, j) - g.mu(i - 1, j)) / (2 * g.hu);
            const double mu_v = (g.mu(i, j + 1) - g.mu(i, j - 1)) / (2 * g.hv);
            const double denE = 2 * g.mu(i, j) * g.gamma2(i, j) - eps * g.lambda(i, j) * g.beta1(i, j) +
                                eps * g.nu1(i, j) * g.beta2(i, j);
            const double denG = 2 * g.mu(i, j) * g.gamma1(i, j) + eps * g.nu2(i, j) * g.beta1(i, j) -
                                eps * g.lambda(i, j) * g.beta2(i, j);
            if (std::abs(denE) > min_slope && std::abs(mu_u) > min_slope) {
                out.nodes_checked_E++;
                out.max_rel_dev_E = std::max(
                    out.max_rel_dev_E, std::abs(mu_u / denE - g.sqrtE(i, j)) / g.sqrtE(i, j));
            }
            if (std::abs(denG) > min_slope && std::abs(mu_v) > min_slope) {
                out.nodes_checked_G++;
                out.max_rel_dev_G = std::max(
                    out.max_rel_dev_G, std::abs(mu_v / denG - g.sqrtG(i, j)) / g.sqrtG(i, j));
            }
        }
    }
    return out;
}

namespace {

struct MarchResult {
    Grid2d<Eigen::Matrix4d> frames;
    Grid2d<Eigen::Vector4d> z;
    double max_drift = 0;
    double max_renorm = 0;
};

/// One RK4 cell step of the augmented state (frame rows + position) along
/// axis 0 (u) or 1 (v), from grid coordinate t0 to t0+h (h may be negative).
Mat54 rk4_cell(const FrameOdeSystem& sys, int axis, double fixed, double t0, double h,
               int substeps, const Mat54& Y0) {
    Mat54 Y = Y0;
    const double dt = h / substeps;
    auto deriv = [&](double t, const Mat54& S) {
        const double u = axis == 0 ? t : fixed;
        const double v = axis == 0 ? fixed : t;
        const Eigen::Matrix4d M = axis == 0 ? sys.A(u, v) : sys.B(u, v);
        Mat54 d;
        d.topRows<4>() = M * S.topRows<4>();
        const double metric = axis == 0 ? sys.sqrtE(u, v) : sys.sqrtG(u, v);
        d.row(4) = metric * S.row(axis == 0 ? 0 : 1);
        return d;
    };
    double t = t0;
    for (int s = 0; s < substeps; ++s) {
        const Mat54 k1 = deriv(t, Y);
        const Mat54 k2 = deriv(t + dt / 2, Y + (dt / 2) * k1);
        const Mat54 k3 = deriv(t + dt / 2, Y + (dt / 2) * k2);
        const Mat54 k4 = deriv(t + dt, Y + dt * k3);
        Y += (dt / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
        t += dt;
    }
    return Y;
}

MarchResult march(const FrameOdeSystem& sys, const Eigen::Matrix4d& init_rows,
                  const Eigen::Vector4d& p0, std::size_t i0, std::size_t j0, bool u_first,
                  const ReconstructOptions& opts) {
    const GFGrid& g = sys.grid();
    const std::size_t nu = g.nu_count(), nv = g.nv_count();
    const int eps = g.eps;
    MarchResult res;
    res.frames = Grid2d<Eigen::Matrix4d>(nu, nv, Eigen::Matrix4d::Zero());
    res.z = Grid2d<Eigen::Vector4d>(nu, nv, Eigen::Vector4d::Zero());

    Grid2d<char> have(nu, nv, 0);
    Mat54 Y0;
    Y0.topRows<4>() = init_rows;
    Y0.row(4) = p0.transpose();

    long steps = 0;
    auto store = [&](std::size_t i, std::size_t j, const Mat54& Y) {
        Mat54 Yc = Y;
        const double drift = gram_drift_of(Yc.topRows<4>(), eps);
        res.max_drift = std::max(res.max_drift, drift);
        if (drift > opts.drift_ceiling) {
            std::ostringstream msg;
            msg << "frame Gram drift " << drift << " exceeds ceiling " << opts.drift_ceiling
                << " at node (" << i << ", " << j << "); refine the grid or substeps";
            throw GeomError(ErrorCode::StepTooLarge, msg.str());
        }
        if (opts.renormalize && ++steps % opts.renorm_every == 0) {
            Eigen::Matrix4d F = Yc.topRows<4>();
            res.max_renorm = std::max(res.max_renorm, renormalize_rows(F, eps));
            Yc.topRows<4>() = F;
        }
        res.frames(i, j) = Yc.topRows<4>();
        res.z(i, j) = Yc.row(4).transpose();
        have(i, j) = 1;
        return Yc;
    };

    auto sweep_line = [&](std::size_t ifix, std::size_t jfix, int axis) {
        // march both directions from the anchored node along `axis`
        const std::size_t n = axis == 0 ? nu : nv;
        const std::size_t start = axis == 0 ? ifix : jfix;
        const double h = axis == 0 ? g.hu : g.hv;
        const double base = axis == 0 ? g.domain.umin : g.domain.vmin;
        const double fixed = axis == 0 ? g.v_at(jfix) : g.u_at(ifix);
        for (int dir : {+1, -1}) {
            std::size_t at = start;
            Mat54 Y;
            Y.topRows<4>() = res.frames(ifix, jfix);
            Y.row(4) = res.z(ifix, jfix).transpose();
            while ((dir > 0 && at + 1 < n) || (dir < 0 && at > 0)) {
                const double t0 = base + static_cast<double>(at) * h;
                Y = rk4_cell(sys, axis, fixed, t0, dir * h, opts.substeps, Y);
                at = dir > 0 ? at + 1 : at - 1;
                const std::size_t i = axis == 0 ? at : ifix;
                const std::size_t j = axis == 0 ? jfix : at;
                Y = store(i, j, Y);
            }
        }
    };

    store(i0, j0, Y0);
    if (u_first) {
        sweep_line(i0, j0, 0);
        for (std::size_t i = 0; i < nu; ++i) sweep_line(i, j0, 1);
    } else {
        sweep_line(i0, j0, 1);
        for (std::size_t j = 0; j < nv; ++j) sweep_line(i0, j, 0);
    }
    return res;
}

std::pair<std::size_t, std::size_t> origin_node(const GFGrid& g, const ReconstructOptions& opts) {
    double u0 = opts.origin_u, v0 = opts.origin_v;
    if (std::isnan(u0)) u0 = g.domain.umin;
    if (std::isnan(v0)) v0 = g.domain.vmin;
    const double fi = (u0 - g.domain.umin) / g.hu;
    const double fj = (v0 - g.domain.vmin) / g.hv;
    const long i = std::lround(fi), j = std::lround(fj);
    if (i < 0 || j < 0 || i >= static_cast<long>(g.nu_count()) ||
        j >= static_cast<long>(g.nv_count()))
        throw GeomError(ErrorCode::DomainError, "integration origin outside the grid");
    return {static_cast<std::size_t>(i), static_cast<std::size_t>(j)};
}

ReconstructedSurface run_engine(const FrameOdeSystem& sys, const Frame4& init, const Vec4& p0,
                                const ReconstructOptions& opts) {
    const GFGrid& g = sys.grid();
    const std::array<int, 4> want{1, -1, g.eps, -g.eps};
    if (init.signature != want)
        throw GeomError(ErrorCode::FrameMismatch,
                        "initial frame signature must be (1,-1,eps,-eps)");
    const double gr = gram_residual(init);
    if (gr > kGramTol) {
        std::ostringstream msg;
        msg << "initial frame Gram residual " << gr << " exceeds " << kGramTol;
        throw GeomError(ErrorCode::FrameMismatch, msg.str());
    }

    const auto [i0, j0] = origin_node(g, opts);
    const MarchResult main = march(sys, frame_rows(init), to_eigen(p0), i0, j0, true, opts);

    ReconstructedSurface out;
    out.domain = g.domain;
    out.hu = g.hu;
    out.hv = g.hv;
    out.eps = g.eps;
    out.max_gram_drift = main.max_drift;
    out.max_renorm_correction = main.max_renorm;
    const std::size_t nu = g.nu_count(), nv = g.nv_count();
    out.z = Grid2d<Vec4>(nu, nv);
    out.frames = Grid2d<Frame4>(nu, nv);
    for (std::size_t i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
            out.z(i, j) = from_eigen(main.z(i, j));
            out.frames(i, j) = frame_from_rows(main.frames(i, j), g.eps);
        }
    }

    if (opts.compute_path_discrepancy) {
        const MarchResult alt = march(sys, frame_rows(init), to_eigen(p0), i0, j0, false, opts);
        double fd = 0, zd = 0;
        for (std::size_t i = 0; i < nu; ++i) {
            for (std::size_t j = 0; j < nv; ++j) {
                fd = std::max(fd,
                              (main.frames(i, j) - alt.frames(i, j)).cwiseAbs().maxCoeff());
                zd = std::max(zd, (main.z(i, j) - alt.z(i, j)).cwiseAbs().maxCoeff());
            }
        }
        out.path_discrepancy = fd;
        out.mixed_partial_residual = zd;
    }
    return out;
}

}  // namespace

ReconstructedSurface integrate_frames(const FrameOdeSystem& sys, const Frame4& init,
                                      const ReconstructOptions& opts) {
    return run_engine(sys, init, Vec4{}, opts);
}

ReconstructedSurface integrate_position(const FrameOdeSystem& sys, const Frame4& init,
                                        const Vec4& p0, const ReconstructOptions& opts) {
    return run_engine(sys, init, p0, opts);
}

ReconstructedSurface reconstruct(const GFGrid& grid, const Frame4& init, const Vec4& p0,
                                 const ReconstructOptions& opts) {
    const auto res = integrability_residuals(grid);
    double worst = 0;
    for (const auto& r : res) worst = std::max(worst, max_abs_valid(r));
    if (worst > opts.integrability_threshold) {
        std::ostringstream msg;
        msg << "max integrability residual " << worst << " exceeds threshold "
            << opts.integrability_threshold;
        throw GeomError(ErrorCode::IntegrabilityTooLarge, msg.str());
    }
    const FrameOdeSystem sys = assemble_system(grid);
    ReconstructedSurface out = run_engine(sys, init, p0, opts);
    out.metric_check = metric_formula_check(grid);
    return out;
}

namespace {

// Fourth-order central stencils.
Vec4 stencil_d1(const Vec4& m2, const Vec4& m1, const Vec4& p1, const Vec4& p2, double h) {
    return (m2 - p2 + (p1 - m1) * 8.0) / (12 * h);
}

Vec4 stencil_d2(const Vec4& m2, const Vec4& m1, const Vec4& c, const Vec4& p1, const Vec4& p2,
                double h) {
    return ((m2 + p2) * -1.0 + (m1 + p1) * 16.0 - c * 30.0) / (12 * h * h);
}

}  // namespace

SurfaceJet grid_jet(const Grid2d<Vec4>& z, std::size_t i, std::size_t j, double hu, double hv) {
    if (i < 2 || j < 2 || i + 2 >= z.nu() || j + 2 >= z.nv())
        throw GeomError(ErrorCode::DomainError, "grid jet needs a two-ring interior node");
    SurfaceJet jet;
    jet.z = z(i, j);
    jet.zu = stencil_d1(z(i - 2, j), z(i - 1, j), z(i + 1, j), z(i + 2, j), hu);
    jet.zv = stencil_d1(z(i, j - 2), z(i, j - 1), z(i, j + 1), z(i, j + 2), hv);
    jet.zuu = stencil_d2(z(i - 2, j), z(i - 1, j), z(i, j), z(i + 1, j), z(i + 2, j), hu);
    jet.zvv = stencil_d2(z(i, j - 2), z(i, j - 1), z(i, j), z(i, j + 1), z(i, j + 2), hv);
    // d/dv of the order-4 u-derivative
    Vec4 rows[4];
    int col = 0;
    for (long dj : {-2L, -1L, 1L, 2L}) {
        rows[col++] = stencil_d1(z(i - 2, j + dj), z(i - 1, j + dj), z(i + 1, j + dj),
                                 z(i + 2, j + dj), hu);
    }
    jet.zuv = stencil_d1(rows[0], rows[1], rows[2], rows[3], hv);
    return jet;
}

GridExtraction extract_pointwise_from_positions(const Grid2d<Vec4>& z, double hu, double hv) {
    const std::size_t nu = z.nu(), nv = z.nv();
    if (nu < 5 || nv < 5)
        throw GeomError(ErrorCode::GridTooSmall, "pointwise re-extraction needs a 5x5 grid");
    const double nan = std::numeric_limits<double>::quiet_NaN();
    GridExtraction out{GridD(nu, nv, nan), GridD(nu, nv, nan), GridD(nu, nv, nan),
                       GridD(nu, nv, nan)};

    for (std::size_t i = 2; i + 2 < nu; ++i) {
        for (std::size_t j = 2; j + 2 < nv; ++j) {
            const SurfaceJet jet = grid_jet(z, i, j, hu, hv);
            try {
                const PrincipalFrameData pf = principal_frame_data(jet);
                const Vec4 sxy =
                    sigma(pf.fd.c, pf.fd.n1, pf.fd.n2, pf.lx, pf.mx, pf.ly, pf.my);
                const Vec4 sxx =
                    sigma(pf.fd.c, pf.fd.n1, pf.fd.n2, pf.lx, pf.mx, pf.lx, pf.mx);
                const Vec4 syy =
                    sigma(pf.fd.c, pf.fd.n1, pf.fd.n2, pf.ly, pf.my, pf.ly, pf.my);
                out.lambda(i, j) = inner(sxy, pf.frame.e[2]);
                out.mu(i, j) = inner(sxy, pf.frame.e[3]);
                out.nu1(i, j) = inner(sxx, pf.frame.e[2]);
                out.nu2(i, j) = inner(syy, pf.frame.e[2]);
            } catch (const GeomError&) {
                // leave NaN
            }
        }
    }
    return out;
}

}  // namespace lsurf
