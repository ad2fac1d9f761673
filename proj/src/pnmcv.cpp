#include "lsurf/pnmcv.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "lsurf/errors.hpp"

namespace lsurf {

namespace {

void require_mu_nonzero(const GridD& mu, double floor = 0.0) {
    for (std::size_t i = 0; i < mu.nu(); ++i) {
        for (std::size_t j = 0; j < mu.nv(); ++j) {
            if (!(std::abs(mu(i, j)) > floor)) {
                std::ostringstream msg;
                msg << "mu vanishes at node (" << i << ", " << j << ")";
                throw GeomError(ErrorCode::MuVanishes, msg.str());
            }
        }
    }
}

/// Central differences inside, one-sided second-order at the boundary.
GridD diff_u(const GridD& f, double h) {
    const std::size_t nu = f.nu(), nv = f.nv();
    GridD d(nu, nv);
    for (std::size_t j = 0; j < nv; ++j) {
        for (std::size_t i = 0; i < nu; ++i) {
            if (i == 0)
                d(i, j) = (-3 * f(0, j) + 4 * f(1, j) - f(2, j)) / (2 * h);
            else if (i + 1 == nu)
                d(i, j) = (3 * f(nu - 1, j) - 4 * f(nu - 2, j) + f(nu - 3, j)) / (2 * h);
            else
                d(i, j) = (f(i + 1, j) - f(i - 1, j)) / (2 * h);
        }
    }
    return d;
}

GridD diff_v(const GridD& f, double h) {
    const std::size_t nu = f.nu(), nv = f.nv();
    GridD d(nu, nv);
    for (std::size_t i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
            if (j == 0)
                d(i, j) = (-3 * f(i, 0) + 4 * f(i, 1) - f(i, 2)) / (2 * h);
            else if (j + 1 == nv)
                d(i, j) = (3 * f(i, nv - 1) - 4 * f(i, nv - 2) + f(i, nv - 3)) / (2 * h);
            else
                d(i, j) = (f(i, j + 1) - f(i, j - 1)) / (2 * h);
        }
    }
    return d;
}

}  // namespace

GridD hyperbolic_laplacian(const GridD& f, double hu, double hv) {
    const std::size_t nu = f.nu(), nv = f.nv();
    if (nu < 3 || nv < 3)
        throw GeomError(ErrorCode::GridTooSmall, "hyperbolic Laplacian needs at least 3x3 nodes");
    GridD out(nu, nv, std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 1; i + 1 < nu; ++i) {
        for (std::size_t j = 1; j + 1 < nv; ++j) {
            const double fuu = (f(i + 1, j) - 2 * f(i, j) + f(i - 1, j)) / (hu * hu);
            const double fvv = (f(i, j + 1) - 2 * f(i, j) + f(i, j - 1)) / (hv * hv);
            out(i, j) = fuu - fvv;
        }
    }
    return out;
}

std::array<GridD, 3> natural_pde_residuals(const CanonicalTriple& t) {
    require_mu_nonzero(t.mu);
    const std::size_t nu = t.nu_count(), nv = t.nv_count();
    if (nu < 3 || nv < 3)
        throw GeomError(ErrorCode::GridTooSmall, "PDE residuals need at least 3x3 nodes");

    GridD lnmu(nu, nv);
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nv; ++j) lnmu(i, j) = std::log(std::abs(t.mu(i, j)));

    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::array<GridD, 3> r{GridD(nu, nv, nan), GridD(nu, nv, nan), GridD(nu, nv, nan)};
    const GridD lap = hyperbolic_laplacian(lnmu, t.hu, t.hv);

    for (std::size_t i = 1; i + 1 < nu; ++i) {
        for (std::size_t j = 1; j + 1 < nv; ++j) {
            const double nu_u = (t.nu(i + 1, j) - t.nu(i - 1, j)) / (2 * t.hu);
            const double nu_v = (t.nu(i, j + 1) - t.nu(i, j - 1)) / (2 * t.hv);
            const double la_u = (t.lambda(i + 1, j) - t.lambda(i - 1, j)) / (2 * t.hu);
            const double la_v = (t.lambda(i, j + 1) - t.lambda(i, j - 1)) / (2 * t.hv);
            const double lm_u = (lnmu(i + 1, j) - lnmu(i - 1, j)) / (2 * t.hu);
            const double lm_v = (lnmu(i, j + 1) - lnmu(i, j - 1)) / (2 * t.hv);
            const double la = t.lambda(i, j), m = t.mu(i, j), n = t.nu(i, j);
            r[0](i, j) = nu_u + la_v - la * lm_v;
            r[1](i, j) = nu_v - la_u + la * lm_u;
            r[2](i, j) = t.eps * (la * la - m * m + n * n) - 0.5 * std::abs(m) * lap(i, j);
        }
    }
    return r;
}

CanonicalWarnings canonical_warnings(const CanonicalTriple& t, double tol) {
    CanonicalWarnings w;
    double lo = std::numeric_limits<double>::infinity(), hi = -lo, amp = 0;
    for (double v : t.nu.data()) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        amp = std::max(amp, std::abs(v));
    }
    w.nu_variation = hi - lo;
    w.nu_constant = w.nu_variation <= tol * std::max(amp, 1.0);
    return w;
}

GFGrid gf_from_canonical(const CanonicalTriple& t) {
    require_mu_nonzero(t.mu);
    const std::size_t nu = t.nu_count(), nv = t.nv_count();

    GridD sqmu(nu, nv);
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nv; ++j) sqmu(i, j) = std::sqrt(std::abs(t.mu(i, j)));

    GFGrid g;
    g.domain = t.domain;
    g.hu = t.hu;
    g.hv = t.hv;
    g.eps = t.eps;
    g.lambda = t.lambda;
    g.mu = t.mu;
    g.nu1 = t.nu;
    g.nu2 = GridD(nu, nv);
    g.beta1 = GridD(nu, nv, 0.0);
    g.beta2 = GridD(nu, nv, 0.0);
    g.gamma1 = diff_v(sqmu, t.hv);
    g.gamma2 = diff_u(sqmu, t.hu);
    g.sqrtE = GridD(nu, nv);
    g.sqrtG = GridD(nu, nv);
    for (std::size_t i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
            g.nu2(i, j) = -t.nu(i, j);
            g.sqrtE(i, j) = 1.0 / sqmu(i, j);
            g.sqrtG(i, j) = g.sqrtE(i, j);
        }
    }
    return g;
}

SeparabilityReport separability_and_change(const GridD& E, const GridD& G, const GridD& mu,
                                           double hu, double hv, Domain domain, double u0,
                                           double v0, double tol) {
    require_mu_nonzero(mu);
    const std::size_t nu = E.nu(), nv = E.nv();
    SeparabilityReport rep;
    rep.phi.resize(nu);
    rep.psi.resize(nv);

    for (std::size_t i = 0; i < nu; ++i) {
        double s = 0;
        for (std::size_t j = 0; j < nv; ++j) s += E(i, j) * std::abs(mu(i, j));
        rep.phi[i] = s / static_cast<double>(nv);
    }
    for (std::size_t j = 0; j < nv; ++j) {
        double s = 0;
        for (std::size_t i = 0; i < nu; ++i) s += -G(i, j) * std::abs(mu(i, j));
        rep.psi[j] = s / static_cast<double>(nu);
    }
    for (double p : rep.phi)
        if (!(p > 0)) throw GeomError(ErrorCode::NonPositive, "phi(u) must be positive");
    for (double p : rep.psi)
        if (!(p > 0)) throw GeomError(ErrorCode::NonPositive, "psi(v) must be positive");

    double phi_scale = 0, psi_scale = 0;
    for (double p : rep.phi) phi_scale = std::max(phi_scale, std::abs(p));
    for (double p : rep.psi) psi_scale = std::max(psi_scale, std::abs(p));
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t j = 0; j < nv; ++j) {
            rep.phi_residual = std::max(
                rep.phi_residual, std::abs(E(i, j) * std::abs(mu(i, j)) - rep.phi[i]) / phi_scale);
            rep.psi_residual = std::max(
                rep.psi_residual,
                std::abs(-G(i, j) * std::abs(mu(i, j)) - rep.psi[j]) / psi_scale);
        }
    if (rep.phi_residual > tol || rep.psi_residual > tol) {
        std::ostringstream msg;
        msg << "cross-variation residuals (" << rep.phi_residual << ", " << rep.psi_residual
            << ") exceed tolerance " << tol;
        throw GeomError(ErrorCode::NotSeparable, msg.str());
    }

    // ubar by cumulative trapezoid of sqrt(phi) from the first node, then
    // shifted so ubar = 0 at u0 (linear interpolation of the table).
    auto cumulative = [](const std::vector<double>& f, double h) {
        std::vector<double> F(f.size(), 0.0);
        for (std::size_t i = 1; i < f.size(); ++i)
            F[i] = F[i - 1] + 0.5 * h * (std::sqrt(f[i - 1]) + std::sqrt(f[i]));
        return F;
    };
    rep.ubar = cumulative(rep.phi, hu);
    rep.vbar = cumulative(rep.psi, hv);
    auto shift_to = [](std::vector<double>& F, double x0, double xmin, double h) {
        const double f = (x0 - xmin) / h;
        const long i = std::clamp(static_cast<long>(std::floor(f)), 0L,
                                  static_cast<long>(F.size()) - 2);
        const double a = f - static_cast<double>(i);
        const double at = F[i] * (1 - a) + F[i + 1] * a;
        for (double& x : F) x -= at;
    };
    shift_to(rep.ubar, u0, domain.umin, hu);
    shift_to(rep.vbar, v0, domain.vmin, hv);
    return rep;
}

namespace {

/// Inverse of a strictly increasing node table by linear interpolation:
/// returns fractional index i + a with table[i] <= x <= table[i+1].
double inverse_index(const std::vector<double>& table, double x) {
    const auto it = std::upper_bound(table.begin(), table.end(), x);
    long i = std::clamp(static_cast<long>(it - table.begin()) - 1, 0L,
                        static_cast<long>(table.size()) - 2);
    return static_cast<double>(i) + (x - table[i]) / (table[i + 1] - table[i]);
}

double sample1d(const std::vector<double>& f, double idx) {
    const long i = std::clamp(static_cast<long>(std::floor(idx)), 0L,
                              static_cast<long>(f.size()) - 2);
    const double a = idx - static_cast<double>(i);
    return f[i] * (1 - a) + f[i + 1] * a;
}

double sample2d(const GridD& g, double fi, double fj) {
    const long i = std::clamp(static_cast<long>(std::floor(fi)), 0L,
                              static_cast<long>(g.nu()) - 2);
    const long j = std::clamp(static_cast<long>(std::floor(fj)), 0L,
                              static_cast<long>(g.nv()) - 2);
    const double a = fi - static_cast<double>(i), b = fj - static_cast<double>(j);
    return g(i, j) * (1 - a) * (1 - b) + g(i + 1, j) * a * (1 - b) + g(i, j + 1) * (1 - a) * b +
           g(i + 1, j + 1) * a * b;
}

}  // namespace

CanonicalizeResult apply_canonical_change(const PnmcvGrid& grid, const SeparabilityReport& rep) {
    const std::size_t nu = grid.lambda.nu(), nv = grid.lambda.nv();
    CanonicalizeResult out;
    out.triple.eps = grid.eps;
    out.triple.domain =
        Domain{rep.ubar.front(), rep.ubar.back(), rep.vbar.front(), rep.vbar.back()};
    out.triple.hu = (rep.ubar.back() - rep.ubar.front()) / static_cast<double>(nu - 1);
    out.triple.hv = (rep.vbar.back() - rep.vbar.front()) / static_cast<double>(nv - 1);
    out.triple.lambda = GridD(nu, nv);
    out.triple.mu = GridD(nu, nv);
    out.triple.nu = GridD(nu, nv);
    out.E_new = GridD(nu, nv);
    out.G_new = GridD(nu, nv);

    for (std::size_t i = 0; i < nu; ++i) {
        const double ub = out.triple.domain.umin + static_cast<double>(i) * out.triple.hu;
        const double fi = inverse_index(rep.ubar, ub);
        for (std::size_t j = 0; j < nv; ++j) {
            const double vb = out.triple.domain.vmin + static_cast<double>(j) * out.triple.hv;
            const double fj = inverse_index(rep.vbar, vb);
            out.triple.lambda(i, j) = sample2d(grid.lambda, fi, fj);
            out.triple.mu(i, j) = sample2d(grid.mu, fi, fj);
            out.triple.nu(i, j) = sample2d(grid.nu, fi, fj);
            // First-form coefficients transform by the inverse slope squared:
            // E_new = E / phi(u), G_new = G / psi(v).
            out.E_new(i, j) = sample2d(grid.E, fi, fj) / sample1d(rep.phi, fi);
            out.G_new(i, j) = sample2d(grid.G, fi, fj) / sample1d(rep.psi, fj);
        }
    }
    return out;
}

}  // namespace lsurf
