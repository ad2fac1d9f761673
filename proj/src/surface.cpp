#include "lsurf/surface.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <complex>
#include <sstream>
#include <vector>

#include "lsurf/errors.hpp"

namespace lsurf {

SurfaceSpec SurfaceSpec::analytic(JetFn jet, Domain domain, std::string name) {
    SurfaceSpec s;
    s.analytic_ = true;
    s.jet_ = std::move(jet);
    s.domain_ = domain;
    s.name_ = std::move(name);
    return s;
}

SurfaceSpec SurfaceSpec::numeric(PosFn z, Domain domain, double h, std::string name) {
    if (h <= 0) throw GeomError(ErrorCode::ConfigError, "numeric surface needs h > 0");
    SurfaceSpec s;
    s.analytic_ = false;
    s.pos_ = std::move(z);
    s.domain_ = domain;
    s.h_ = h;
    s.name_ = std::move(name);
    return s;
}

SurfaceSpec SurfaceSpec::as_numeric(double h) const {
    if (!analytic_) {
        SurfaceSpec s = *this;
        s.h_ = h;
        return s;
    }
    JetFn jf = jet_;
    return numeric([jf](double u, double v) { return jf(u, v).z; }, domain_, h,
                   name_.empty() ? "" : name_ + "-numeric");
}

Vec4 SurfaceSpec::position(double u, double v) const {
    return analytic_ ? jet_(u, v).z : pos_(u, v);
}

SurfaceJet SurfaceSpec::jet(double u, double v) const {
    const double margin = analytic_ ? 0.0 : h_;
    if (!domain_.contains(u, v, 0.0) ||
        (!analytic_ && !domain_.contains(u, v, margin))) {
        std::ostringstream msg;
        msg << "(" << u << ", " << v << ") outside domain ["
            << domain_.umin << ", " << domain_.umax << "] x ["
            << domain_.vmin << ", " << domain_.vmax << "]"
            << (analytic_ ? "" : " (with FD margin)");
        throw GeomError(ErrorCode::DomainError, msg.str());
    }
    if (analytic_) return jet_(u, v);

    // Second-order central differences; one mixed stencil (symmetry assumed).
    const double h = h_;
    SurfaceJet j;
    const Vec4 c = pos_(u, v);
    const Vec4 up = pos_(u + h, v), um = pos_(u - h, v);
    const Vec4 vp = pos_(u, v + h), vm = pos_(u, v - h);
    const Vec4 pp = pos_(u + h, v + h), pm = pos_(u + h, v - h);
    const Vec4 mp = pos_(u - h, v + h), mm = pos_(u - h, v - h);
    j.z = c;
    j.zu = (up - um) / (2 * h);
    j.zv = (vp - vm) / (2 * h);
    j.zuu = (up - 2 * c + um) / (h * h);
    j.zvv = (vp - 2 * c + vm) / (h * h);
    j.zuv = (pp - pm - mp + mm) / (4 * h * h);
    return j;
}

SurfaceJet evaluate_jet(const SurfaceSpec& spec, double u, double v) { return spec.jet(u, v); }

namespace {

double param(const ParamMap& p, const std::string& key, double fallback) {
    auto it = p.find(key);
    return it == p.end() ? fallback : it->second;
}

SurfaceJet graphp_jet(double c, double u, double v) {
    SurfaceJet j;
    j.z = {u, (u * u - v * v) / 2, v, c * u * v};
    j.zu = {1, u, 0, c * v};
    j.zv = {0, -v, 1, c * u};
    j.zuu = {0, 1, 0, 0};
    j.zuv = {0, 0, 0, c};
    j.zvv = {0, -1, 0, 0};
    return j;
}

// graphp reparameterized by its principal net. The net in the (u,v) parameter
// plane is the level-curve family of f(w) = ∫ sqrt(w^2 + a) dw, w = u + iv,
// a = 2/(1+c^2); the chart map is w = f^{-1}(s + it), inverted by Newton.
struct GraphPPrincipal {
    double c, a;

    std::complex<double> f(std::complex<double> w) const {
        const std::complex<double> s = std::sqrt(w * w + a);
        return 0.5 * (w * s + a * std::log((w + s) / std::sqrt(a)));
    }
    std::complex<double> fp(std::complex<double> w) const { return std::sqrt(w * w + a); }

    std::complex<double> invert(std::complex<double> zeta) const {
        std::complex<double> w = zeta / std::sqrt(a);
        for (int it = 0; it < 60; ++it) {
            const std::complex<double> dw = (f(w) - zeta) / fp(w);
            w -= dw;
            if (std::abs(dw) < 1e-16) break;
        }
        return w;
    }

    SurfaceJet operator()(double s, double t) const {
        const std::complex<double> w = invert({s, t});
        const double u = w.real(), v = w.imag();
        // Inverse-map derivatives: g' = 1/f'(w), g'' = -f''(w) g'^3.
        const std::complex<double> g1 = 1.0 / fp(w);
        const std::complex<double> g2 = -(w / std::sqrt(w * w + a)) * g1 * g1 * g1;
        const double us = g1.real(), vs = g1.imag();
        const double ut = -g1.imag(), vt = g1.real();
        const double uss = g2.real(), vss = g2.imag();
        const double ust = -g2.imag(), vst = g2.real();
        const double utt = -g2.real(), vtt = -g2.imag();

        const SurfaceJet base = graphp_jet(c, u, v);
        SurfaceJet j;
        j.z = base.z;
        j.zu = base.zu * us + base.zv * vs;
        j.zv = base.zu * ut + base.zv * vt;
        j.zuu = base.zuu * (us * us) + base.zuv * (2 * us * vs) + base.zvv * (vs * vs) +
                base.zu * uss + base.zv * vss;
        j.zuv = base.zuu * (us * ut) + base.zuv * (us * vt + ut * vs) + base.zvv * (vs * vt) +
                base.zu * ust + base.zv * vst;
        j.zvv = base.zuu * (ut * ut) + base.zuv * (2 * ut * vt) + base.zvv * (vt * vt) +
                base.zu * utt + base.zv * vtt;
        return j;
    }
};

}  // namespace

std::vector<std::string> catalog_names() {
    return {"plane", "saddle", "graph2", "graphp", "graphk", "grapht",
            "graphp-principal", "chen-minimal", "chen-minimal2"};
}

SurfaceSpec catalog_surface(const std::string& name_in, const ParamMap& params) {
    std::string name(name_in.size(), '\0');
    std::transform(name_in.begin(), name_in.end(), name.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (name == "plane") {
        return SurfaceSpec::analytic(
            [](double u, double v) {
                SurfaceJet j;
                j.z = {u, 0, v, 0};
                j.zu = {1, 0, 0, 0};
                j.zv = {0, 0, 1, 0};
                return j;
            },
            Domain{-10, 10, -10, 10}, "plane");
    }
    if (name == "saddle") {
        return SurfaceSpec::analytic(
            [](double u, double v) {
                SurfaceJet j;
                j.z = {u, 0, v, u * v};
                j.zu = {1, 0, 0, v};
                j.zv = {0, 0, 1, u};
                j.zuv = {0, 0, 0, 1};
                return j;
            },
            Domain{-0.9, 0.9, -0.9, 0.9}, "saddle");
    }
    if (name == "graph2") {
        return SurfaceSpec::analytic(
            [](double u, double v) {
                SurfaceJet j;
                j.z = {u, (u * u + v * v) / 2, v, (u * u - v * v) / 2};
                j.zu = {1, u, 0, u};
                j.zv = {0, v, 1, -v};
                j.zuu = {0, 1, 0, 1};
                j.zvv = {0, 1, 0, -1};
                return j;
            },
            Domain{-0.45, 0.45, -0.45, 0.45}, "graph2");
    }
    if (name == "graphp") {
        const double c = param(params, "c", 2.0);
        return SurfaceSpec::analytic(
            [c](double u, double v) { return graphp_jet(c, u, v); },
            Domain{-0.4, 0.4, -0.4, 0.4}, "graphp");
    }
    if (name == "graphk") {
        const double al = param(params, "alpha", 1.0);
        const double be = param(params, "beta", 2.0);
        const double c = param(params, "c", 1.0);
        return SurfaceSpec::analytic(
            [al, be, c](double u, double v) {
                SurfaceJet j;
                j.z = {u, (al * u * u - be * v * v) / 2, v, c * u * v};
                j.zu = {1, al * u, 0, c * v};
                j.zv = {0, -be * v, 1, c * u};
                j.zuu = {0, al, 0, 0};
                j.zuv = {0, 0, 0, c};
                j.zvv = {0, -be, 0, 0};
                return j;
            },
            Domain{-0.4, 0.4, -0.4, 0.4}, "graphk");
    }
    if (name == "grapht") {
        // Timelike mean curvature vector at the origin (H along e4).
        const double al = param(params, "alpha", 1.0);
        const double be = param(params, "beta", 2.0);
        const double c = param(params, "c", 1.0);
        return SurfaceSpec::analytic(
            [al, be, c](double u, double v) {
                SurfaceJet j;
                j.z = {u, c * u * v, v, (al * u * u - be * v * v) / 2};
                j.zu = {1, c * v, 0, al * u};
                j.zv = {0, c * u, 1, -be * v};
                j.zuu = {0, 0, 0, al};
                j.zuv = {0, c, 0, 0};
                j.zvv = {0, 0, 0, -be};
                return j;
            },
            Domain{-0.4, 0.4, -0.4, 0.4}, "grapht");
    }
    if (name == "graphp-principal") {
        const double c = param(params, "c", 2.0);
        GraphPPrincipal g{c, 2.0 / (1.0 + c * c)};
        return SurfaceSpec::analytic(
            [g](double s, double t) { return g(s, t); },
            Domain{-0.2, 0.2, -0.2, 0.2}, "graphp-principal");
    }
    if (name == "chen-minimal") {
        // z = alpha(u+v) + beta(v-u) with null curves alpha(w) = (sin w, cos w, w, 0),
        // beta(w) = (0, w, 0, w). Lorentz condition needs sin(u+v) > 0.
        // beta is linear, so the second-fundamental image is one-dimensional:
        // every point is minimal and of flat type (L = M = N = 0).
        return SurfaceSpec::analytic(
            [](double u, double v) {
                const double w = u + v, r = v - u;
                const double cw = std::cos(w), sw = std::sin(w);
                const Vec4 a1{cw, -sw, 1, 0};   // alpha'
                const Vec4 a2{-sw, -cw, 0, 0};  // alpha''
                const Vec4 b1{0, 1, 0, 1};      // beta'
                SurfaceJet j;
                j.z = {sw, cw + r, w, r};
                j.zu = a1 - b1;
                j.zv = a1 + b1;
                j.zuu = a2;
                j.zuv = a2;
                j.zvv = a2;
                return j;
            },
            Domain{-3.0, 7.0, -3.0, 7.0}, "chen-minimal");
    }
    if (name == "chen-minimal2") {
        // Same construction with a curved second null curve
        // beta(w) = (sin w, cos w, 0, w): minimal with (L, M, N) != 0 away
        // from the lines 2u = k pi. Lorentz condition: cos(2u) < 0.
        return SurfaceSpec::analytic(
            [](double u, double v) {
                const double s = u + v, t = v - u;
                const Vec4 a1{std::cos(s), -std::sin(s), 1, 0};
                const Vec4 a2{-std::sin(s), -std::cos(s), 0, 0};
                const Vec4 b1{std::cos(t), -std::sin(t), 0, 1};
                const Vec4 b2{-std::sin(t), -std::cos(t), 0, 0};
                SurfaceJet j;
                j.z = {std::sin(s) + std::sin(t), std::cos(s) + std::cos(t), s, t};
                j.zu = a1 - b1;
                j.zv = a1 + b1;
                j.zuu = a2 + b2;
                j.zuv = a2 - b2;
                j.zvv = a2 + b2;
                return j;
            },
            Domain{0.26 * M_PI, 0.74 * M_PI, -2.0, 2.0}, "chen-minimal2");
    }
    throw GeomError(ErrorCode::ConfigError, "unknown catalog surface '" + name + "'");
}

}  // namespace lsurf
