#include <doctest.h>

#include <cmath>
#include <random>

#include "lsurf/errors.hpp"
#include "lsurf/geoframe.hpp"
#include "lsurf/invariants.hpp"
#include "lsurf/surface.hpp"

using namespace lsurf;

namespace {

InvariantReport report_at(const std::string& name, const ParamMap& p, double u, double v) {
    const SurfaceSpec s = catalog_surface(name, p);
    return second_order_invariants(fundamental_data(s.jet(u, v)));
}

}  // namespace

TEST_CASE("golden invariants: graphp(c=2) at origin") {
    const auto r = report_at("graphp", {{"c", 2}}, 0, 0);
    CHECK(r.L == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(r.M == doctest::Approx(0.0));
    CHECK(r.N == doctest::Approx(-4.0).epsilon(1e-12));
    CHECK(r.k == doctest::Approx(-16.0).epsilon(1e-12));
    CHECK(r.kappa == doctest::Approx(0.0));
    CHECK(r.K == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(r.D == doctest::Approx(64.0).epsilon(1e-12));
    CHECK((r.H - Vec4{0, 1, 0, 0}).max_abs() < 1e-12);
    CHECK(r.H_causal == Causal::Spacelike);
    CHECK(r.point_class == PointClass::GeneralSpacelikeH);
    CHECK(r.sign_kappa2_minus_k == 1);
}

TEST_CASE("saddle origin is flat") {
    const auto r = report_at("saddle", {}, 0, 0);
    CHECK(r.L == doctest::Approx(0.0));
    CHECK(r.M == doctest::Approx(0.0));
    CHECK(r.N == doctest::Approx(0.0));
    CHECK(r.point_class == PointClass::Flat);
}

TEST_CASE("graph2 at origin") {
    const auto r = report_at("graph2", {}, 0, 0);
    CHECK(r.L == doctest::Approx(0.0));
    CHECK(r.M == doctest::Approx(2.0));
    CHECK(r.N == doctest::Approx(0.0));
    CHECK(r.k == doctest::Approx(4.0));
    CHECK(r.kappa == doctest::Approx(0.0));
    CHECK(r.sign_kappa2_minus_k == -1);
}

TEST_CASE("invariant report internal consistency") {
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> d(-0.3, 0.3);
    const SurfaceSpec s = catalog_surface("graphk", {{"alpha", 1}, {"beta", 2}, {"c", 1}});
    for (int t = 0; t < 40; ++t) {
        const FundamentalData fd = fundamental_data(s.jet(d(rng), d(rng)));
        const auto r = second_order_invariants(fd);
        const double den = fd.ff.E * fd.ff.G - fd.ff.F * fd.ff.F;
        CHECK(r.k == doctest::Approx((r.L * r.N - r.M * r.M) / den).epsilon(1e-12));
        CHECK(r.kappa ==
              doctest::Approx((fd.ff.E * r.N + fd.ff.G * r.L - 2 * fd.ff.F * r.M) / (2 * den))
                  .epsilon(1e-12));
        CHECK(r.D == doctest::Approx(4 * den * den * (r.kappa * r.kappa - r.k)).epsilon(1e-10));
        // k = det gamma, kappa = -tr(gamma)/2
        CHECK(r.gamma.determinant() == doctest::Approx(r.k).epsilon(1e-10));
        CHECK(-0.5 * r.gamma.trace() == doctest::Approx(r.kappa).epsilon(1e-10));
    }
}

TEST_CASE("shape operators: graphp(c=2) at origin") {
    const FundamentalData fd = fundamental_data(catalog_surface("graphp", {{"c", 2}}).jet(0, 0));
    const auto [A1, A2] = shape_operators(fd);
    CHECK((A1 - Eigen::Matrix2d::Identity()).cwiseAbs().maxCoeff() < 1e-12);
    // A2 x = 2 y, A2 y = -2 x
    CHECK(A2(0, 0) == doctest::Approx(0.0));
    CHECK(A2(1, 0) == doctest::Approx(2.0));
    CHECK(A2(0, 1) == doctest::Approx(-2.0));
    CHECK(normal_connection_curvature(A1, A2) == doctest::Approx(0.0));
}

TEST_CASE("shape operators: plane vanishes, F != 0 rejected") {
    const FundamentalData fd = fundamental_data(catalog_surface("plane").jet(0.2, 0.3));
    const auto [A1, A2] = shape_operators(fd);
    CHECK(A1.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
    CHECK(A2.cwiseAbs().maxCoeff() == doctest::Approx(0.0));

    const FundamentalData off =
        fundamental_data(catalog_surface("graphp", {{"c", 2}}).jet(0.1, 0.1));
    CHECK_THROWS_AS(shape_operators(off), GeomError);
}

TEST_CASE("shape operator pairing identity <sigma(x,y),xi> = <A_xi x, y>") {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> d(-0.3, 0.3);
    const SurfaceSpec s = catalog_surface("graphk", {{"alpha", 1}, {"beta", 2}, {"c", 1}});
    for (int t = 0; t < 25; ++t) {
        // F = 0 gauge points: u = 0 axis
        const FundamentalData fd = fundamental_data(s.jet(0.0, d(rng)));
        const auto [A1, A2] = shape_operators(fd);
        const double E = fd.ff.E, G = fd.ff.G;
        const double lx = 1 / std::sqrt(E), my = 1 / std::sqrt(-G);
        const Vec4 sxy = sigma(fd.c, fd.n1, fd.n2, lx, 0, 0, my);
        // <A1 x, y> = (y-coefficient of A1 x) <y,y>
        CHECK(inner(sxy, fd.n1) == doctest::Approx(-A1(1, 0)).epsilon(1e-10));
        CHECK(inner(sxy, fd.n2) == doctest::Approx(-A2(1, 0)).epsilon(1e-10));
    }
}

TEST_CASE("commutator equals kappa at F = 0 points") {
    std::mt19937 rng(29);
    std::uniform_real_distribution<double> d(-0.3, 0.3);
    std::uniform_real_distribution<double> dc(0.6, 1.2);
    for (int t = 0; t < 50; ++t) {
        FundamentalData fd;
        switch (t % 3) {
            case 0:
                fd = fundamental_data(
                    catalog_surface("graphk", {{"alpha", 1}, {"beta", 2}, {"c", 1}})
                        .jet(0.0, d(rng)));
                break;
            case 1:
                fd = fundamental_data(catalog_surface("grapht", {}).jet(d(rng), 0.0));
                break;
            default:
                fd = fundamental_data(catalog_surface("chen-minimal").jet(dc(rng), dc(rng)));
        }
        const auto rep = second_order_invariants(fd);
        const auto [A1, A2] = shape_operators(fd);
        CHECK(normal_connection_curvature(A1, A2) == doctest::Approx(rep.kappa).epsilon(1e-9));
    }
}

TEST_CASE("tangent structures at graphp(c=2) origin") {
    const FundamentalData fd = fundamental_data(catalog_surface("graphp", {{"c", 2}}).jet(0, 0));
    const auto rep = second_order_invariants(fd);
    const auto ts = tangent_structures(fd, rep);
    REQUIRE(ts.principal.size() == 2);
    // coordinate axes
    for (const auto& dir : ts.principal)
        CHECK(std::min(std::abs(dir.la), std::abs(dir.mu)) == doctest::Approx(0.0));
    CHECK(ts.asymptotic.empty());  // -4 la^2 - 4 mu^2 = 0 has no real solutions
    CHECK(conjugate_residual(rep, {1, 1}, {1, -1}) == doctest::Approx(0.0));
    CHECK(conjugate_residual(rep, {1, 0}, {0, 1}) == doctest::Approx(0.0));  // M = 0
    CHECK(conjugate_residual(rep, {1, 0}, {1, 0}) == doctest::Approx(-4.0));
}

TEST_CASE("tangent structures: indeterminate at flat points") {
    const FundamentalData fd = fundamental_data(catalog_surface("plane").jet(0, 0));
    const auto rep = second_order_invariants(fd);
    CHECK_THROWS_AS(tangent_structures(fd, rep), GeomError);
}

TEST_CASE("discriminant sign matches principal root count") {
    std::mt19937 rng(31);
    std::uniform_real_distribution<double> d(-0.35, 0.35);
    int seen_two = 0, seen_none = 0;
    for (int t = 0; t < 60; ++t) {
        const auto name = (t % 2 == 0) ? "graphp" : "graph2";
        const ParamMap p = (t % 2 == 0) ? ParamMap{{"c", 2.0}} : ParamMap{};
        const FundamentalData fd = fundamental_data(catalog_surface(name, p).jet(d(rng), d(rng)));
        const auto rep = second_order_invariants(fd);
        if (rep.point_class == PointClass::Flat || rep.point_class == PointClass::UmbilicalMinimal)
            continue;
        const auto ts = tangent_structures(fd, rep);
        if (rep.sign_kappa2_minus_k > 0) {
            CHECK(ts.principal.size() == 2);
            seen_two++;
        } else if (rep.sign_kappa2_minus_k < 0) {
            CHECK(ts.principal.empty());
            seen_none++;
        }
    }
    CHECK(seen_two > 10);
    CHECK(seen_none > 10);
}

TEST_CASE("classification of minimal surfaces") {
    // linear-beta Chen surface: sigma-image is 1-dimensional, flat type, H = 0
    const auto r = report_at("chen-minimal", {}, M_PI / 2, 0.0);
    CHECK(r.point_class == PointClass::Flat);
    CHECK(r.H.max_abs() < 1e-12);

    // curved-beta minimal surface: umbilical-minimal away from 2u = k pi
    const auto r2 = report_at("chen-minimal2", {}, 0.4 * M_PI, 0.1);
    CHECK(r2.point_class == PointClass::UmbilicalMinimal);
    CHECK(std::max(std::abs(r2.L), std::abs(r2.N)) > 0.1);  // genuinely non-flat

    // numeric jets carry O(h^2) noise, so classification gets a matching tol
    const SurfaceSpec chen_num = catalog_surface("chen-minimal2").as_numeric(1e-4);
    const FundamentalData fdn = fundamental_data(chen_num.jet(0.4 * M_PI, 0.1));
    const auto rn = second_order_invariants(fdn, 1e-7);
    CHECK(rn.H.max_abs() < 1e-8);
    CHECK(rn.point_class == PointClass::UmbilicalMinimal);
}

TEST_CASE("quasi-minimal classification") {
    // sigma(zu,zu) lightlike, sigma(zu,zv) spacelike: non-flat with null H
    SurfaceJet j;
    j.z = {0, 0, 0, 0};
    j.zu = {1, 0, 0, 0};
    j.zv = {0, 0, 1, 0};
    j.zuu = {0, 1, 0, 1};
    j.zuv = {0, 1, 0, 0};
    j.zvv = {0, 0, 0, 0};
    const auto r = second_order_invariants(fundamental_data(j));
    CHECK(r.H_causal == Causal::Lightlike);
    CHECK(r.H.max_abs() > 0.1);
    CHECK(r.point_class == PointClass::QuasiMinimal);
}

TEST_CASE("allied mean curvature") {
    GeometricFunctions gf;
    gf.nu1 = 3;
    gf.nu2 = -3;
    gf.lambda = 4;
    gf.mu = 5;
    gf.eps = 1;
    gf.frame = standard_geometric_frame(1);
    const Vec4 a = allied_mean_curvature(gf);
    CHECK(a.euclid_norm() == doctest::Approx(60.0));
    CHECK(std::abs(inner(a, gf.frame.e[3])) == doctest::Approx(60.0));  // along l

    gf.lambda = 0;
    CHECK(allied_mean_curvature(gf).max_abs() == doctest::Approx(0.0));

    gf.nu2 = 3;  // nu1 == nu2: not general type
    gf.lambda = 4;
    CHECK_THROWS_AS(allied_mean_curvature(gf), GeomError);
}

TEST_CASE("graphp origin is a non-trivial Chen point (lambda = 0, a(H) = 0)") {
    const SurfaceSpec s = catalog_surface("graphp", {{"c", 2}});
    const GeometricFunctions gf = geometric_functions_at(s, 0, 0);
    CHECK(gf.lambda == doctest::Approx(0.0));
    CHECK(allied_mean_curvature(gf).max_abs() < 1e-12);
}

TEST_CASE("normal-frame independence of L, M, N") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> dth(-2, 2);
    std::uniform_real_distribution<double> d(-0.3, 0.3);
    const SurfaceSpec s = catalog_surface("graphp", {{"c", 2}});
    for (int t = 0; t < 30; ++t) {
        const SurfaceJet j = s.jet(d(rng), d(rng));
        const FundamentalData fd = fundamental_data(j);
        const auto rep = second_order_invariants(fd);
        const double th = dth(rng);
        const Vec4 n1t = fd.n1 * std::cosh(th) - fd.n2 * std::sinh(th);
        const Vec4 n2t = fd.n1 * (-std::sinh(th)) + fd.n2 * std::cosh(th);
        FundamentalData fd2 = fd;
        fd2.n1 = n1t;
        fd2.n2 = n2t;
        fd2.c = decompose_second_derivatives(j, n1t, n2t);
        const auto rep2 = second_order_invariants(fd2);
        const double scale = std::max(1.0, std::abs(rep.L));
        CHECK(std::abs(rep2.L - rep.L) < 1e-10 * scale);
        CHECK(std::abs(rep2.M - rep.M) < 1e-10 * scale);
        CHECK(std::abs(rep2.N - rep.N) < 1e-10 * scale);
    }
}

namespace {

SurfaceJet reparameterize(const SurfaceJet& j, double a, double b, double c, double d) {
    // (u,v) = (a ub + b vb, c ub + d vb): constant-Jacobian change
    SurfaceJet out;
    out.z = j.z;
    out.zu = j.zu * a + j.zv * c;
    out.zv = j.zu * b + j.zv * d;
    out.zuu = j.zuu * (a * a) + j.zuv * (2 * a * c) + j.zvv * (c * c);
    out.zuv = j.zuu * (a * b) + j.zuv * (a * d + b * c) + j.zvv * (c * d);
    out.zvv = j.zuu * (b * b) + j.zuv * (2 * b * d) + j.zvv * (d * d);
    return out;
}

}  // namespace

TEST_CASE("reparametrization law for L, M, N and invariance of k, kappa") {
    std::mt19937 rng(41);
    std::uniform_real_distribution<double> dd(-0.25, 0.25);
    std::uniform_real_distribution<double> dj(-1.2, 1.2);
    const SurfaceSpec s = catalog_surface("graphk", {{"alpha", 1}, {"beta", 2}, {"c", 1}});
    int checked = 0;
    for (int t = 0; t < 400 && checked < 40; ++t) {
        const SurfaceJet j = s.jet(dd(rng), dd(rng));
        const FundamentalData fd = fundamental_data(j);
        const auto rep = second_order_invariants(fd);
        const double a = dj(rng), b = dj(rng), c = dj(rng), d = dj(rng);
        const double J = a * d - b * c;
        if (std::abs(J) < 0.2) continue;
        const SurfaceJet jr = reparameterize(j, a, b, c, d);

        // Law with the normal frame held fixed: Lbar = sign(J)(a^2 L + 2ac M + c^2 N)
        const SecondOrderCoeffs cr = decompose_second_derivatives(jr, fd.n1, fd.n2);
        const double D1 = cr.c1[0] * cr.c2[1] - cr.c2[0] * cr.c1[1];
        const double D2 = cr.c1[0] * cr.c2[2] - cr.c2[0] * cr.c1[2];
        const double D3 = cr.c1[1] * cr.c2[2] - cr.c2[1] * cr.c1[2];
        const FirstForm ffr = first_form(jr);
        const double Lb = 2 * D1 / ffr.W, Mb = D2 / ffr.W, Nb = 2 * D3 / ffr.W;
        const double eps = J > 0 ? 1.0 : -1.0;
        const double scale = std::max({1.0, std::abs(Lb), std::abs(Nb)});
        CHECK(std::abs(Lb - eps * (a * a * rep.L + 2 * a * c * rep.M + c * c * rep.N)) <
              1e-9 * scale);
        CHECK(std::abs(Mb - eps * (a * b * rep.L + (a * d + b * c) * rep.M + c * d * rep.N)) <
              1e-9 * scale);
        CHECK(std::abs(Nb - eps * (b * b * rep.L + 2 * b * d * rep.M + d * d * rep.N)) <
              1e-9 * scale);

        // Full-pipeline invariance of k, kappa, K (orientation-following
        // normal frame), where the new chart keeps E > 0, G < 0.
        if (ffr.lorentz_ok) {
            const auto rep2 = second_order_invariants(fundamental_data(jr));
            CHECK(rep2.k == doctest::Approx(rep.k).epsilon(1e-9));
            CHECK(rep2.kappa == doctest::Approx(rep.kappa).epsilon(1e-9));
            CHECK(rep2.K == doctest::Approx(rep.K).epsilon(1e-9));
            // gamma is the same endomorphism: gamma P = P gamma_bar
            Eigen::Matrix2d P;
            P << a, b, c, d;
            CHECK((rep.gamma * P - P * rep2.gamma).cwiseAbs().maxCoeff() < 1e-9);
            checked++;
        }
    }
    CHECK(checked >= 40);
}
