#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lsurf/errors.hpp"
#include "lsurf/io.hpp"

using namespace lsurf;

namespace {

std::filesystem::path temp_dir() {
    auto p = std::filesystem::temp_directory_path() / "lsurf-io-test";
    std::filesystem::create_directories(p);
    return p;
}

GFGrid sample_gfgrid() {
    GFGrid g;
    g.eps = -1;
    g.hu = 0.1;
    g.hv = 0.2;
    g.domain = Domain{0, 0.4, 1, 1.8};
    const std::size_t nu = 5, nv = 5;
    int k = 0;
    for (GridD* f : {&g.gamma1, &g.gamma2, &g.nu1, &g.nu2, &g.lambda, &g.mu, &g.beta1, &g.beta2,
                     &g.sqrtE, &g.sqrtG}) {
        *f = GridD(nu, nv);
        for (std::size_t i = 0; i < nu; ++i)
            for (std::size_t j = 0; j < nv; ++j)
                (*f)(i, j) = std::sin(static_cast<double>(k) + 0.37 * static_cast<double>(i) +
                                      0.11 * static_cast<double>(j));
        ++k;
    }
    return g;
}

}  // namespace

TEST_CASE("gfgrid JSON round trip preserves every value") {
    const GFGrid g = sample_gfgrid();
    const auto path = (temp_dir() / "g.json").string();
    io::save_json(path, io::to_json(g), io::json{{"note", "test"}});
    const io::json j = io::load_json(path);
    CHECK(j.at("version") == 1);
    CHECK(j.at("config").at("note") == "test");
    const GFGrid g2 = io::gfgrid_from_json(j);
    CHECK(g2.eps == g.eps);
    CHECK(g2.hu == g.hu);
    CHECK(g2.hv == g.hv);
    CHECK(g2.domain.vmax == g.domain.vmax);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j2 = 0; j2 < 5; ++j2) {
            CHECK(g2.mu(i, j2) == g.mu(i, j2));  // bitwise: doubles survive JSON
            CHECK(g2.sqrtG(i, j2) == g.sqrtG(i, j2));
        }
}

TEST_CASE("canonical triple and pnmcv grid JSON round trips") {
    CanonicalTriple t;
    t.eps = 1;
    t.hu = t.hv = 0.25;
    t.domain = Domain{0, 1, 0, 1};
    t.lambda = GridD(5, 5, 4.0);
    t.mu = GridD(5, 5, 5.0);
    t.nu = GridD(5, 5, 3.0);
    t.mu(2, 3) = 5.0000001;
    const auto path = (temp_dir() / "t.json").string();
    io::save_json(path, io::to_json(t));
    const CanonicalTriple t2 = io::canonical_triple_from_json(io::load_json(path));
    CHECK(t2.mu(2, 3) == t.mu(2, 3));
    CHECK(t2.lambda(1, 1) == 4.0);

    PnmcvGrid p;
    p.eps = 1;
    p.hu = p.hv = 0.5;
    p.domain = Domain{0, 2, 0, 2};
    p.E = GridD(5, 5, 0.2);
    p.G = GridD(5, 5, -0.2);
    p.lambda = GridD(5, 5, 1.0);
    p.mu = GridD(5, 5, 5.0);
    p.nu = GridD(5, 5, 3.0);
    const auto path2 = (temp_dir() / "p.json").string();
    io::save_json(path2, io::to_json(p));
    const PnmcvGrid p2 = io::pnmcv_grid_from_json(io::load_json(path2));
    CHECK(p2.G(4, 4) == -0.2);
}

TEST_CASE("wrong schema and malformed input are IoError") {
    const auto path = (temp_dir() / "w.json").string();
    io::save_json(path, io::json{{"schema", "lsurf/other"}});
    CHECK_THROWS_AS(io::gfgrid_from_json(io::load_json(path)), GeomError);

    const auto bad = (temp_dir() / "bad.json").string();
    std::ofstream(bad) << "{ not json";
    CHECK_THROWS_AS(io::load_json(bad), GeomError);
    CHECK_THROWS_AS(io::load_json((temp_dir() / "missing.json").string()), GeomError);
}

TEST_CASE("surface artifact round trip and OBJ export") {
    ReconstructedSurface s;
    s.eps = 1;
    s.hu = s.hv = 0.5;
    s.domain = Domain{0, 1, 0, 1};
    s.z = Grid2d<Vec4>(3, 3);
    s.frames = Grid2d<Frame4>(3, 3, standard_geometric_frame(1));
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            s.z(i, j) = Vec4{static_cast<double>(i), static_cast<double>(j), 0.5, -1.25};
    s.max_gram_drift = 1e-12;

    const auto path = (temp_dir() / "s.json").string();
    io::save_json(path, io::to_json(s));
    const auto back = io::surface_grid_from_json(io::load_json(path));
    CHECK(back.z.nu() == 3);
    CHECK((back.z(2, 1) - Vec4{2, 1, 0.5, -1.25}).max_abs() == 0.0);

    const std::string obj = io::to_obj(s.z, {0, 1, 3});
    CHECK(obj.find("v 0 0 -1.25") != std::string::npos);
    // 9 vertices, 8 triangles
    CHECK(std::count(obj.begin(), obj.end(), '\n') == 1 + 9 + 8);
}

TEST_CASE("atomic writes leave no partial file behind") {
    const auto dir = temp_dir() / "atomic";
    std::filesystem::remove_all(dir);
    const auto path = (dir / "x.json").string();
    io::write_file_atomic(path, "hello");
    CHECK(std::filesystem::exists(path));
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
    std::ifstream in(path);
    std::string content;
    std::getline(in, content);
    CHECK(content == "hello");
}

TEST_CASE("format_g17 is round-trip exact") {
    for (double x : {1.0 / 3, 0.1, 6.02214076e23, -2.2250738585072014e-308,
                     16.000000000000004}) {
        const std::string s = io::format_g17(x);
        CHECK(std::stod(s) == x);
    }
}
