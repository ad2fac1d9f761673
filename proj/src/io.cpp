#include "lsurf/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "lsurf/errors.hpp"

namespace lsurf::io {

namespace {

constexpr int kSchemaVersion = 1;

void check_schema(const json& j, const std::string& name) {
    if (!j.is_object() || j.value("schema", "") != name)
        throw GeomError(ErrorCode::IoError, "expected a '" + name + "' JSON artifact");
}

json domain_to_json(const Domain& d) {
    return json{{"umin", d.umin}, {"umax", d.umax}, {"vmin", d.vmin}, {"vmax", d.vmax}};
}

Domain domain_from_json(const json& j) {
    Domain d;
    d.umin = j.at("umin").get<double>();
    d.umax = j.at("umax").get<double>();
    d.vmin = j.at("vmin").get<double>();
    d.vmax = j.at("vmax").get<double>();
    return d;
}

}  // namespace

void write_file_atomic(const std::string& path, const std::string& text) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw GeomError(ErrorCode::IoError, "cannot open " + tmp.string());
        out << text;
        if (!out) throw GeomError(ErrorCode::IoError, "write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp);
        throw GeomError(ErrorCode::IoError, "rename to " + path + " failed: " + ec.message());
    }
}

json load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw GeomError(ErrorCode::IoError, "cannot open " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw GeomError(ErrorCode::IoError, std::string("JSON parse error in ") + path + ": " +
                                                e.what());
    }
    return j;
}

void save_json(const std::string& path, json payload, const json& config) {
    payload["version"] = kSchemaVersion;
    if (!config.is_null()) payload["config"] = config;
    write_file_atomic(path, payload.dump(2) + "\n");
}

json to_json(const GridD& g) {
    json rows = json::array();
    for (std::size_t i = 0; i < g.nu(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < g.nv(); ++j) row.push_back(g(i, j));
        rows.push_back(std::move(row));
    }
    return rows;
}

GridD grid_from_json(const json& j) {
    if (!j.is_array() || j.empty() || !j[0].is_array())
        throw GeomError(ErrorCode::IoError, "grid field must be a 2-D array");
    const std::size_t nu = j.size(), nv = j[0].size();
    GridD g(nu, nv);
    for (std::size_t i = 0; i < nu; ++i) {
        if (j[i].size() != nv)
            throw GeomError(ErrorCode::IoError, "ragged grid rows in JSON");
        for (std::size_t jj = 0; jj < nv; ++jj) g(i, jj) = j[i][jj].get<double>();
    }
    return g;
}

json to_json(const GFGrid& g) {
    return json{{"schema", "lsurf/gfgrid"},
                {"domain", domain_to_json(g.domain)},
                {"hu", g.hu},
                {"hv", g.hv},
                {"eps", g.eps},
                {"gamma1", to_json(g.gamma1)},
                {"gamma2", to_json(g.gamma2)},
                {"nu1", to_json(g.nu1)},
                {"nu2", to_json(g.nu2)},
                {"lambda", to_json(g.lambda)},
                {"mu", to_json(g.mu)},
                {"beta1", to_json(g.beta1)},
                {"beta2", to_json(g.beta2)},
                {"sqrtE", to_json(g.sqrtE)},
                {"sqrtG", to_json(g.sqrtG)}};
}

GFGrid gfgrid_from_json(const json& j) {
    check_schema(j, "lsurf/gfgrid");
    GFGrid g;
    g.domain = domain_from_json(j.at("domain"));
    g.hu = j.at("hu").get<double>();
    g.hv = j.at("hv").get<double>();
    g.eps = j.at("eps").get<int>();
    g.gamma1 = grid_from_json(j.at("gamma1"));
    g.gamma2 = grid_from_json(j.at("gamma2"));
    g.nu1 = grid_from_json(j.at("nu1"));
    g.nu2 = grid_from_json(j.at("nu2"));
    g.lambda = grid_from_json(j.at("lambda"));
    g.mu = grid_from_json(j.at("mu"));
    g.beta1 = grid_from_json(j.at("beta1"));
    g.beta2 = grid_from_json(j.at("beta2"));
    g.sqrtE = grid_from_json(j.at("sqrtE"));
    g.sqrtG = grid_from_json(j.at("sqrtG"));
    if (g.eps != 1 && g.eps != -1)
        throw GeomError(ErrorCode::IoError, "eps must be +1 or -1");
    return g;
}

json to_json(const CanonicalTriple& t) {
    return json{{"schema", "lsurf/canonical-triple"},
                {"domain", domain_to_json(t.domain)},
                {"hu", t.hu},
                {"hv", t.hv},
                {"eps", t.eps},
                {"lambda", to_json(t.lambda)},
                {"mu", to_json(t.mu)},
                {"nu", to_json(t.nu)}};
}

CanonicalTriple canonical_triple_from_json(const json& j) {
    check_schema(j, "lsurf/canonical-triple");
    CanonicalTriple t;
    t.domain = domain_from_json(j.at("domain"));
    t.hu = j.at("hu").get<double>();
    t.hv = j.at("hv").get<double>();
    t.eps = j.at("eps").get<int>();
    t.lambda = grid_from_json(j.at("lambda"));
    t.mu = grid_from_json(j.at("mu"));
    t.nu = grid_from_json(j.at("nu"));
    return t;
}

json to_json(const PnmcvGrid& g) {
    return json{{"schema", "lsurf/pnmcv-grid"},
                {"domain", domain_to_json(g.domain)},
                {"hu", g.hu},
                {"hv", g.hv},
                {"eps", g.eps},
                {"E", to_json(g.E)},
                {"G", to_json(g.G)},
                {"lambda", to_json(g.lambda)},
                {"mu", to_json(g.mu)},
                {"nu", to_json(g.nu)}};
}

PnmcvGrid pnmcv_grid_from_json(const json& j) {
    check_schema(j, "lsurf/pnmcv-grid");
    PnmcvGrid g;
    g.domain = domain_from_json(j.at("domain"));
    g.hu = j.at("hu").get<double>();
    g.hv = j.at("hv").get<double>();
    g.eps = j.at("eps").get<int>();
    g.E = grid_from_json(j.at("E"));
    g.G = grid_from_json(j.at("G"));
    g.lambda = grid_from_json(j.at("lambda"));
    g.mu = grid_from_json(j.at("mu"));
    g.nu = grid_from_json(j.at("nu"));
    return g;
}

json to_json(const ReconstructedSurface& s, bool include_frames) {
    json z = json::array();
    for (std::size_t i = 0; i < s.z.nu(); ++i) {
        json row = json::array();
        for (std::size_t j = 0; j < s.z.nv(); ++j) {
            const Vec4& p = s.z(i, j);
            row.push_back(json::array({p.x1, p.x2, p.x3, p.x4}));
        }
        z.push_back(std::move(row));
    }
    json out{{"schema", "lsurf/surface"},
             {"domain", domain_to_json(s.domain)},
             {"hu", s.hu},
             {"hv", s.hv},
             {"eps", s.eps},
             {"z", std::move(z)},
             {"diagnostics",
              json{{"max_gram_drift", s.max_gram_drift},
                   {"path_discrepancy", s.path_discrepancy},
                   {"mixed_partial_residual", s.mixed_partial_residual},
                   {"max_renorm_correction", s.max_renorm_correction},
                   {"metric_formula_max_rel_dev_E", s.metric_check.max_rel_dev_E},
                   {"metric_formula_max_rel_dev_G", s.metric_check.max_rel_dev_G}}}};
    if (include_frames && !s.frames.empty()) {
        json fr = json::array();
        for (std::size_t i = 0; i < s.frames.nu(); ++i) {
            json row = json::array();
            for (std::size_t j = 0; j < s.frames.nv(); ++j) {
                json quad = json::array();
                for (const Vec4& e : s.frames(i, j).e)
                    quad.push_back(json::array({e.x1, e.x2, e.x3, e.x4}));
                row.push_back(std::move(quad));
            }
            fr.push_back(std::move(row));
        }
        out["frames"] = std::move(fr);
    }
    return out;
}

SurfaceGridData surface_grid_from_json(const json& j) {
    check_schema(j, "lsurf/surface");
    SurfaceGridData s;
    s.domain = domain_from_json(j.at("domain"));
    s.hu = j.at("hu").get<double>();
    s.hv = j.at("hv").get<double>();
    s.eps = j.value("eps", 1);
    const json& z = j.at("z");
    const std::size_t nu = z.size(), nv = z.empty() ? 0 : z[0].size();
    if (nu == 0 || nv == 0) throw GeomError(ErrorCode::IoError, "empty position grid");
    s.z = Grid2d<Vec4>(nu, nv);
    for (std::size_t i = 0; i < nu; ++i)
        for (std::size_t jj = 0; jj < nv; ++jj) {
            const json& p = z[i][jj];
            s.z(i, jj) = Vec4{p[0].get<double>(), p[1].get<double>(), p[2].get<double>(),
                              p[3].get<double>()};
        }
    return s;
}

json to_json(const SeparabilityReport& rep) {
    return json{{"schema", "lsurf/separability"},
                {"phi", rep.phi},
                {"psi", rep.psi},
                {"phi_residual", rep.phi_residual},
                {"psi_residual", rep.psi_residual},
                {"ubar", rep.ubar},
                {"vbar", rep.vbar}};
}

std::string format_g17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::string to_obj(const Grid2d<Vec4>& z, const std::array<int, 3>& axes) {
    std::string out;
    out.reserve(z.nu() * z.nv() * 48);
    out += "# lsurf surface grid export\n";
    for (std::size_t i = 0; i < z.nu(); ++i) {
        for (std::size_t j = 0; j < z.nv(); ++j) {
            const Vec4& p = z(i, j);
            out += "v " + format_g17(p[axes[0]]) + " " + format_g17(p[axes[1]]) + " " +
                   format_g17(p[axes[2]]) + "\n";
        }
    }
    const auto idx = [&](std::size_t i, std::size_t j) {
        return std::to_string(i * z.nv() + j + 1);
    };
    for (std::size_t i = 0; i + 1 < z.nu(); ++i) {
        for (std::size_t j = 0; j + 1 < z.nv(); ++j) {
            out += "f " + idx(i, j) + " " + idx(i + 1, j) + " " + idx(i + 1, j + 1) + "\n";
            out += "f " + idx(i, j) + " " + idx(i + 1, j + 1) + " " + idx(i, j + 1) + "\n";
        }
    }
    return out;
}

}  // namespace lsurf::io
