// Command-line front end: invariant analysis, frame extraction, Bonnet
// reconstruction and PNMCV verification for Lorentz surface patches in E^4_2.

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "lsurf/bonnet.hpp"
#include "lsurf/errors.hpp"
#include "lsurf/geoframe.hpp"
#include "lsurf/invariants.hpp"
#include "lsurf/io.hpp"
#include "lsurf/pnmcv.hpp"
#include "lsurf/surface.hpp"

namespace {

using lsurf::io::json;

int exit_code_for(lsurf::ErrorCode c) {
    using EC = lsurf::ErrorCode;
    switch (c) {
        case EC::DomainError:
        case EC::FrameMismatch:
        case EC::GridTooSmall:
        case EC::InvalidMetric:
        case EC::ConfigError:
            return 2;
        case EC::IoError:
            return 4;
        default:
            return 3;  // numerical: degeneracy/integrability failures
    }
}

/// Applies LSURF_OUT_DIR to bare output file names.
std::string out_path(const std::string& name) {
    namespace fs = std::filesystem;
    if (name.empty() || fs::path(name).has_parent_path()) return name;
    const char* dir = std::getenv("LSURF_OUT_DIR");
    if (!dir || !*dir) return name;
    return (fs::path(dir) / name).string();
}

/// Config-file fallback: CLI flags win, then the config object, then the
/// built-in default.
template <typename T>
T pick(const std::optional<T>& cli, const json& cfg, const std::string& key, T fallback) {
    if (cli) return *cli;
    if (cfg.contains(key)) return cfg.at(key).get<T>();
    return fallback;
}

struct SurfaceArgs {
    std::optional<std::string> surface;
    std::vector<std::string> params;
    std::optional<std::string> domain;
    std::optional<int> res;
    std::optional<std::string> spec_file;
};

void add_surface_options(CLI::App* cmd, SurfaceArgs& a) {
    cmd->add_option("--surface", a.surface, "catalog surface name");
    cmd->add_option("--param", a.params, "surface parameter as name=value (repeatable)");
    cmd->add_option("--domain", a.domain, "patch as umin,umax,vmin,vmax");
    cmd->add_option("--res", a.res, "grid resolution per axis (>= 3)");
    cmd->add_option("--spec", a.spec_file, "surface selector JSON file");
}

std::vector<double> parse_csv_doubles(const std::string& s, std::size_t expect,
                                      const std::string& what) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        try {
            out.push_back(std::stod(tok));
        } catch (...) {
            throw lsurf::GeomError(lsurf::ErrorCode::ConfigError,
                                   what + ": cannot parse '" + tok + "'");
        }
    }
    if (out.size() != expect)
        throw lsurf::GeomError(lsurf::ErrorCode::ConfigError,
                               what + ": expected " + std::to_string(expect) + " values");
    return out;
}

struct ResolvedSurface {
    lsurf::SurfaceSpec spec;
    lsurf::Domain patch;
    std::size_t res;
    json echo;
};

ResolvedSurface resolve_surface(const SurfaceArgs& a, const json& cfg) {
    json spec_cfg = cfg;
    if (a.spec_file) {
        const json file = lsurf::io::load_json(*a.spec_file);
        for (auto it = file.begin(); it != file.end(); ++it) spec_cfg[it.key()] = it.value();
    }
    const std::string name = pick(a.surface, spec_cfg, "surface", std::string("graphp"));

    lsurf::ParamMap params;
    if (spec_cfg.contains("params"))
        for (auto it = spec_cfg["params"].begin(); it != spec_cfg["params"].end(); ++it)
            params[it.key()] = it.value().get<double>();
    for (const std::string& p : a.params) {
        const auto eq = p.find('=');
        if (eq == std::string::npos)
            throw lsurf::GeomError(lsurf::ErrorCode::ConfigError,
                                   "--param needs name=value, got '" + p + "'");
        params[p.substr(0, eq)] = std::stod(p.substr(eq + 1));
    }

    ResolvedSurface out{lsurf::catalog_surface(name, params), {}, 0, {}};
    out.patch = out.spec.domain();
    if (const std::string d = pick(a.domain, spec_cfg, "domain", std::string()); !d.empty()) {
        const auto v = parse_csv_doubles(d, 4, "--domain");
        out.patch = lsurf::Domain{v[0], v[1], v[2], v[3]};
    }
    const int res = pick(a.res, spec_cfg, "res", 21);
    if (res < 3)
        throw lsurf::GeomError(lsurf::ErrorCode::ConfigError, "--res must be at least 3");
    out.res = static_cast<std::size_t>(res);

    out.echo = json{{"surface", name}, {"res", res},
                    {"domain", {out.patch.umin, out.patch.umax, out.patch.vmin, out.patch.vmax}}};
    for (const auto& [k, v] : params) out.echo["params"][k] = v;
    return out;
}

lsurf::Frame4 initial_frame(const std::string& kind, int eps) {
    if (kind == "standard") return lsurf::standard_geometric_frame(eps);
    throw lsurf::GeomError(lsurf::ErrorCode::ConfigError,
                           "unknown --init '" + kind + "' (expected: standard)");
}

// ---------------------------------------------------------------------------

int run_analyze(const SurfaceArgs& sa, const json& cfg, const std::string& input,
                const std::string& json_out, const std::string& csv_out) {
    // Either a catalog surface sampled on a grid, or a stored position grid
    // analyzed through fourth-order FD jets (interior nodes only).
    lsurf::io::SurfaceGridData grid_data;
    std::size_t nu = 0, nv = 0;
    double hu = 0, hv = 0;
    lsurf::Domain patch;
    json echo;
    std::optional<lsurf::SurfaceSpec> spec;
    if (!input.empty()) {
        grid_data = lsurf::io::surface_grid_from_json(lsurf::io::load_json(input));
        nu = grid_data.z.nu();
        nv = grid_data.z.nv();
        hu = grid_data.hu;
        hv = grid_data.hv;
        patch = grid_data.domain;
        echo = json{{"input", input}};
    } else {
        const ResolvedSurface rs = resolve_surface(sa, cfg);
        spec = rs.spec;
        nu = nv = rs.res;
        patch = rs.patch;
        hu = (patch.umax - patch.umin) / static_cast<double>(nu - 1);
        hv = (patch.vmax - patch.vmin) / static_cast<double>(nv - 1);
        echo = rs.echo;
    }

    json records = json::array();
    std::ostringstream csv;
    csv << "u,v,E,F,G,L,M,N,k,kappa,K,D,Hx1,Hx2,Hx3,Hx4,H_causal,class\n";
    const auto g17 = lsurf::io::format_g17;

    for (std::size_t i = 0; i < nu; ++i) {
        for (std::size_t j = 0; j < nv; ++j) {
            const double u = patch.umin + static_cast<double>(i) * hu;
            const double v = patch.vmin + static_cast<double>(j) * hv;
            if (!input.empty() && (i < 2 || j < 2 || i + 2 >= nu || j + 2 >= nv))
                continue;  // stencil margin of the grid mode
            csv << g17(u) << "," << g17(v) << ",";
            try {
                const lsurf::SurfaceJet jet = input.empty()
                                                  ? spec->jet(u, v)
                                                  : lsurf::grid_jet(grid_data.z, i, j, hu, hv);
                const auto fd = lsurf::fundamental_data(jet);
                const auto rep = lsurf::second_order_invariants(fd);
                for (double x : {fd.ff.E, fd.ff.F, fd.ff.G, rep.L, rep.M, rep.N, rep.k, rep.kappa,
                                 rep.K, rep.D, rep.H.x1, rep.H.x2, rep.H.x3, rep.H.x4})
                    csv << g17(x) << ",";
                csv << lsurf::causal_name(rep.H_causal) << ","
                    << lsurf::point_class_name(rep.point_class) << "\n";
                records.push_back(json{{"u", u},
                                       {"v", v},
                                       {"E", fd.ff.E},
                                       {"F", fd.ff.F},
                                       {"G", fd.ff.G},
                                       {"L", rep.L},
                                       {"M", rep.M},
                                       {"N", rep.N},
                                       {"k", rep.k},
                                       {"kappa", rep.kappa},
                                       {"K", rep.K},
                                       {"D", rep.D},
                                       {"H", {rep.H.x1, rep.H.x2, rep.H.x3, rep.H.x4}},
                                       {"H_causal", lsurf::causal_name(rep.H_causal)},
                                       {"class", lsurf::point_class_name(rep.point_class)}});
            } catch (const lsurf::GeomError& e) {
                for (int c = 0; c < 14; ++c) csv << "nan,";
                csv << "error," << lsurf::error_code_name(e.code()) << "\n";
                records.push_back(json{{"u", u}, {"v", v},
                                       {"error", lsurf::error_code_name(e.code())}});
            }
        }
    }
    if (!csv_out.empty()) lsurf::io::write_file_atomic(out_path(csv_out), csv.str());
    if (!json_out.empty())
        lsurf::io::save_json(out_path(json_out),
                             json{{"schema", "lsurf/analysis"}, {"records", std::move(records)}},
                             echo);
    return 0;
}

int run_classify(const SurfaceArgs& sa, const json& cfg, const std::string& json_out) {
    const ResolvedSurface rs = resolve_surface(sa, cfg);
    const double hu = (rs.patch.umax - rs.patch.umin) / static_cast<double>(rs.res - 1);
    const double hv = (rs.patch.vmax - rs.patch.vmin) / static_cast<double>(rs.res - 1);

    std::map<std::string, std::size_t> counts;
    std::map<std::string, std::size_t> disc_sign;
    for (std::size_t i = 0; i < rs.res; ++i) {
        for (std::size_t j = 0; j < rs.res; ++j) {
            const double u = rs.patch.umin + static_cast<double>(i) * hu;
            const double v = rs.patch.vmin + static_cast<double>(j) * hv;
            try {
                const auto rep =
                    lsurf::second_order_invariants(lsurf::fundamental_data(rs.spec.jet(u, v)));
                counts[lsurf::point_class_name(rep.point_class)]++;
                disc_sign[rep.sign_kappa2_minus_k > 0   ? "+"
                          : rep.sign_kappa2_minus_k < 0 ? "-"
                                                        : "0"]++;
            } catch (const lsurf::GeomError& e) {
                counts[std::string("error:") + lsurf::error_code_name(e.code())]++;
            }
        }
    }
    std::cout << "point classes on " << rs.res << "x" << rs.res << " grid:\n";
    for (const auto& [name, n] : counts) std::cout << "  " << name << ": " << n << "\n";
    std::cout << "sign(kappa^2 - k):\n";
    for (const auto& [name, n] : disc_sign) std::cout << "  " << name << ": " << n << "\n";
    if (!json_out.empty())
        lsurf::io::save_json(out_path(json_out),
                             json{{"schema", "lsurf/classification"},
                                  {"classes", counts},
                                  {"sign_kappa2_minus_k", disc_sign}},
                             rs.echo);
    return 0;
}

int run_frame(const SurfaceArgs& sa, const json& cfg, std::optional<double> fd_step,
              const std::string& out) {
    const ResolvedSurface rs = resolve_surface(sa, cfg);
    const double h = pick(fd_step, cfg, "fd-step", lsurf::kFrameFdStep);
    const lsurf::GFGrid g = lsurf::extract_gf_grid(rs.spec, rs.patch, rs.res, rs.res, h);
    json echo = rs.echo;
    echo["fd-step"] = h;
    lsurf::io::save_json(out_path(out), lsurf::io::to_json(g), echo);
    return 0;
}

int run_reconstruct(const std::string& input, const std::string& init_kind,
                    const std::string& origin, const std::string& p0s, int substeps,
                    bool renormalize, double max_residual, const std::string& out,
                    const std::string& obj_out) {
    const lsurf::GFGrid grid = lsurf::io::gfgrid_from_json(lsurf::io::load_json(input));
    lsurf::ReconstructOptions opts;
    opts.substeps = substeps;
    opts.renormalize = renormalize;
    if (max_residual > 0) opts.integrability_threshold = max_residual;
    if (!origin.empty()) {
        const auto v = parse_csv_doubles(origin, 2, "--origin");
        opts.origin_u = v[0];
        opts.origin_v = v[1];
    }
    lsurf::Vec4 p0;
    if (!p0s.empty()) {
        const auto v = parse_csv_doubles(p0s, 4, "--p0");
        p0 = {v[0], v[1], v[2], v[3]};
    }
    const lsurf::Frame4 init = initial_frame(init_kind, grid.eps);
    const lsurf::ReconstructedSurface s = lsurf::reconstruct(grid, init, p0, opts);

    const json echo{{"input", input},          {"init", init_kind},
                    {"origin", origin},        {"p0", p0s},
                    {"substeps", substeps},    {"renormalize", renormalize},
                    {"max-residual", opts.integrability_threshold}};
    lsurf::io::save_json(out_path(out), lsurf::io::to_json(s), echo);
    if (!obj_out.empty())
        lsurf::io::write_file_atomic(out_path(obj_out), lsurf::io::to_obj(s.z));
    std::cout << "gram drift " << s.max_gram_drift << ", path discrepancy "
              << s.path_discrepancy << ", mixed-partial residual " << s.mixed_partial_residual
              << "\n";
    return 0;
}

int run_pnmcv_verify(const std::string& input, const std::string& out) {
    const lsurf::CanonicalTriple t =
        lsurf::io::canonical_triple_from_json(lsurf::io::load_json(input));
    const auto res = lsurf::natural_pde_residuals(t);
    const auto warn = lsurf::canonical_warnings(t);
    json stats = json::array();
    for (const auto& r : res) {
        double mx = lsurf::max_abs_valid(r);
        stats.push_back(mx);
    }
    const json payload{{"schema", "lsurf/pnmcv-residuals"},
                       {"max_abs", stats},
                       {"nu_constant_warning", warn.nu_constant},
                       {"nu_variation", warn.nu_variation},
                       {"r1", lsurf::io::to_json(res[0])},
                       {"r2", lsurf::io::to_json(res[1])},
                       {"r3", lsurf::io::to_json(res[2])}};
    lsurf::io::save_json(out_path(out), payload, json{{"input", input}});
    std::cout << "max residuals: " << stats.dump();
    if (warn.nu_constant) std::cout << "  (warning: nu constant, PMCV subclass)";
    std::cout << "\n";
    return 0;
}

int run_canonicalize(const std::string& input, double tol, const std::string& report_out,
                     const std::string& triple_out) {
    const lsurf::PnmcvGrid g = lsurf::io::pnmcv_grid_from_json(lsurf::io::load_json(input));
    const auto rep = lsurf::separability_and_change(g.E, g.G, g.mu, g.hu, g.hv, g.domain,
                                                    g.domain.umin, g.domain.vmin, tol);
    const auto result = lsurf::apply_canonical_change(g, rep);
    const json echo{{"input", input}, {"tol", tol}};
    lsurf::io::save_json(out_path(report_out), lsurf::io::to_json(rep), echo);
    json triple = lsurf::io::to_json(result.triple);
    triple["E_new"] = lsurf::io::to_json(result.E_new);
    triple["G_new"] = lsurf::io::to_json(result.G_new);
    lsurf::io::save_json(out_path(triple_out), triple, echo);
    std::cout << "separable: phi residual " << rep.phi_residual << ", psi residual "
              << rep.psi_residual << "\n";
    return 0;
}

int run_export(const std::string& input, const std::string& axes_s, const std::string& out) {
    const auto s = lsurf::io::surface_grid_from_json(lsurf::io::load_json(input));
    std::array<int, 3> axes{0, 1, 2};
    if (!axes_s.empty()) {
        const auto v = parse_csv_doubles(axes_s, 3, "--axes");
        for (int i = 0; i < 3; ++i) {
            axes[i] = static_cast<int>(v[i]);
            if (axes[i] < 0 || axes[i] > 3)
                throw lsurf::GeomError(lsurf::ErrorCode::ConfigError,
                                       "--axes entries must be 0..3");
        }
    }
    lsurf::io::write_file_atomic(out_path(out), lsurf::io::to_obj(s.z, axes));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lorentz surface toolkit for E^4_2"};
    app.require_subcommand(1);

    std::string config_file;
    app.add_option("--config", config_file, "JSON config file (flags take precedence)");

    SurfaceArgs sa;
    std::string json_out, csv_out, out, obj_out, report_out;
    std::string input, init_kind = "standard", origin, p0s, axes;
    std::optional<double> fd_step;
    int substeps = 2;
    bool renormalize = false;
    double tol = 1e-6, max_residual = 0;

    auto* analyze = app.add_subcommand("analyze", "grid of second-order invariants -> JSON + CSV");
    add_surface_options(analyze, sa);
    analyze->add_option("--input", input, "analyze a stored surface JSON instead of a catalog surface");
    analyze->add_option("--json", json_out, "JSON output path");
    analyze->add_option("--csv", csv_out, "CSV output path");

    auto* classify = app.add_subcommand("classify", "point-class summary for a patch");
    add_surface_options(classify, sa);
    classify->add_option("--json", json_out, "JSON output path");

    auto* frame = app.add_subcommand("frame", "geometric-function grid extraction -> JSON");
    add_surface_options(frame, sa);
    frame->add_option("--fd-step", fd_step, "frame-field FD step");
    frame->add_option("--out", out, "GFGrid JSON output")->required();

    auto* rec = app.add_subcommand("reconstruct", "GFGrid JSON -> surface JSON (+ OBJ)");
    rec->add_option("--input", input, "GFGrid JSON")->required();
    rec->add_option("--init", init_kind, "initial frame (standard)");
    rec->add_option("--origin", origin, "integration origin u,v");
    rec->add_option("--p0", p0s, "initial point x1,x2,x3,x4");
    rec->add_option("--substeps", substeps, "RK4 substeps per cell");
    rec->add_flag("--renormalize", renormalize, "re-pseudo-orthonormalize periodically");
    rec->add_option("--max-residual", max_residual, "integrability gate (0 = default)");
    rec->add_option("--out", out, "surface JSON output")->required();
    rec->add_option("--obj", obj_out, "OBJ output path");

    auto* pv = app.add_subcommand("pnmcv-verify", "canonical triple JSON -> PDE residuals");
    pv->add_option("--input", input, "CanonicalTriple JSON")->required();
    pv->add_option("--out", out, "residual statistics JSON")->required();

    auto* canon = app.add_subcommand("canonicalize", "PNMCV grid -> separability + canonical triple");
    canon->add_option("--input", input, "PnmcvGrid JSON")->required();
    canon->add_option("--tol", tol, "separability tolerance");
    canon->add_option("--report", report_out, "SeparabilityReport JSON output")->required();
    canon->add_option("--out", out, "resampled CanonicalTriple JSON output")->required();

    auto* exp = app.add_subcommand("export", "surface JSON -> OBJ projection");
    exp->add_option("--input", input, "surface JSON")->required();
    exp->add_option("--axes", axes, "projection axes i,j,k (0-based, default 0,1,2)");
    exp->add_option("--out", out, "OBJ output path")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        json cfg = json::object();
        if (!config_file.empty()) cfg = lsurf::io::load_json(config_file);

        if (tol <= 0)
            throw lsurf::GeomError(lsurf::ErrorCode::ConfigError, "--tol must be positive");
        if (substeps < 1)
            throw lsurf::GeomError(lsurf::ErrorCode::ConfigError, "--substeps must be >= 1");
        if (fd_step && *fd_step <= 0)
            throw lsurf::GeomError(lsurf::ErrorCode::ConfigError, "--fd-step must be positive");

        if (analyze->parsed()) return run_analyze(sa, cfg, input, json_out, csv_out);
        if (classify->parsed()) return run_classify(sa, cfg, json_out);
        if (frame->parsed()) return run_frame(sa, cfg, fd_step, out);
        if (rec->parsed())
            return run_reconstruct(input, init_kind, origin, p0s, substeps, renormalize,
                                   max_residual, out, obj_out);
        if (pv->parsed()) return run_pnmcv_verify(input, out);
        if (canon->parsed()) return run_canonicalize(input, tol, report_out, out);
        if (exp->parsed()) return run_export(input, axes, out);
    } catch (const lsurf::GeomError& e) {
        const json err{{"error", lsurf::error_code_name(e.code())}, {"message", e.what()}};
        std::cerr << err.dump() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << json{{"error", "Unexpected"}, {"message", e.what()}}.dump() << "\n";
        return 3;
    }
    return 0;
}
