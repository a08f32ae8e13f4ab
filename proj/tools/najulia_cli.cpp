// Command-line entry point: wires JSON run configs to the library operations
// with reproducible outputs. Every command writes its results plus a metadata
// sidecar echoing the fully resolved configuration.
//
// Exit codes: 0 success, 1 validation/precondition/parse failure, 2 I/O error.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "najulia/najulia.hpp"

namespace fs = std::filesystem;
using namespace najulia;

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = ".";
    int threads = 0; // 0 = machine parallelism
    bool allow_weak = false;
};

struct Resolved {
    json config;                      // the merged config actually used
    std::vector<std::string> overrides;
};

json load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in.good())
        throw IoFailure("cannot read config file " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigParseError(std::string("config parse error: ") + e.what());
    }
}

ParamSpec spec_from_config(const json& cfg) {
    if (!cfg.contains("spec"))
        throw ConfigParseError("config is missing the 'spec' object");
    return param_spec_from_json(cfg["spec"]);
}

// pulls `name` from the config with a default, then applies a CLI override
template <class T>
T resolve(Resolved& r, const json& cfg, const std::string& name, T fallback,
          const std::optional<T>& override_value) {
    T value = fallback;
    if (cfg.contains(name)) {
        try {
            value = cfg[name].get<T>();
        } catch (const json::exception&) {
            throw ConfigParseError("config field '" + name + "' has the wrong type");
        }
    }
    if (override_value) {
        value = *override_value;
        r.overrides.push_back(name);
    }
    r.config[name] = value;
    return value;
}

void write_metadata(const CommonOpts& common, const std::string& command, const Resolved& r,
                    const ParamSpec& spec, const std::vector<std::string>& outputs) {
    json meta;
    meta["artifact"] = "najulia";
    meta["version"] = kVersion;
    meta["command"] = command;
    meta["spec"] = param_spec_to_json(spec);
    meta["config"] = r.config;
    meta["overrides"] = r.overrides;
    meta["threads"] = resolve_threads(common.threads);
    meta["allow_weak"] = common.allow_weak;
    meta["outputs"] = outputs;
    write_json_file(meta, (fs::path(common.out_dir) / (command + "_metadata.json")).string());
}

void ensure_out_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoFailure("cannot create output directory " + dir + ": " + ec.message());
}

std::string out_path(const CommonOpts& common, const std::string& name) {
    return (fs::path(common.out_dir) / name).string();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"non-autonomous quadratic Julia sets: validation, limit sets, dimension, "
                 "annulus certificates, escape-time rendering"};
    app.require_subcommand(1);

    CommonOpts common;
    std::optional<std::int64_t> opt_horizon, opt_level, opt_kmax, opt_mesh, opt_nx, opt_ny,
        opt_start, opt_maxcp, opt_budget, opt_samples;
    std::optional<double> opt_eps, opt_width, opt_height, opt_cx, opt_cy;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", common.config_path, "JSON run configuration")->required();
        cmd->add_option("--out", common.out_dir, "output directory (default: .)");
        cmd->add_option("--threads", common.threads, "worker threads, 0 = machine parallelism");
        cmd->add_flag("--allow-weak", common.allow_weak,
                      "accept the weak inequality 2^(2^m_k) > sqrt|c_k| + 1");
    };

    auto* c_validate = app.add_subcommand("validate", "check the construction inequalities per level");
    add_common(c_validate);
    c_validate->add_option("--horizon", opt_horizon, "levels to check");

    auto* c_render = app.add_subcommand("render", "escape-time grid of an iterated Julia set");
    add_common(c_render);
    c_render->add_option("--nx", opt_nx, "grid columns");
    c_render->add_option("--ny", opt_ny, "grid rows");
    c_render->add_option("--center-re", opt_cx, "region center, real part");
    c_render->add_option("--center-im", opt_cy, "region center, imaginary part");
    c_render->add_option("--width", opt_width, "region width");
    c_render->add_option("--height", opt_height, "region height");
    c_render->add_option("--start-stage", opt_start, "render J_m for this stage m");
    c_render->add_option("--max-checkpoint", opt_maxcp, "deepest checkpoint K");

    auto* c_dimension = app.add_subcommand("dimension", "Bowen-ratio dimension estimate");
    add_common(c_dimension);
    c_dimension->add_option("--horizon", opt_horizon, "horizon K");

    auto* c_boxcount = app.add_subcommand("boxcount", "box-count slope over sampled limit points");
    add_common(c_boxcount);
    c_boxcount->add_option("--level", opt_level, "cylinder level to sample");
    c_boxcount->add_option("--budget", opt_budget, "enumeration budget");

    auto* c_annuli = app.add_subcommand("annuli", "separating-annulus certificates and classification");
    add_common(c_annuli);
    c_annuli->add_option("--horizon", opt_kmax, "deepest level in the table");
    c_annuli->add_option("--mesh", opt_mesh, "if >= 64, run the numerical separation check");
    c_annuli->add_option("--level", opt_level, "separation-check level");

    auto* c_survival = app.add_subcommand("survival", "dump limit points / survival-set sample");
    add_common(c_survival);
    c_survival->add_option("--level", opt_level, "cylinder level");
    c_survival->add_option("--budget", opt_budget, "enumeration budget");

    auto* c_verify = app.add_subcommand("verify", "runtime verification of the system conditions");
    add_common(c_verify);
    c_verify->add_option("--horizon", opt_kmax, "deepest level to verify");
    c_verify->add_option("--epsilon", opt_eps, "conformality margin epsilon");
    c_verify->add_option("--samples", opt_samples, "boundary mesh points");

    CLI11_PARSE(app, argc, argv);

    try {
        const json cfg = load_config(common.config_path);
        const ParamSpec spec = spec_from_config(cfg);
        Resolved r;
        r.config["spec"] = param_spec_to_json(spec);
        const int threads = common.threads;

        if (c_validate->parsed()) {
            const auto K = resolve<std::int64_t>(r, cfg, "horizon", spec.horizon_default(), opt_horizon);
            const auto rep = validate(spec, K);
            ensure_out_dir(common.out_dir);
            const auto path = out_path(common, "validation.json");
            write_json_file(to_json(rep), path);
            write_metadata(common, "validate", r, spec, {path});
            if (!rep.pass(common.allow_weak)) {
                for (const auto& row : rep.rows) {
                    if (!row.modulus_ok)
                        std::fprintf(stderr, "validate: |c_k| > 4 violated at k = %lld\n",
                                     static_cast<long long>(row.k));
                    else if (!common.allow_weak && !row.strong_ok)
                        std::fprintf(stderr, "validate: strong inequality violated at k = %lld\n",
                                     static_cast<long long>(row.k));
                    else if (common.allow_weak && !row.weak_ok)
                        std::fprintf(stderr, "validate: weak inequality violated at k = %lld\n",
                                     static_cast<long long>(row.k));
                }
                return 1;
            }
            std::printf("validate: all %lld levels pass\n", static_cast<long long>(K));
            return 0;
        }

        if (c_render->parsed()) {
            Region region;
            region.center = Complex(resolve<double>(r, cfg, "center_re", 0.0, opt_cx),
                                    resolve<double>(r, cfg, "center_im", 0.0, opt_cy));
            region.width = resolve<double>(r, cfg, "width", 6.0, opt_width);
            region.height = resolve<double>(r, cfg, "height", 6.0, opt_height);
            const auto nx = resolve<std::int64_t>(r, cfg, "nx", 512, opt_nx);
            const auto ny = resolve<std::int64_t>(r, cfg, "ny", 512, opt_ny);
            const auto m = resolve<std::int64_t>(r, cfg, "start_stage", 0, opt_start);
            const auto K = resolve<std::int64_t>(r, cfg, "max_checkpoint", 6, opt_maxcp);
            require_valid(spec, K, common.allow_weak);
            const auto grid = render_grid(spec, region, nx, ny, m, K, threads);
            ensure_out_dir(common.out_dir);
            const auto pgm = out_path(common, "escape.pgm");
            const auto csv = out_path(common, "escape.csv");
            encode_outputs(grid, pgm, csv);
            write_metadata(common, "render", r, spec, {pgm, csv});
            std::printf("render: %lldx%lld grid, m = %lld, K = %lld\n", static_cast<long long>(nx),
                        static_cast<long long>(ny), static_cast<long long>(m),
                        static_cast<long long>(K));
            return 0;
        }

        if (c_dimension->parsed()) {
            const auto K = resolve<std::int64_t>(r, cfg, "horizon",
                                                 spec.finite_horizon() ? spec.max_k() : 10000,
                                                 opt_horizon);
            require_valid(spec, K, common.allow_weak);
            const auto rep = bowen_estimate(spec, K);
            ensure_out_dir(common.out_dir);
            const auto jpath = out_path(common, "dimension.json");
            const auto cpath = out_path(common, "dimension_trend.csv");
            write_json_file(to_json(rep), jpath);
            write_trend_csv(rep, cpath);
            write_metadata(common, "dimension", r, spec, {jpath, cpath});
            std::printf("dimension: a/b = %.12f at K = %lld (stabilized: %s)\n", rep.ratio,
                        static_cast<long long>(K), rep.limits_stabilized ? "yes" : "no");
            return 0;
        }

        if (c_boxcount->parsed()) {
            const auto level = resolve<std::int64_t>(r, cfg, "level", 6, opt_level);
            const auto budget =
                resolve<std::int64_t>(r, cfg, "budget", kDefaultEnumerationBudget, opt_budget);
            require_valid(spec, level, common.allow_weak);
            const auto pts = limit_points(spec, level, {2.0, 0.0}, budget);
            std::vector<double> scales;
            if (cfg.contains("scales"))
                scales = cfg["scales"].get<std::vector<double>>();
            else
                scales = default_box_scales(spec, level);
            r.config["scales"] = scales;
            const auto res = box_count(pts, scales, threads);
            ensure_out_dir(common.out_dir);
            const auto jpath = out_path(common, "boxcount.json");
            const auto cpath = out_path(common, "boxcount.csv");
            write_json_file(to_json(res), jpath);
            write_boxcount_csv(res, cpath);
            write_metadata(common, "boxcount", r, spec, {jpath, cpath});
            std::printf("boxcount: slope = %.6f over %zu scales (%zu points)\n", res.slope,
                        res.scales.size(), pts.size());
            return 0;
        }

        if (c_annuli->parsed()) {
            const auto k_max = resolve<std::int64_t>(r, cfg, "horizon", 20, opt_kmax);
            const auto mesh = resolve<std::int64_t>(r, cfg, "mesh", 0, opt_mesh);
            const auto level = resolve<std::int64_t>(r, cfg, "level", 1, opt_level);
            require_valid(spec, k_max, common.allow_weak);
            const auto table = thinness_table(spec, k_max);
            const auto cl = classify(spec, k_max);
            ensure_out_dir(common.out_dir);
            const auto cpath = out_path(common, "thinness.csv");
            const auto jpath = out_path(common, "classification.json");
            write_thinness_csv(table, cpath);
            json cj = to_json(cl);
            std::vector<std::string> outputs{cpath, jpath};
            if (mesh >= 64) {
                const auto sep = separation_check(spec, level, mesh, threads);
                cj["separation"] = to_json(sep);
            }
            write_json_file(cj, jpath);
            write_metadata(common, "annuli", r, spec, outputs);
            std::printf("annuli: verdict = %s, %zu table rows\n", verdict_name(cl.verdict),
                        table.rows.size());
            return 0;
        }

        if (c_survival->parsed()) {
            const auto level = resolve<std::int64_t>(r, cfg, "level", 4, opt_level);
            const auto budget =
                resolve<std::int64_t>(r, cfg, "budget", kDefaultEnumerationBudget, opt_budget);
            require_valid(spec, level, common.allow_weak);
            const auto pts = limit_points(spec, level, {2.0, 0.0}, budget);
            ensure_out_dir(common.out_dir);
            const auto cpath = out_path(common, "limit_points.csv");
            write_limit_points_csv(spec, level, pts, cpath);
            write_metadata(common, "survival", r, spec, {cpath});
            std::printf("survival: %zu level-%lld points\n", pts.size(),
                        static_cast<long long>(level));
            return 0;
        }

        if (c_verify->parsed()) {
            const auto k_max = resolve<std::int64_t>(r, cfg, "horizon", 6, opt_kmax);
            const auto eps = resolve<double>(r, cfg, "epsilon", 0.5, opt_eps);
            const auto samples = resolve<std::int64_t>(r, cfg, "samples", 4096, opt_samples);
            require_valid(spec, k_max, common.allow_weak);
            const auto chk = verify_system(spec, k_max, eps, samples);
            ensure_out_dir(common.out_dir);
            const auto jpath = out_path(common, "system_check.json");
            write_json_file(to_json(chk), jpath);
            write_metadata(common, "verify", r, spec, {jpath});
            std::printf("verify: %s\n", chk.pass() ? "all conditions hold" : "FAILED");
            return chk.pass() ? 0 : 1;
        }
    } catch (const IoFailure& e) {
        std::fprintf(stderr, "io error: %s\n", e.what());
        return 2;
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
