// wspline: trajectory inference on weighted point clouds via transport-based
// geodesic averaging. Subcommands: generate, refine, trace, evaluate, plot.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "wspline/datasets.hpp"
#include "wspline/eval.hpp"
#include "wspline/geodesic.hpp"
#include "wspline/json_io.hpp"
#include "wspline/parallel.hpp"
#include "wspline/subdivision.hpp"
#include "wspline/trace.hpp"

namespace {

using nlohmann::json;
using namespace wspline;

std::uint64_t fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::IoError, "cannot checksum " + path);
    std::uint64_t h = 1469598103934665603ull;
    char buf[65536];
    while (in.read(buf, sizeof buf) || in.gcount() > 0) {
        const std::streamsize got = in.gcount();
        for (std::streamsize k = 0; k < got; ++k) {
            h ^= static_cast<unsigned char>(buf[k]);
            h *= 1099511628211ull;
        }
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

struct ManifestInfo {
    std::string command;
    json config;
    std::vector<std::string> inputs;
    std::vector<std::string> outputs;
    std::uint64_t seed = 0;
    double wall_time_seconds = 0.0;
};

/// Every run writes one manifest alongside its primary output.
void write_manifest(const ManifestInfo& info) {
    json j;
    j["command"] = info.command;
    j["config"] = info.config;
    j["seed"] = info.seed;
    j["wall_time_seconds"] = info.wall_time_seconds;
    j["inputs"] = json::array();
    for (const auto& p : info.inputs)
        j["inputs"].push_back({{"path", p}, {"fnv1a64", hex64(fnv1a64_file(p))}});
    j["outputs"] = json::array();
    for (const auto& p : info.outputs)
        j["outputs"].push_back({{"path", p}, {"fnv1a64", hex64(fnv1a64_file(p))}});

    const std::string path = info.outputs.front() + ".manifest.json";
    std::ofstream out(path);
    if (!out) fail(ErrorCode::IoError, "cannot write " + path);
    out << j.dump(2) << "\n";
}

json load_config_file(const std::string& path) {
    if (path.empty()) return json::object();
    std::ifstream in(path);
    if (!in) fail(ErrorCode::IoError, "cannot open config " + path);
    json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        fail(ErrorCode::ParseError, std::string("bad config JSON: ") + e.what());
    }
    if (!j.is_object()) fail(ErrorCode::ParseError, "config must be a JSON object");
    return j;
}

// Option state shared by the refinement-driven subcommands. Precedence:
// explicit flag > config file entry > built-in default.
struct CommonOpts {
    std::string config_path;
    int degree = 2;
    int level = 7;
    double p = 2.0;
    double epsilon = 1e-10;
    double merge_tol = 1e-9;
    double w = 1.0 / 16.0;
    double mass_threshold = 1e-8;
    std::uint64_t seed = 0;
    int jobs = 0;

    CLI::Option* degree_opt = nullptr;
    CLI::Option* level_opt = nullptr;
    CLI::Option* p_opt = nullptr;
    CLI::Option* epsilon_opt = nullptr;
    CLI::Option* merge_opt = nullptr;
    CLI::Option* w_opt = nullptr;
    CLI::Option* thresh_opt = nullptr;
    CLI::Option* seed_opt = nullptr;
    CLI::Option* jobs_opt = nullptr;

    void attach(CLI::App* cmd) {
        cmd->add_option("--config", config_path, "JSON config file (flags take precedence)");
        degree_opt = cmd->add_option("--degree", degree, "B-spline degree M (default 2)");
        level_opt = cmd->add_option("--level", level, "refinement level R (default 7)");
        p_opt = cmd->add_option("--p", p, "transport cost exponent (default 2)");
        epsilon_opt = cmd->add_option("--epsilon", epsilon, "plan pruning threshold");
        merge_opt = cmd->add_option("--merge-tol", merge_tol, "coincident-atom merge radius");
        w_opt = cmd->add_option("--w", w, "4-point tension parameter (default 1/16)");
        thresh_opt = cmd->add_option("--mass-threshold", mass_threshold,
                                     "minimum edge mass kept while tracing");
        seed_opt = cmd->add_option("--seed", seed, "generator seed");
        jobs_opt = cmd->add_option("--jobs", jobs, "worker cap (0 = hardware, env WSPLINE_JOBS)");
    }

    template <typename T>
    static void resolve(T& value, CLI::Option* opt, const json& cfg, const char* key) {
        if (opt != nullptr && opt->count() > 0) return; // flag wins
        if (cfg.contains(key)) value = cfg[key].get<T>();
    }

    void finalize() {
        const json cfg = load_config_file(config_path);
        resolve(degree, degree_opt, cfg, "degree");
        resolve(level, level_opt, cfg, "level");
        resolve(p, p_opt, cfg, "p");
        resolve(epsilon, epsilon_opt, cfg, "epsilon");
        resolve(merge_tol, merge_opt, cfg, "merge_tolerance");
        resolve(w, w_opt, cfg, "w");
        resolve(mass_threshold, thresh_opt, cfg, "mass_threshold");
        resolve(seed, seed_opt, cfg, "seed");
        resolve(jobs, jobs_opt, cfg, "jobs");
        if ((jobs_opt == nullptr || jobs_opt->count() == 0) && !cfg.contains("jobs")) {
            if (const char* env = std::getenv("WSPLINE_JOBS")) jobs = std::atoi(env);
        }
        set_max_jobs(jobs);
    }

    RefinementConfig refinement() const {
        RefinementConfig c;
        c.degree = degree;
        c.level = level;
        c.cost_exponent = p;
        c.prune_threshold = epsilon;
        c.merge_tolerance = merge_tol;
        c.seed = seed;
        c.validate();
        return c;
    }

    json snapshot() const {
        return {{"degree", degree},       {"level", level},
                {"p", p},                 {"epsilon", epsilon},
                {"merge_tolerance", merge_tol}, {"w", w},
                {"mass_threshold", mass_threshold}, {"jobs", jobs}};
    }
};

struct Timer {
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }
};

// ---------------------------------------------------------------- generate

int cmd_generate(const std::string& kind, const std::string& out_path, CommonOpts& opts,
                 std::size_t n, std::size_t steps, std::size_t dim,
                 const std::string& counts_csv) {
    Timer timer;
    opts.finalize();

    TimedSequence seq;
    if (kind == "diverging-gaussian") {
        seq = gen_diverging_gaussian(opts.seed, n, steps, dim);
    } else if (kind == "converging-gaussian") {
        std::vector<std::size_t> counts;
        std::stringstream ss(counts_csv);
        std::string field;
        while (std::getline(ss, field, ',')) {
            const long v = std::atol(field.c_str());
            if (v < 1) fail(ErrorCode::BadConfig, "counts must be positive integers");
            counts.push_back(static_cast<std::size_t>(v));
        }
        seq = gen_converging_gaussian(opts.seed, counts, dim);
    } else {
        fail(ErrorCode::BadConfig, "unknown kind '" + kind + "'");
    }
    save_sequence_csv(seq, out_path);

    ManifestInfo m;
    m.command = "generate";
    m.config = opts.snapshot();
    m.config["kind"] = kind;
    m.config["n"] = n;
    m.config["steps"] = steps;
    m.config["dim"] = dim;
    m.config["counts"] = counts_csv;
    m.outputs = {out_path};
    m.seed = opts.seed;
    m.wall_time_seconds = timer.seconds();
    write_manifest(m);
    return 0;
}

// ------------------------------------------------------------------ refine

int cmd_refine(const std::string& in_path, const std::string& out_path,
               const std::string& scheme, CommonOpts& opts) {
    Timer timer;
    opts.finalize();
    const RefinementConfig cfg = opts.refinement();
    const TimedSequence input = load_sequence_csv(in_path);

    RefinedSequence refined;
    if (scheme == "wlr") {
        refined = wlr_refine(input, cfg);
    } else if (scheme == "four-point") {
        refined = four_point_refine(input, cfg.level, opts.w, cfg);
    } else {
        fail(ErrorCode::BadConfig, "unknown scheme '" + scheme + "'");
    }

    // Each 4-point round trims one current spacing per side and halves the
    // spacing, so the surviving span loses step*(2 - 2^(1-R)) per side.
    double t0 = input.time(0), tT = input.time(input.size() - 1);
    if (scheme == "four-point" && cfg.level > 0) {
        const double step_span = (tT - t0) / static_cast<double>(input.size() - 1);
        const double trim = step_span * (2.0 - std::pow(2.0, 1 - cfg.level));
        t0 += trim;
        tT -= trim;
        if (!(t0 < tT)) fail(ErrorCode::ConfigError, "refined domain collapsed; lower --level");
    }
    save_sequence_csv(assign_times(refined, t0, tT), out_path);

    ManifestInfo m;
    m.command = "refine";
    m.config = opts.snapshot();
    m.config["scheme"] = scheme;
    m.inputs = {in_path};
    m.outputs = {out_path};
    m.seed = opts.seed;
    m.wall_time_seconds = timer.seconds();
    write_manifest(m);
    return 0;
}

// ------------------------------------------------------------------- trace

int cmd_trace(const std::string& in_path, const std::string& out_path, CommonOpts& opts) {
    Timer timer;
    opts.finalize();
    const RefinementConfig cfg = opts.refinement();
    const TimedSequence input = load_sequence_csv(in_path);

    RefinedSequence wrapped;
    wrapped.measures = input.measures();
    wrapped.meta.input_length = input.size();
    const TrajectoryForest forest = trace_paths(wrapped, opts.mass_threshold, cfg);

    std::ofstream out(out_path);
    if (!out) fail(ErrorCode::IoError, "cannot write " + out_path);
    out << forest_to_json(forest).dump(2) << "\n";
    out.close();

    ManifestInfo m;
    m.command = "trace";
    m.config = opts.snapshot();
    m.inputs = {in_path};
    m.outputs = {out_path};
    m.seed = opts.seed;
    m.wall_time_seconds = timer.seconds();
    write_manifest(m);
    return 0;
}

// ---------------------------------------------------------------- evaluate

int cmd_evaluate(const std::string& in_path, const std::string& out_path, int held,
                 CommonOpts& opts) {
    Timer timer;
    opts.finalize();
    const RefinementConfig cfg = opts.refinement();
    const TimedSequence input = load_sequence_csv(in_path);

    const EvalReport report = evaluate(input, held, cfg);
    std::ofstream out(out_path);
    if (!out) fail(ErrorCode::IoError, "cannot write " + out_path);
    out << report_to_json(report, cfg).dump(2) << "\n";
    out.close();

    ManifestInfo m;
    m.command = "evaluate";
    m.config = opts.snapshot();
    m.config["held_out"] = held;
    m.inputs = {in_path};
    m.outputs = {out_path};
    m.seed = opts.seed;
    m.wall_time_seconds = timer.seconds();
    write_manifest(m);
    return 0;
}

// -------------------------------------------------------------------- plot

void hsv_to_rgb(double h, double s, double v, int rgb[3]) {
    const double c = v * s;
    const double hp = h / 60.0;
    const double x = c * (1.0 - std::abs(std::fmod(hp, 2.0) - 1.0));
    double r = 0, g = 0, b = 0;
    if (hp < 1) { r = c; g = x; }
    else if (hp < 2) { r = x; g = c; }
    else if (hp < 3) { g = c; b = x; }
    else if (hp < 4) { g = x; b = c; }
    else if (hp < 5) { r = x; b = c; }
    else { r = c; b = x; }
    const double m = v - c;
    rgb[0] = static_cast<int>(std::lround(255.0 * (r + m)));
    rgb[1] = static_cast<int>(std::lround(255.0 * (g + m)));
    rgb[2] = static_cast<int>(std::lround(255.0 * (b + m)));
}

int cmd_plot(const std::string& in_path, const std::string& out_path, std::size_t dim_x,
             std::size_t dim_y, const std::string& trace_path, CommonOpts& opts) {
    Timer timer;
    opts.finalize();
    const TimedSequence input = load_sequence_csv(in_path);
    if (dim_x >= input.dim() || dim_y >= input.dim())
        fail(ErrorCode::BadDims, "--dims outside ambient dimension " +
                                     std::to_string(input.dim()));

    json forest;
    if (!trace_path.empty()) {
        std::ifstream in(trace_path);
        if (!in) fail(ErrorCode::IoError, "cannot open " + trace_path);
        try {
            in >> forest;
        } catch (const std::exception& e) {
            fail(ErrorCode::ParseError, std::string("bad forest JSON: ") + e.what());
        }
    }

    double lo_x = 1e300, hi_x = -1e300, lo_y = 1e300, hi_y = -1e300, max_mass = 0.0;
    for (std::size_t s = 0; s < input.size(); ++s) {
        const auto& mu = input.measure(s);
        for (std::size_t i = 0; i < mu.size(); ++i) {
            lo_x = std::min(lo_x, mu.point(i)[dim_x]);
            hi_x = std::max(hi_x, mu.point(i)[dim_x]);
            lo_y = std::min(lo_y, mu.point(i)[dim_y]);
            hi_y = std::max(hi_y, mu.point(i)[dim_y]);
            max_mass = std::max(max_mass, mu.weight(i));
        }
    }
    if (hi_x - lo_x < 1e-12) { lo_x -= 1.0; hi_x += 1.0; }
    if (hi_y - lo_y < 1e-12) { lo_y -= 1.0; hi_y += 1.0; }
    const double pad_x = 0.05 * (hi_x - lo_x), pad_y = 0.05 * (hi_y - lo_y);
    lo_x -= pad_x; hi_x += pad_x; lo_y -= pad_y; hi_y += pad_y;

    const double width = 840.0, height = 600.0;
    const auto sx = [&](double x) { return (x - lo_x) / (hi_x - lo_x) * width; };
    const auto sy = [&](double y) { return height - (y - lo_y) / (hi_y - lo_y) * height; };

    std::ofstream out(out_path);
    if (!out) fail(ErrorCode::IoError, "cannot write " + out_path);
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    char buf[256];
    if (forest.contains("edges")) {
        const auto& nodes = forest["nodes"];
        for (const auto& e : forest["edges"]) {
            const auto& a = nodes[e["from"].get<std::size_t>()];
            const auto& b = nodes[e["to"].get<std::size_t>()];
            const double mass = e["mass"].get<double>();
            std::snprintf(buf, sizeof buf,
                          "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" "
                          "stroke=\"#555555\" stroke-width=\"%.3f\" stroke-opacity=\"0.55\"/>\n",
                          sx(a["pos"][dim_x].get<double>()), sy(a["pos"][dim_y].get<double>()),
                          sx(b["pos"][dim_x].get<double>()), sy(b["pos"][dim_y].get<double>()),
                          0.4 + 2.4 * std::sqrt(mass));
            out << buf;
        }
    }

    const double r_max = 9.0; // radius at the heaviest atom; area tracks mass
    for (std::size_t s = 0; s < input.size(); ++s) {
        const auto& mu = input.measure(s);
        int rgb[3];
        hsv_to_rgb(360.0 * static_cast<double>(s) / static_cast<double>(input.size()), 0.65,
                   0.85, rgb);
        for (std::size_t i = 0; i < mu.size(); ++i) {
            const double r = r_max * std::sqrt(mu.weight(i) / max_mass);
            std::snprintf(buf, sizeof buf,
                          "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"%.4f\" fill=\"#%02x%02x%02x\" "
                          "fill-opacity=\"0.75\"/>\n",
                          sx(mu.point(i)[dim_x]), sy(mu.point(i)[dim_y]), r, rgb[0], rgb[1],
                          rgb[2]);
            out << buf;
        }
    }
    out << "</svg>\n";
    out.close();

    ManifestInfo m;
    m.command = "plot";
    m.config = opts.snapshot();
    m.config["dims"] = {dim_x, dim_y};
    m.inputs = {in_path};
    if (!trace_path.empty()) m.inputs.push_back(trace_path);
    m.outputs = {out_path};
    m.seed = opts.seed;
    m.wall_time_seconds = timer.seconds();
    write_manifest(m);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"trajectory inference on weighted point clouds via geodesic averaging"};
    app.require_subcommand(1);

    // generate
    auto* gen = app.add_subcommand("generate", "write a synthetic dataset CSV");
    std::string gen_kind, gen_out, gen_counts = "32,96,64,32";
    std::size_t gen_n = 200, gen_steps = 4, gen_dim = 2;
    CommonOpts gen_opts;
    gen->add_option("--kind", gen_kind, "diverging-gaussian | converging-gaussian")->required();
    gen->add_option("--out", gen_out, "output CSV path")->required();
    gen->add_option("--n", gen_n, "atoms per cloud (diverging)");
    gen->add_option("--steps", gen_steps, "number of clouds (diverging)");
    gen->add_option("--dim", gen_dim, "ambient dimension");
    gen->add_option("--counts", gen_counts, "per-step atom counts (converging)");
    gen_opts.attach(gen);

    // refine
    auto* ref = app.add_subcommand("refine", "refine a sequence CSV");
    std::string ref_in, ref_out, ref_scheme = "wlr";
    CommonOpts ref_opts;
    ref->add_option("--in", ref_in, "input CSV")->required();
    ref->add_option("--out", ref_out, "output CSV")->required();
    ref->add_option("--scheme", ref_scheme,
                    "wlr (approximating, keeps endpoints) | four-point (interpolatory; "
                    "drops one boundary cloud per end each round, so the refined time "
                    "domain shrinks toward the interior)");
    ref_opts.attach(ref);

    // trace
    auto* tra = app.add_subcommand("trace", "extract branching atom paths as JSON");
    std::string tra_in, tra_out;
    CommonOpts tra_opts;
    tra->add_option("--in", tra_in, "input CSV (usually a refined sequence)")->required();
    tra->add_option("--out", tra_out, "output forest JSON")->required();
    tra_opts.attach(tra);

    // evaluate
    auto* eva = app.add_subcommand("evaluate", "leave-one-out hold-out scores as JSON");
    std::string eva_in, eva_out;
    int eva_held = 1;
    CommonOpts eva_opts;
    eva->add_option("--in", eva_in, "input CSV")->required();
    eva->add_option("--out", eva_out, "output report JSON")->required();
    eva->add_option("--held-out", eva_held, "interior step to withhold")->required();
    eva_opts.attach(eva);

    // plot
    auto* plo = app.add_subcommand("plot", "render a sequence (and optional trace) as SVG");
    std::string plo_in, plo_out, plo_trace;
    std::vector<std::size_t> plo_dims = {0, 1};
    CommonOpts plo_opts;
    plo->add_option("--in", plo_in, "input CSV")->required();
    plo->add_option("--out", plo_out, "output SVG")->required();
    plo->add_option("--dims", plo_dims, "two coordinate indices to project onto")
        ->expected(2);
    plo->add_option("--trace", plo_trace, "forest JSON to overlay");
    plo_opts.attach(plo);

    CLI11_PARSE(app, argc, argv);

    try {
        if (gen->parsed())
            return cmd_generate(gen_kind, gen_out, gen_opts, gen_n, gen_steps, gen_dim,
                                gen_counts);
        if (ref->parsed()) return cmd_refine(ref_in, ref_out, ref_scheme, ref_opts);
        if (tra->parsed()) return cmd_trace(tra_in, tra_out, tra_opts);
        if (eva->parsed()) return cmd_evaluate(eva_in, eva_out, eva_held, eva_opts);
        if (plo->parsed())
            return cmd_plot(plo_in, plo_out, plo_dims[0], plo_dims[1], plo_trace, plo_opts);
    } catch (const Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: internal: %s\n", e.what());
        return 1;
    }
    return 0;
}
