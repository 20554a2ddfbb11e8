#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "wspline/datasets.hpp"
#include "wspline/subdivision.hpp"

using nlohmann::json;

namespace {

const std::string kCli = WSPLINE_CLI_PATH;

struct RunResult {
    int exit_code = 0;
    std::string out;
    std::string err;
};

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string tmp(const char* name) {
    std::filesystem::create_directories("wspline_test_tmp");
    return std::string("wspline_test_tmp/") + name;
}

RunResult run(const std::string& args, const std::string& env_prefix = "") {
    const std::string out_path = tmp("stdout");
    const std::string err_path = tmp("stderr");
    const std::string cmd =
        env_prefix + kCli + " " + args + " >" + out_path + " 2>" + err_path;
    const int raw = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = (raw == -1) ? -1 : WEXITSTATUS(raw);
    r.out = slurp(out_path);
    r.err = slurp(err_path);
    return r;
}

} // namespace

TEST_CASE("generate writes a loadable dataset of the documented shape") {
    const std::string csv = tmp("gen.csv");
    const auto r = run("generate --kind diverging-gaussian --seed 3 --out " + csv);
    REQUIRE(r.exit_code == 0);

    const auto seq = wspline::load_sequence_csv(csv);
    CHECK(seq.size() == 4);
    for (std::size_t s = 0; s < seq.size(); ++s) CHECK(seq.measure(s).size() == 200);

    // manifest sits alongside the output
    const auto manifest = json::parse(slurp(csv + ".manifest.json"));
    CHECK(manifest["command"] == "generate");
    CHECK(manifest["outputs"][0]["path"] == csv);
    CHECK(manifest["outputs"][0]["fnv1a64"].get<std::string>().size() == 16);
}

TEST_CASE("generate is byte-deterministic in the seed") {
    const std::string a = tmp("gen_a.csv"), b = tmp("gen_b.csv");
    REQUIRE(run("generate --kind converging-gaussian --seed 11 --out " + a).exit_code == 0);
    REQUIRE(run("generate --kind converging-gaussian --seed 11 --out " + b).exit_code == 0);
    CHECK(slurp(a) == slurp(b));
    CHECK(!slurp(a).empty());
}

TEST_CASE("generate rejects unknown kinds") {
    const auto r = run("generate --kind nope --out " + tmp("x.csv"));
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("BadConfig") != std::string::npos);
}

TEST_CASE("refine honors the output count law") {
    const std::string csv = tmp("ref_in.csv");
    REQUIRE(run("generate --kind diverging-gaussian --seed 5 --n 12 --out " + csv).exit_code ==
            0);

    const std::string out = tmp("ref_out.csv");
    REQUIRE(run("refine --in " + csv + " --out " + out + " --degree 2 --level 3").exit_code ==
            0);
    const auto refined = wspline::load_sequence_csv(out);
    CHECK(refined.size() ==
          static_cast<std::size_t>(wspline::expected_output_count(3, 3, 2)));
}

TEST_CASE("refine with zero rounds returns the input clouds") {
    const std::string csv = tmp("ref0_in.csv");
    REQUIRE(run("generate --kind diverging-gaussian --seed 5 --n 9 --out " + csv).exit_code ==
            0);
    const std::string out = tmp("ref0_out.csv");
    REQUIRE(run("refine --in " + csv + " --out " + out + " --level 0").exit_code == 0);

    const auto a = wspline::load_sequence_csv(csv);
    const auto b = wspline::load_sequence_csv(out);
    REQUIRE(a.size() == b.size());
    // coordinates survive the file round trip bit for bit; weights pick up
    // one re-normalization on load
    for (std::size_t s = 0; s < a.size(); ++s) {
        const auto& ma = a.measure(s);
        const auto& mb = b.measure(s);
        REQUIRE(ma.size() == mb.size());
        CHECK(ma.support() == mb.support());
        for (std::size_t i = 0; i < ma.size(); ++i)
            CHECK(std::abs(ma.weight(i) - mb.weight(i)) <= 1e-12);
    }
}

TEST_CASE("four-point refinement needs four clouds") {
    const std::string csv = tmp("fp_in.csv");
    REQUIRE(
        run("generate --kind diverging-gaussian --seed 5 --n 6 --steps 3 --out " + csv)
            .exit_code == 0);
    const auto r = run("refine --in " + csv + " --out " + tmp("fp_out.csv") +
                       " --scheme four-point --level 1");
    CHECK(r.exit_code != 0);
    CHECK(r.err.find("TooFewClouds") != std::string::npos);
}

TEST_CASE("trace emits the forest schema with conservation at zero threshold") {
    const std::string csv = tmp("trace_in.csv");
    REQUIRE(run("generate --kind diverging-gaussian --seed 9 --n 8 --out " + csv).exit_code ==
            0);
    const std::string refined = tmp("trace_ref.csv");
    REQUIRE(run("refine --in " + csv + " --out " + refined + " --level 2").exit_code == 0);

    const std::string forest_path = tmp("trace.json");
    REQUIRE(run("trace --in " + refined + " --out " + forest_path + " --mass-threshold 0")
                .exit_code == 0);

    const auto forest = json::parse(slurp(forest_path));
    REQUIRE(forest.contains("nodes"));
    REQUIRE(forest.contains("edges"));
    REQUIRE(!forest["nodes"].empty());
    for (const auto& n : forest["nodes"]) {
        CHECK(n.contains("step"));
        CHECK(n.contains("atom"));
        CHECK(n.contains("pos"));
        CHECK(n.contains("mass"));
    }
    // outgoing mass equals node mass at every non-final node
    std::vector<double> outflow(forest["nodes"].size(), 0.0);
    for (const auto& e : forest["edges"])
        outflow[e["from"].get<std::size_t>()] += e["mass"].get<double>();
    std::size_t last_step = 0;
    for (const auto& n : forest["nodes"])
        last_step = std::max(last_step, n["step"].get<std::size_t>());
    for (std::size_t k = 0; k < outflow.size(); ++k) {
        const auto& n = forest["nodes"][k];
        if (n["step"].get<std::size_t>() == last_step) continue;
        CHECK(std::abs(outflow[k] - n["mass"].get<double>()) <= 1e-9);
    }
}

TEST_CASE("evaluate rejects boundary hold-outs and reports cleanly") {
    const std::string csv = tmp("eval_in.csv");
    REQUIRE(run("generate --kind diverging-gaussian --seed 4 --n 10 --out " + csv).exit_code ==
            0);

    const auto bad = run("evaluate --in " + csv + " --out " + tmp("eval_bad.json") +
                         " --held-out 0 --level 2");
    CHECK(bad.exit_code != 0);
    CHECK(bad.err.find("BoundaryHoldout") != std::string::npos);

    const std::string report_path = tmp("eval.json");
    REQUIRE(run("evaluate --in " + csv + " --out " + report_path + " --held-out 2 --level 2")
                .exit_code == 0);
    const auto report = json::parse(slurp(report_path));
    CHECK(report["held_out_step"] == 2);
    CHECK(report["w1"].is_number());
    CHECK(report["mean_w1"].is_number());
    CHECK(report["config"]["level"] == 2);
}

TEST_CASE("plot renders one circle per atom with area tracking mass") {
    const std::string csv = tmp("plot_in.csv");
    REQUIRE(run("generate --kind converging-gaussian --counts 4,8,4 --seed 2 --out " + csv)
                .exit_code == 0);
    const std::string svg_path = tmp("plot.svg");
    REQUIRE(run("plot --in " + csv + " --out " + svg_path).exit_code == 0);

    const std::string svg = slurp(svg_path);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("xmlns") != std::string::npos);
    std::size_t circles = 0, pos = 0;
    while ((pos = svg.find("<circle", pos)) != std::string::npos) {
        ++circles;
        pos += 7;
    }
    CHECK(circles == 4 + 8 + 4);

    // uniform masses within each cloud: all radii must be equal within
    // rendering precision (area proportional to mass)
    const auto seq = wspline::load_sequence_csv(csv);
    const double w_small = seq.measure(0).weight(0); // 1/4
    const double w_big = seq.measure(1).weight(0);   // 1/8
    double r_small = -1.0, r_big = -1.0;
    pos = 0;
    std::size_t idx = 0;
    while ((pos = svg.find("r=\"", pos)) != std::string::npos) {
        pos += 3;
        const double r = std::atof(svg.c_str() + pos);
        if (idx < 4 && r_small < 0) r_small = r;
        if (idx >= 4 && idx < 12 && r_big < 0) r_big = r;
        ++idx;
    }
    REQUIRE(r_small > 0);
    REQUIRE(r_big > 0);
    const double area_ratio = (r_small * r_small) / (r_big * r_big);
    CHECK(std::abs(area_ratio - w_small / w_big) <= 0.02 * (w_small / w_big));

    const auto bad = run("plot --in " + csv + " --out " + tmp("plot2.svg") + " --dims 0 7");
    CHECK(bad.exit_code != 0);
    CHECK(bad.err.find("BadDims") != std::string::npos);
}

TEST_CASE("plot overlays trace edges as lines") {
    const std::string csv = tmp("overlay_in.csv");
    REQUIRE(run("generate --kind diverging-gaussian --seed 6 --n 5 --out " + csv).exit_code ==
            0);
    const std::string refined = tmp("overlay_ref.csv");
    REQUIRE(run("refine --in " + csv + " --out " + refined + " --level 1").exit_code == 0);
    const std::string forest_path = tmp("overlay.json");
    REQUIRE(run("trace --in " + refined + " --out " + forest_path).exit_code == 0);
    const std::string svg_path = tmp("overlay.svg");
    REQUIRE(run("plot --in " + refined + " --out " + svg_path + " --trace " + forest_path)
                .exit_code == 0);

    const std::string svg = slurp(svg_path);
    const auto forest = json::parse(slurp(forest_path));
    std::size_t line_count = 0, pos = 0;
    while ((pos = svg.find("<line", pos)) != std::string::npos) {
        ++line_count;
        pos += 5;
    }
    CHECK(line_count == forest["edges"].size());
}

TEST_CASE("plot projects high-dimensional data") {
    const std::string csv = tmp("plot10_in.csv");
    REQUIRE(run("generate --kind diverging-gaussian --seed 2 --n 6 --dim 10 --out " + csv)
                .exit_code == 0);
    const std::string svg_path = tmp("plot10.svg");
    REQUIRE(run("plot --in " + csv + " --out " + svg_path + " --dims 0 1").exit_code == 0);
    const std::string svg = slurp(svg_path);
    CHECK(svg.find("<svg") != std::string::npos);
    REQUIRE(run("plot --in " + csv + " --out " + svg_path + " --dims 3 9").exit_code == 0);
}

TEST_CASE("jobs cap leaves results unchanged") {
    const std::string csv = tmp("jobs_in.csv");
    REQUIRE(run("generate --kind diverging-gaussian --seed 8 --n 10 --out " + csv).exit_code ==
            0);
    const std::string out1 = tmp("jobs1.csv"), out2 = tmp("jobs2.csv"), out3 = tmp("jobs3.csv");
    REQUIRE(run("refine --in " + csv + " --out " + out1 + " --level 3 --jobs 1").exit_code ==
            0);
    REQUIRE(run("refine --in " + csv + " --out " + out2 + " --level 3 --jobs 4").exit_code ==
            0);
    CHECK(slurp(out1) == slurp(out2));

    // env var is the fallback when --jobs is absent
    REQUIRE(run("refine --in " + csv + " --out " + out3 + " --level 3",
                "WSPLINE_JOBS=1 ")
                .exit_code == 0);
    CHECK(slurp(out1) == slurp(out3));
}

TEST_CASE("config file fills defaults and flags take precedence") {
    const std::string csv = tmp("cfg_in.csv");
    REQUIRE(run("generate --kind diverging-gaussian --seed 8 --n 8 --out " + csv).exit_code ==
            0);
    const std::string cfg_path = tmp("cfg.json");
    {
        std::ofstream out(cfg_path);
        out << R"({"level": 2, "degree": 3})";
    }
    const std::string out_cfg = tmp("cfg_out.csv"), out_flag = tmp("cfg_out2.csv");
    REQUIRE(run("refine --in " + csv + " --out " + out_cfg + " --config " + cfg_path)
                .exit_code == 0);
    CHECK(wspline::load_sequence_csv(out_cfg).size() ==
          static_cast<std::size_t>(wspline::expected_output_count(3, 2, 3)));

    REQUIRE(run("refine --in " + csv + " --out " + out_flag + " --config " + cfg_path +
                " --level 1")
                .exit_code == 0);
    CHECK(wspline::load_sequence_csv(out_flag).size() ==
          static_cast<std::size_t>(wspline::expected_output_count(3, 1, 3)));
}
