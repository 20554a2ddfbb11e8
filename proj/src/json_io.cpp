#include "wspline/json_io.hpp"

namespace wspline {

nlohmann::json forest_to_json(const TrajectoryForest& forest) {
    nlohmann::json nodes = nlohmann::json::array();
    for (const auto& n : forest.nodes)
        nodes.push_back({{"step", n.step}, {"atom", n.atom}, {"pos", n.pos}, {"mass", n.mass}});
    nlohmann::json edges = nlohmann::json::array();
    for (const auto& e : forest.edges)
        edges.push_back({{"from", e.from}, {"to", e.to}, {"mass", e.mass}});
    return {{"nodes", std::move(nodes)}, {"edges", std::move(edges)}};
}

nlohmann::json config_to_json(const RefinementConfig& cfg) {
    return {{"degree", cfg.degree},
            {"level", cfg.level},
            {"p", cfg.cost_exponent},
            {"epsilon", cfg.prune_threshold},
            {"merge_tolerance", cfg.merge_tolerance},
            {"seed", cfg.seed}};
}

nlohmann::json report_to_json(const EvalReport& report, const RefinementConfig& cfg) {
    nlohmann::json j;
    j["held_out_step"] = report.held_out_step;
    j["w1"] = report.w1;
    if (report.mse)
        j["mse"] = *report.mse;
    else
        j["mse"] = "undefined";
    j["mean_w1"] = report.mean_w1;
    if (report.mean_mse)
        j["mean_mse"] = *report.mean_mse;
    else
        j["mean_mse"] = "undefined";
    j["runtime_seconds"] = report.runtime_seconds;
    j["config"] = config_to_json(cfg);
    return j;
}

} // namespace wspline
