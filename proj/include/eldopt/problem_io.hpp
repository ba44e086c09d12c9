#pragma once

#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "eldopt/eld.hpp"

namespace eldopt {

/// Problem documents are JSON:
///   {"demand": 975.0,
///    "generators": [{"p_min": 200, "p_max": 450, "a": 0.004, "b": 5.3, "c": 500}, ...]}
/// Doubles are written in shortest round-trip form, so literals survive a
/// save/load cycle bit-exactly.

inline EldProblem problem_from_json(const nlohmann::json& j) {
    EldProblem problem;
    try {
        problem.demand = j.at("demand").get<double>();
        for (const auto& gj : j.at("generators")) {
            Generator g;
            g.p_min = gj.at("p_min").get<double>();
            g.p_max = gj.at("p_max").get<double>();
            g.a = gj.at("a").get<double>();
            g.b = gj.at("b").get<double>();
            g.c = gj.at("c").get<double>();
            problem.generators.push_back(g);
        }
    } catch (const nlohmann::json::exception& e) {
        throw InputError(std::string("malformed problem document: ") + e.what());
    }
    validate(problem);
    return problem;
}

inline nlohmann::json problem_to_json(const EldProblem& problem) {
    nlohmann::json j;
    j["demand"] = problem.demand;
    j["generators"] = nlohmann::json::array();
    for (const auto& g : problem.generators)
        j["generators"].push_back(
            {{"p_min", g.p_min}, {"p_max", g.p_max}, {"a", g.a}, {"b", g.b}, {"c", g.c}});
    return j;
}

inline EldProblem load_problem(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot read problem file: " + path.string());
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw InputError("cannot parse problem file " + path.string() + ": " + e.what());
    }
    return problem_from_json(j);
}

inline void save_problem(const EldProblem& problem, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw OutputError("cannot write problem file: " + path.string());
    out << problem_to_json(problem).dump(2) << '\n';
    if (!out) throw OutputError("failed while writing problem file: " + path.string());
}

}  // namespace eldopt
