#ifndef TRIKERNEL_JSON_IO_HPP
#define TRIKERNEL_JSON_IO_HPP

#include <fstream>
#include <string>

#include "json.hpp"

#include "trikernel/enumerate.hpp"
#include "trikernel/pseries.hpp"

namespace trikernel {

using Json = nlohmann::json;

inline Json step_set_to_json(const StepSet& s) {
    Json j;
    j["name"] = s.name();
    Json steps = Json::array();
    for (const auto& [di, dj] : s.steps()) steps.push_back(Json::array({di, dj}));
    j["steps"] = steps;
    return j;
}

inline StepSet step_set_from_json(const Json& j) {
    std::vector<Step> steps;
    for (const auto& e : j.at("steps"))
        steps.emplace_back(e.at(0).get<int>(), e.at(1).get<int>());
    std::string name = j.contains("name") ? j.at("name").get<std::string>() : "";
    return StepSet(std::move(steps), std::move(name));
}

// Load a model either by preset name or from a JSON file
// {"name": ..., "steps": [[di, dj], ...]}.
inline StepSet load_model(const std::string& spec) {
    if (auto preset = model_preset(spec)) return *preset;
    std::ifstream in(spec);
    if (!in) throw InvalidArgument("unknown model preset and unreadable file: " + spec);
    Json j;
    in >> j;
    return step_set_from_json(j);
}

// Series as [numerator, denominator, exponent numerator, ramification]
// quadruples; exact values stay decimal strings.
inline Json series_to_json(const PuiseuxSeries& s) {
    Json terms = Json::array();
    for (const auto& q : to_quadruples(s))
        terms.push_back(Json::array({q.num, q.den, q.exp_num, q.ram}));
    Json j;
    j["terms"] = terms;
    j["ramification"] = s.ramification();
    if (!s.is_exact()) j["order_exponent_units"] = s.trunc();
    j["pretty"] = s.pretty();
    return j;
}

inline Json count_layer_to_json(const CountTable& t, int n) {
    Json cells = Json::array();
    auto [si, sj] = t.start();
    for (int i = si - n; i <= si + n; ++i)
        for (int j = sj - n; j <= sj + n; ++j) {
            const Int& c = t.count(n, i, j);
            if (c != 0) cells.push_back(Json::array({i, j, c.get_str()}));
        }
    Json out;
    out["n"] = n;
    out["cells"] = cells;
    return out;
}

} // namespace trikernel

#endif
