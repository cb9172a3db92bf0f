#pragma once

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "wlp/dist.hpp"
#include "wlp/numeric.hpp"
#include "wlp/setfunc.hpp"

namespace wlp {

// Distribution config: one JSON object per variable, in index order, e.g.
// [{"type":"uniform","lo":0,"hi":1}, {"type":"exponential","rate":2.0},
//  {"type":"constant","value":0.4}, {"type":"table","points":[[x,F],...]}]
inline RandomVector distributions_from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    if (!doc.is_array())
        throw std::invalid_argument("distribution config must be a JSON array");
    RandomVector rv;
    rv.reserve(doc.size());
    for (const auto& entry : doc) {
        const std::string type = entry.at("type").get<std::string>();
        if (type == "uniform") {
            rv.push_back(Distribution::uniform(entry.at("lo").get<double>(),
                                               entry.at("hi").get<double>()));
        } else if (type == "exponential") {
            rv.push_back(Distribution::exponential(entry.at("rate").get<double>()));
        } else if (type == "constant") {
            rv.push_back(Distribution::constant(entry.at("value").get<double>()));
        } else if (type == "table") {
            std::vector<std::pair<double, double>> points;
            for (const auto& p : entry.at("points")) {
                if (!p.is_array() || p.size() != 2)
                    throw std::invalid_argument("table points must be [x, F] pairs");
                points.emplace_back(p[0].get<double>(), p[1].get<double>());
            }
            rv.push_back(Distribution::table(std::move(points)));
        } else {
            throw std::invalid_argument("unknown distribution type \"" + type + "\"");
        }
    }
    return rv;
}

// Set functions and fuzzy measures: {"n": n, "values": [v(empty), v({1}),
// v({2}), v({1,2}), ...]} in mask order.
inline SetFunction setfunction_from_json(const std::string& text) {
    const auto doc = nlohmann::json::parse(text);
    const int n = doc.at("n").get<int>();
    std::vector<double> values;
    for (const auto& v : doc.at("values")) values.push_back(v.get<double>());
    return SetFunction(n, std::move(values));
}

inline std::string setfunction_to_json(const SetFunction& v) {
    std::ostringstream out;
    out << "{\"n\":" << v.n << ",\"values\":[";
    for (std::size_t i = 0; i < v.values.size(); ++i) {
        if (i) out << ',';
        out << double_to_string_17(v.values[i]);
    }
    out << "]}";
    return out.str();
}

}  // namespace wlp
