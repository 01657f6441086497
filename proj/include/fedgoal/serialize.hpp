#pragma once

#include "fedgoal/aggregate.hpp"
#include "fedgoal/metrics.hpp"
#include "fedgoal/mlp.hpp"

#include <json.hpp>

namespace fedgoal {

inline void to_json(nlohmann::json &j, const Scaler &s) {
    j = nlohmann::json{{"mean", s.mean}, {"std", s.std}};
}

inline void from_json(const nlohmann::json &j, Scaler &s) {
    j.at("mean").get_to(s.mean);
    j.at("std").get_to(s.std);
}

inline void to_json(nlohmann::json &j, const MlpParams &p) {
    j = nlohmann::json{{"input_weights", p.input_weights},
                       {"input_biases", p.input_biases},
                       {"output_weights", p.output_weights},
                       {"output_bias", p.output_bias},
                       {"sigmoid_steepness", p.sigmoid_steepness},
                       {"scaler", p.scaler},
                       {"lag_count", p.lag_count()},
                       {"hidden_units", p.hidden_units()}};
}

inline void from_json(const nlohmann::json &j, MlpParams &p) {
    j.at("input_weights").get_to(p.input_weights);
    j.at("input_biases").get_to(p.input_biases);
    j.at("output_weights").get_to(p.output_weights);
    j.at("output_bias").get_to(p.output_bias);
    j.at("sigmoid_steepness").get_to(p.sigmoid_steepness);
    j.at("scaler").get_to(p.scaler);
}

inline void to_json(nlohmann::json &j, const GpSolution &s) {
    j = nlohmann::json{{"alpha", s.alpha},
                       {"lambda", s.lambda},
                       {"delta_over", s.delta_over},
                       {"delta_under", s.delta_under}};
}

inline void from_json(const nlohmann::json &j, GpSolution &s) {
    j.at("alpha").get_to(s.alpha);
    j.at("lambda").get_to(s.lambda);
    j.at("delta_over").get_to(s.delta_over);
    j.at("delta_under").get_to(s.delta_under);
}

} // namespace fedgoal
