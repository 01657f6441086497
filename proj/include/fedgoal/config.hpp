#pragma once

#include "fedgoal/harness.hpp"

#include <json.hpp>

namespace fedgoal {

inline SynthConfig parse_synth_config(const nlohmann::json &j) {
    SynthConfig synth;
    synth.length = j.value("length", synth.length);
    synth.daily_period = j.value("daily_period", synth.daily_period);
    synth.weekly_period = j.value("weekly_period", synth.weekly_period);
    synth.trend_slope = j.value("trend_slope", synth.trend_slope);
    synth.noise_std = j.value("noise_std", synth.noise_std);
    synth.daily_amplitude = j.value("daily_amplitude", synth.daily_amplitude);
    synth.weekly_amplitude = j.value("weekly_amplitude", synth.weekly_amplitude);
    synth.seed = j.value("seed", synth.seed);
    return synth;
}

/// Reads an experiment description from a JSON document. See README for
/// the schema; unknown keys are ignored, missing keys take defaults.
inline ExperimentConfig parse_experiment_config(const nlohmann::json &j) {
    ExperimentConfig cfg;
    if (!j.contains("data")) throw InvalidConfig("config needs a 'data' section");
    const auto &data = j.at("data");
    if (data.contains("csv")) {
        CsvSource csv;
        csv.path = data.at("csv").at("path").get<std::string>();
        csv.timestamp_column = data.at("csv").value("timestamp_column", std::string("timestamp"));
        if (data.at("csv").contains("value_columns"))
            csv.value_columns = data.at("csv").at("value_columns").get<std::vector<std::string>>();
        else
            csv.value_columns = {data.at("csv").value("value_column", std::string("value"))};
        cfg.data.csv = std::move(csv);
    }
    if (data.contains("synth")) cfg.data.synth = parse_synth_config(data.at("synth"));
    if (!cfg.data.csv && !cfg.data.synth)
        throw InvalidConfig("data section needs 'csv' or 'synth'");

    if (!j.contains("boundary")) throw InvalidConfig("config needs a 'boundary'");
    if (j.at("boundary").is_string())
        cfg.boundary = detail::parse_timestamp(j.at("boundary").get<std::string>());
    else
        cfg.boundary = j.at("boundary").get<std::int64_t>();

    if (j.contains("grid")) {
        for (const auto &cell : j.at("grid")) {
            if (!cell.is_array() || cell.size() != 2)
                throw InvalidConfig("grid cells must be [k, overlap] pairs");
            const auto k = cell[0].get<std::int64_t>();
            const double rho = cell[1].get<double>();
            if (k < 1) throw InvalidConfig("grid k must be >= 1");
            if (rho < 0.0 || rho > 1.0) throw InvalidConfig("grid overlap must lie in [0, 1]");
            cfg.grid.emplace_back(static_cast<std::size_t>(k), rho);
        }
    }

    cfg.gp_metric = metric_from_name(j.value("metric", std::string("smape")));
    if (j.contains("mlp")) {
        const auto &m = j.at("mlp");
        cfg.mlp.lag_count = m.value("lag_count", cfg.mlp.lag_count);
        cfg.mlp.hidden_units = m.value("hidden_units", cfg.mlp.hidden_units);
        cfg.mlp.sigmoid_steepness = m.value("sigmoid_steepness", cfg.mlp.sigmoid_steepness);
        cfg.mlp.learning_rate = m.value("learning_rate", cfg.mlp.learning_rate);
        cfg.mlp.epochs = m.value("epochs", cfg.mlp.epochs);
        cfg.mlp.batch_size = m.value("batch_size", cfg.mlp.batch_size);
    }
    cfg.holdout_fraction = j.value("holdout_fraction", 0.0);
    if (cfg.holdout_fraction < 0.0 || cfg.holdout_fraction >= 1.0)
        throw InvalidConfig("holdout_fraction must lie in [0, 1)");
    cfg.output_dir = j.value("output_dir", std::string("out"));
    cfg.master_seed = j.value("master_seed", std::uint64_t{0});
    return cfg;
}

inline ExperimentConfig load_experiment_config(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw InvalidConfig("cannot open config file " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception &e) {
        throw InvalidConfig(std::string("config is not valid json: ") + e.what());
    }
    try {
        return parse_experiment_config(j);
    } catch (const nlohmann::json::exception &e) {
        throw InvalidConfig(std::string("bad config: ") + e.what());
    }
}

} // namespace fedgoal
