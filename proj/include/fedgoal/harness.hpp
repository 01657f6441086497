#pragma once

#include "fedgoal/aggregate.hpp"
#include "fedgoal/partition.hpp"
#include "fedgoal/serialize.hpp"
#include "fedgoal/time_series.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

namespace fedgoal {

struct CsvSource {
    std::string path;
    std::string timestamp_column;
    std::vector<std::string> value_columns;
};

struct DataSource {
    std::optional<CsvSource> csv;
    std::optional<SynthConfig> synth; // exactly one of the two
};

struct ExperimentConfig {
    DataSource data;
    std::int64_t boundary = 0; // epoch seconds, train/test split point
    std::vector<std::pair<std::size_t, double>> grid; // (K, overlap ratio)
    MetricKind gp_metric = MetricKind::Smape;
    MlpHyperparams mlp;
    double holdout_fraction = 0.0; // 0 = score splits on their full local data
    std::string output_dir = "out";
    std::uint64_t master_seed = 0;
};

struct MetricsRow {
    double rmse = 0.0, mae = 0.0, mase = 0.0, smape = 0.0;
};

struct CellResult {
    std::size_t k_count = 0;
    double rho = 0.0;
    bool ok = false;
    std::string error;
    MetricsRow metrics;
    GpSolution solution;
    LossMatrix loss;
    std::vector<double> forecast;
    // per split: sum_j alpha_j L[j][k] vs the loss of the combined prediction
    std::vector<double> loss_combination;
    std::vector<double> combined_prediction_loss;
    std::vector<double> training_mse; // per model, for post-hoc inspection
};

struct ExperimentReport {
    TimeSeries train;
    TimeSeries test;
    MetricsRow baseline;
    std::vector<double> baseline_forecast;
    std::vector<CellResult> cells;
};

namespace detail {

inline std::size_t thread_cap() {
    if (const char *env = std::getenv("FEDGOAL_THREADS")) {
        const long v = std::atol(env);
        if (v > 0) return static_cast<std::size_t>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw ? hw : 1;
}

template <typename Fn>
void parallel_for(std::size_t n, Fn &&fn) {
    const std::size_t workers = std::min(thread_cap(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w)
        threads.emplace_back([&, w] {
            for (std::size_t i = w; i < n; i += workers) fn(i);
        });
    for (auto &t : threads) t.join();
}

inline MetricsRow all_metrics(std::span<const double> actual, std::span<const double> forecast,
                              std::span<const double> train_reference) {
    MetricsRow row;
    row.rmse = rmse(actual, forecast);
    row.mae = mae(actual, forecast);
    try {
        row.mase = mase(actual, forecast, train_reference);
    } catch (const DegenerateReference &) {
        // constant training series: the naive scaling is undefined, report
        // the unscaled MAE so the row stays finite
        row.mase = row.mae;
    }
    row.smape = smape(actual, forecast);
    return row;
}

inline std::string format_rho(double rho) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", rho);
    return buf;
}

} // namespace detail

inline TimeSeries load_input(const ExperimentConfig &config) {
    if (config.data.csv && config.data.synth)
        throw InvalidConfig("give either a csv or a synth data source, not both");
    if (config.data.csv)
        return load_series(config.data.csv->path, config.data.csv->timestamp_column,
                           config.data.csv->value_columns);
    if (config.data.synth) return synthesize_series(*config.data.synth);
    throw InvalidConfig("no data source configured");
}

/// One MLP on the undivided training set, recursive forecast over the
/// whole test horizon.
inline std::pair<MetricsRow, std::vector<double>> run_baseline(const TimeSeries &train_series,
                                                               const TimeSeries &test_series,
                                                               const ExperimentConfig &config) {
    MlpHyperparams hp = config.mlp;
    hp.seed = config.master_seed;
    const MlpParams model = train(make_supervised(train_series, hp.lag_count), hp);
    const std::size_t p = hp.lag_count;
    const std::vector<double> history(train_series.values.end() - static_cast<std::ptrdiff_t>(p),
                                      train_series.values.end());
    std::vector<double> forecast = predict_recursive(model, history, test_series.size());
    return {detail::all_metrics(test_series.values, forecast, train_series.values),
            std::move(forecast)};
}

inline CellResult run_cell(const TimeSeries &train_series, const TimeSeries &test_series,
                           const ExperimentConfig &config, std::size_t k_count, double rho) {
    CellResult cell;
    cell.k_count = k_count;
    cell.rho = rho;

    const std::size_t p = config.mlp.lag_count;
    const PartitionPlan plan = plan_partitions(train_series.size(), {k_count, rho});

    std::vector<MlpParams> models(k_count);
    std::vector<SupervisedSet> validation_sets(k_count);
    cell.training_mse.resize(k_count);
    std::vector<std::exception_ptr> failures(k_count);
    detail::parallel_for(k_count, [&](std::size_t k) {
        try {
            const auto &range = plan.ranges[k];
            const std::vector<double> local(
                train_series.values.begin() + static_cast<std::ptrdiff_t>(range.begin),
                train_series.values.begin() + static_cast<std::ptrdiff_t>(range.end));
            std::size_t fit_len = local.size();
            if (config.holdout_fraction > 0.0) {
                const auto held =
                    static_cast<std::size_t>(std::ceil(config.holdout_fraction *
                                                       static_cast<double>(local.size())));
                if (held + p + config.mlp.batch_size > local.size())
                    throw InsufficientData("holdout leaves too little data to fit on");
                fit_len = local.size() - held;
            }
            const std::vector<double> fit_values(local.begin(),
                                                 local.begin() + static_cast<std::ptrdiff_t>(fit_len));
            MlpHyperparams hp = config.mlp;
            hp.seed = config.master_seed + k;
            const SupervisedSet fit_set = make_supervised(fit_values, p);
            models[k] = train(fit_set, hp);
            cell.training_mse[k] = fedgoal::detail::training_mse(models[k], fit_set);
            if (config.holdout_fraction > 0.0) {
                // validation targets are exactly the held-out points
                const std::vector<double> val(local.begin() + static_cast<std::ptrdiff_t>(fit_len - p),
                                              local.end());
                validation_sets[k] = make_supervised(val, p);
            } else {
                validation_sets[k] = fit_set;
            }
        } catch (...) {
            failures[k] = std::current_exception();
        }
    });
    for (auto &f : failures)
        if (f) std::rethrow_exception(f);

    std::optional<std::span<const double>> reference;
    if (config.gp_metric == MetricKind::Mase)
        reference = std::span<const double>(train_series.values);
    cell.loss = build_loss_matrix(models, validation_sets, config.gp_metric, reference);
    cell.solution = solve_weights(cell.loss);

    const std::vector<double> history(train_series.values.end() - static_cast<std::ptrdiff_t>(p),
                                      train_series.values.end());
    cell.forecast = ensemble_predict(models, cell.solution.alpha, history, test_series.size());
    cell.metrics = detail::all_metrics(test_series.values, cell.forecast, train_series.values);

    // the GP constrains the convex combination of losses; also record the
    // loss of the combined prediction so the (Jensen) gap is visible
    cell.loss_combination.resize(k_count);
    cell.combined_prediction_loss.resize(k_count);
    for (std::size_t k = 0; k < k_count; ++k) {
        double comb = 0.0;
        for (std::size_t j = 0; j < k_count; ++j)
            comb += cell.solution.alpha[j] * cell.loss.values[j][k];
        cell.loss_combination[k] = comb;

        std::vector<double> mixed(validation_sets[k].size(), 0.0);
        for (std::size_t j = 0; j < k_count; ++j) {
            const auto preds = one_step_predictions(models[j], validation_sets[k]);
            for (std::size_t i = 0; i < preds.size(); ++i)
                mixed[i] += cell.solution.alpha[j] * preds[i];
        }
        cell.combined_prediction_loss[k] =
            evaluate(config.gp_metric, validation_sets[k].targets, mixed, reference);
    }
    cell.ok = true;
    return cell;
}

inline ExperimentReport run_experiment(const ExperimentConfig &config) {
    const TimeSeries series = load_input(config);
    auto [train, test] = split_train_test(series, config.boundary);

    ExperimentReport report;
    auto [baseline_row, baseline_forecast] = run_baseline(train, test, config);
    report.baseline = baseline_row;
    report.baseline_forecast = std::move(baseline_forecast);

    for (const auto &[k, rho] : config.grid) {
        try {
            report.cells.push_back(run_cell(train, test, config, k, rho));
        } catch (const std::exception &e) {
            CellResult failed;
            failed.k_count = k;
            failed.rho = rho;
            failed.ok = false;
            failed.error = e.what();
            report.cells.push_back(std::move(failed));
        }
    }
    report.train = std::move(train);
    report.test = std::move(test);
    return report;
}

namespace detail {

class CsvWriter {
public:
    explicit CsvWriter(const std::filesystem::path &path) : out_(path) {
        if (!out_) throw IoError("cannot write " + path.string());
    }
    void line(const std::string &s) { out_ << s << "\n"; }
    static std::string num(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        return buf;
    }
    static std::string fixed(double v) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.6f", v);
        return buf;
    }

private:
    std::ofstream out_;
};

inline std::string metrics_csv(const MetricsRow &m) {
    return CsvWriter::fixed(m.rmse) + "," + CsvWriter::fixed(m.mae) + "," +
           CsvWriter::fixed(m.mase) + "," + CsvWriter::fixed(m.smape);
}

} // namespace detail

/// Materializes the report: metric table sorted by SMAPE, per-cell ensemble
/// weights, loss heatmaps, forecast traces, and the K/rho sensitivity table.
inline void emit_outputs(const ExperimentReport &report, const std::string &directory) {
    namespace fs = std::filesystem;
    const fs::path dir(directory);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw IoError("cannot create " + directory);

    std::vector<const CellResult *> ok_cells;
    for (const auto &c : report.cells)
        if (c.ok) ok_cells.push_back(&c);
    std::stable_sort(ok_cells.begin(), ok_cells.end(),
                     [](const CellResult *a, const CellResult *b) {
                         return a->metrics.smape < b->metrics.smape;
                     });

    {
        detail::CsvWriter table(dir / "table1.csv");
        table.line("split,overlap,rmse,mae,mase,smape");
        for (const auto *c : ok_cells)
            table.line(std::to_string(c->k_count) + "," + detail::format_rho(c->rho) + "," +
                       detail::metrics_csv(c->metrics));
        table.line("baseline,," + detail::metrics_csv(report.baseline));
    }
    {
        detail::CsvWriter sens(dir / "sensitivity.csv");
        sens.line("split,overlap,smape");
        for (const auto &c : report.cells)
            if (c.ok)
                sens.line(std::to_string(c.k_count) + "," + detail::format_rho(c.rho) + "," +
                          detail::CsvWriter::fixed(c.metrics.smape));
        sens.line("baseline,," + detail::CsvWriter::fixed(report.baseline.smape));
    }
    {
        detail::CsvWriter base(dir / "forecast_baseline.csv");
        base.line("timestamp,actual,baseline");
        for (std::size_t i = 0; i < report.test.size(); ++i)
            base.line(detail::format_timestamp(report.test.timestamps[i]) + "," +
                      detail::CsvWriter::num(report.test.values[i]) + "," +
                      detail::CsvWriter::num(report.baseline_forecast[i]));
    }

    bool any_failed = false;
    for (const auto &c : report.cells) any_failed |= !c.ok;
    if (any_failed) {
        detail::CsvWriter errs(dir / "errors.csv");
        errs.line("split,overlap,error");
        for (const auto &c : report.cells)
            if (!c.ok)
                errs.line(std::to_string(c.k_count) + "," + detail::format_rho(c.rho) + ",\"" +
                          c.error + "\"");
    }

    for (const auto &c : report.cells) {
        if (!c.ok) continue;
        const std::string tag = "K" + std::to_string(c.k_count) + "_rho" + detail::format_rho(c.rho);
        {
            nlohmann::json j;
            j["alpha"] = c.solution.alpha;
            j["lambda"] = c.solution.lambda;
            j["delta_over"] = c.solution.delta_over;
            j["delta_under"] = c.solution.delta_under;
            j["metric"] = metric_name(c.loss.metric);
            j["loss_combination"] = c.loss_combination;
            j["combined_prediction_loss"] = c.combined_prediction_loss;
            j["training_mse"] = c.training_mse;
            std::ofstream out(dir / ("weights_" + tag + ".json"));
            if (!out) throw IoError("cannot write weights_" + tag + ".json");
            out << j.dump(2) << "\n";
        }
        {
            detail::CsvWriter heat(dir / ("loss_heatmap_" + tag + ".csv"));
            std::string header = "split";
            for (std::size_t j = 0; j < c.k_count; ++j) header += ",M" + std::to_string(j + 1);
            heat.line(header);
            for (std::size_t k = 0; k < c.k_count; ++k) {
                std::string row = std::to_string(k + 1);
                for (std::size_t j = 0; j < c.k_count; ++j)
                    row += "," + detail::CsvWriter::num(c.loss.values[j][k]);
                heat.line(row);
            }
        }
        {
            detail::CsvWriter fc(dir / ("forecast_" + tag + ".csv"));
            fc.line("timestamp,actual,baseline,ensemble");
            for (std::size_t i = 0; i < report.test.size(); ++i)
                fc.line(detail::format_timestamp(report.test.timestamps[i]) + "," +
                        detail::CsvWriter::num(report.test.values[i]) + "," +
                        detail::CsvWriter::num(report.baseline_forecast[i]) + "," +
                        detail::CsvWriter::num(c.forecast[i]));
        }
    }
}

} // namespace fedgoal
