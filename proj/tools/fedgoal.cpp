#include "fedgoal/config.hpp"
#include "fedgoal/harness.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>

namespace {

void print_row(const char *label, const fedgoal::MetricsRow &row) {
    std::printf("%-18s rmse=%-12.4f mae=%-12.4f mase=%-8.4f smape=%.4f\n", label, row.rmse,
                row.mae, row.mase, row.smape);
}

int run_command(const std::string &config_path, bool baseline_only) {
    fedgoal::ExperimentConfig cfg;
    try {
        cfg = fedgoal::load_experiment_config(config_path);
    } catch (const std::exception &e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 1;
    }
    try {
        if (baseline_only) cfg.grid.clear();
        const fedgoal::ExperimentReport report = fedgoal::run_experiment(cfg);
        print_row("baseline", report.baseline);
        for (const auto &cell : report.cells) {
            char label[64];
            std::snprintf(label, sizeof(label), "K=%zu rho=%g", cell.k_count, cell.rho);
            if (cell.ok)
                print_row(label, cell.metrics);
            else
                std::printf("%-18s FAILED: %s\n", label, cell.error.c_str());
        }
        fedgoal::emit_outputs(report, cfg.output_dir);
        std::printf("outputs written to %s\n", cfg.output_dir.c_str());
        return 0;
    } catch (const std::exception &e) {
        std::fprintf(stderr, "run failed: %s\n", e.what());
        return 2;
    }
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"federated goal-programming forecaster"};
    app.require_subcommand(1);

    std::string config_path;
    auto *run = app.add_subcommand("run", "run the full experiment grid from a config file");
    run->add_option("--config", config_path, "JSON experiment config")->required();

    auto *baseline = app.add_subcommand("baseline", "run only the full-dataset baseline model");
    baseline->add_option("--config", config_path, "JSON experiment config")->required();

    auto *synth = app.add_subcommand("synth", "emit a synthetic hourly series as CSV");
    std::string out_path;
    fedgoal::SynthConfig synth_cfg;
    synth->add_option("--out", out_path, "output CSV path")->required();
    synth->add_option("--length", synth_cfg.length, "number of hourly samples");
    synth->add_option("--daily-period", synth_cfg.daily_period, "daily cycle length in samples");
    synth->add_option("--weekly-period", synth_cfg.weekly_period, "weekly cycle length in samples");
    synth->add_option("--trend", synth_cfg.trend_slope, "per-step drift");
    synth->add_option("--noise", synth_cfg.noise_std, "gaussian noise standard deviation");
    synth->add_option("--seed", synth_cfg.seed, "rng seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (*run) return run_command(config_path, false);
    if (*baseline) return run_command(config_path, true);
    if (*synth) {
        try {
            const fedgoal::TimeSeries series = fedgoal::synthesize_series(synth_cfg);
            std::ofstream out(out_path);
            if (!out) throw fedgoal::IoError("cannot write " + out_path);
            out << "timestamp,value\n";
            for (std::size_t i = 0; i < series.size(); ++i) {
                char buf[40];
                std::snprintf(buf, sizeof(buf), "%.17g", series.values[i]);
                out << fedgoal::detail::format_timestamp(series.timestamps[i]) << "," << buf
                    << "\n";
            }
            return 0;
        } catch (const fedgoal::InvalidConfig &e) {
            std::fprintf(stderr, "config error: %s\n", e.what());
            return 1;
        } catch (const std::exception &e) {
            std::fprintf(stderr, "failed: %s\n", e.what());
            return 2;
        }
    }
    return 1;
}
