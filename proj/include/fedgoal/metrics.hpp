#pragma once

#include "fedgoal/errors.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fedgoal {

enum class MetricKind { Rmse, Mae, Mase, Smape };

inline std::string metric_name(MetricKind kind) {
    switch (kind) {
        case MetricKind::Rmse: return "rmse";
        case MetricKind::Mae: return "mae";
        case MetricKind::Mase: return "mase";
        case MetricKind::Smape: return "smape";
    }
    return "?";
}

inline MetricKind metric_from_name(const std::string &name) {
    if (name == "rmse") return MetricKind::Rmse;
    if (name == "mae") return MetricKind::Mae;
    if (name == "mase") return MetricKind::Mase;
    if (name == "smape") return MetricKind::Smape;
    throw InvalidConfig("unknown metric: " + name);
}

namespace detail {
inline void check_pair(std::span<const double> actual, std::span<const double> forecast) {
    if (actual.size() != forecast.size())
        throw LengthMismatch("actual/forecast length mismatch");
    if (actual.empty()) throw EmptyInput("empty metric input");
}
} // namespace detail

inline double rmse(std::span<const double> actual, std::span<const double> forecast) {
    detail::check_pair(actual, forecast);
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double e = actual[i] - forecast[i];
        sum += e * e;
    }
    return std::sqrt(sum / static_cast<double>(actual.size()));
}

inline double mae(std::span<const double> actual, std::span<const double> forecast) {
    detail::check_pair(actual, forecast);
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) sum += std::abs(actual[i] - forecast[i]);
    return sum / static_cast<double>(actual.size());
}

/// Out-of-sample MAE scaled by the in-sample one-step naive MAE of the
/// training series.
inline double mase(std::span<const double> actual, std::span<const double> forecast,
                   std::span<const double> train_reference) {
    detail::check_pair(actual, forecast);
    if (train_reference.size() < 2)
        throw DegenerateReference("reference needs at least 2 points");
    double naive = 0.0;
    for (std::size_t t = 1; t < train_reference.size(); ++t)
        naive += std::abs(train_reference[t] - train_reference[t - 1]);
    naive /= static_cast<double>(train_reference.size() - 1);
    if (naive <= 0.0)
        throw DegenerateReference("constant reference series, zero naive error");
    return mae(actual, forecast) / naive;
}

/// Bounded in [0, 2]; terms where |y| + |yhat| = 0 contribute 0.
inline double smape(std::span<const double> actual, std::span<const double> forecast) {
    detail::check_pair(actual, forecast);
    double sum = 0.0;
    for (std::size_t i = 0; i < actual.size(); ++i) {
        const double denom = (std::abs(actual[i]) + std::abs(forecast[i])) / 2.0;
        if (denom > 0.0) sum += std::abs(actual[i] - forecast[i]) / denom;
    }
    return sum / static_cast<double>(actual.size());
}

inline double evaluate(MetricKind kind, std::span<const double> actual,
                       std::span<const double> forecast,
                       std::optional<std::span<const double>> train_reference = std::nullopt) {
    switch (kind) {
        case MetricKind::Rmse: return rmse(actual, forecast);
        case MetricKind::Mae: return mae(actual, forecast);
        case MetricKind::Smape: return smape(actual, forecast);
        case MetricKind::Mase:
            if (!train_reference) throw MissingReference("mase needs a training reference");
            return mase(actual, forecast, *train_reference);
    }
    throw InvalidConfig("unknown metric kind");
}

} // namespace fedgoal
