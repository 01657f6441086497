#pragma once

#include "fedgoal/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace fedgoal {

/// Uniformly spaced univariate series. Timestamps are epoch seconds.
struct TimeSeries {
    std::vector<std::int64_t> timestamps;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }

    std::int64_t step() const { return timestamps[1] - timestamps[0]; }

    void validate() const {
        if (timestamps.size() != values.size())
            throw LengthMismatch("timestamp/value count mismatch");
        if (size() < 2)
            throw SeriesTooShort("series needs at least 2 points");
        const std::int64_t dt = step();
        for (std::size_t i = 1; i < timestamps.size(); ++i) {
            const std::int64_t d = timestamps[i] - timestamps[i - 1];
            if (d == 0)
                throw DuplicateTimestamp("duplicate timestamp at row " + std::to_string(i));
            if (d < 0)
                throw NonUniformSpacing("timestamps not increasing at row " + std::to_string(i));
            if (d != dt)
                throw NonUniformSpacing("irregular spacing at row " + std::to_string(i));
        }
        for (double v : values)
            if (!std::isfinite(v)) throw NonFiniteValue("non-finite value in series");
    }
};

/// Lag-window regression view of a series: row i holds values[i..i+p),
/// target i is values[i+p].
struct SupervisedSet {
    std::vector<std::vector<double>> inputs;
    std::vector<double> targets;
    std::size_t lag_count = 0;

    std::size_t size() const { return targets.size(); }
};

struct SynthConfig {
    std::size_t length = 5000;
    std::size_t daily_period = 24;
    std::size_t weekly_period = 168;
    double trend_slope = 0.0;
    double noise_std = 0.0;
    double daily_amplitude = 10.0;
    double weekly_amplitude = 5.0;
    std::uint64_t seed = 0;
};

namespace detail {

// Howard Hinnant's days-from-civil; avoids timezone machinery.
inline std::int64_t days_from_civil(int y, int m, int d) {
    y -= m <= 2;
    const int era = (y >= 0 ? y : y - 399) / 400;
    const unsigned yoe = static_cast<unsigned>(y - era * 400);
    const unsigned doy = (153u * (m + (m > 2 ? -3 : 9)) + 2) / 5 + d - 1;
    const unsigned doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return static_cast<std::int64_t>(era) * 146097 + static_cast<std::int64_t>(doe) - 719468;
}

inline std::int64_t parse_timestamp(const std::string &text) {
    // ISO-8601 YYYY-MM-DDTHH:MM:SS, or plain integer epoch seconds.
    int y, mo, d, h, mi, s;
    char sep;
    if (std::sscanf(text.c_str(), "%d-%d-%d%c%d:%d:%d", &y, &mo, &d, &sep, &h, &mi, &s) == 7 &&
        (sep == 'T' || sep == ' ')) {
        if (mo < 1 || mo > 12 || d < 1 || d > 31 || h > 23 || mi > 59 || s > 60)
            throw UnparseableTimestamp("out-of-range datetime fields: " + text);
        return days_from_civil(y, mo, d) * 86400 + h * 3600 + mi * 60 + s;
    }
    try {
        std::size_t pos = 0;
        const std::int64_t epoch = std::stoll(text, &pos);
        if (pos == text.size()) return epoch;
    } catch (const std::exception &) {
    }
    throw UnparseableTimestamp("cannot parse timestamp: " + text);
}

inline std::string format_timestamp(std::int64_t epoch) {
    std::int64_t days = epoch / 86400;
    std::int64_t sod = epoch % 86400;
    if (sod < 0) {
        sod += 86400;
        --days;
    }
    // civil-from-days, inverse of the above.
    days += 719468;
    const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
    const unsigned doe = static_cast<unsigned>(days - era * 146097);
    const unsigned yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t y = static_cast<std::int64_t>(yoe) + era * 400;
    const unsigned doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const unsigned mp = (5 * doy + 2) / 153;
    const unsigned d = doy - (153 * mp + 2) / 5 + 1;
    const unsigned m = mp + (mp < 10 ? 3 : -9);
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%04lld-%02u-%02uT%02lld:%02lld:%02lld",
                  static_cast<long long>(y + (m <= 2)), m, d,
                  static_cast<long long>(sod / 3600), static_cast<long long>(sod / 60 % 60),
                  static_cast<long long>(sod % 60));
    return buf;
}

inline std::vector<std::string> split_csv_line(const std::string &line) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

} // namespace detail

/// Reads a CSV with a header row. When several value columns are given their
/// per-row sum becomes the series value (zonal loads reduced to a total).
inline TimeSeries load_series(const std::string &path, const std::string &timestamp_column,
                              const std::vector<std::string> &value_columns) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open " + path);
    std::string line;
    if (!std::getline(in, line)) throw IoError("empty file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    const auto header = detail::split_csv_line(line);
    auto column_index = [&](const std::string &name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) throw MissingColumn("column not found: " + name);
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t ts_col = column_index(timestamp_column);
    std::vector<std::size_t> val_cols;
    for (const auto &name : value_columns) val_cols.push_back(column_index(name));
    if (val_cols.empty()) throw MissingColumn("no value column given");

    std::vector<std::pair<std::int64_t, double>> rows;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = detail::split_csv_line(line);
        if (fields.size() <= ts_col) throw MissingColumn("short row in " + path);
        double total = 0.0;
        for (std::size_t c : val_cols) {
            if (fields.size() <= c) throw MissingColumn("short row in " + path);
            char *end = nullptr;
            const double v = std::strtod(fields[c].c_str(), &end);
            if (end == fields[c].c_str() || !std::isfinite(v))
                throw NonFiniteValue("bad value '" + fields[c] + "' in " + path);
            total += v;
        }
        rows.emplace_back(detail::parse_timestamp(fields[ts_col]), total);
    }
    std::stable_sort(rows.begin(), rows.end(),
                     [](const auto &a, const auto &b) { return a.first < b.first; });

    TimeSeries series;
    series.timestamps.reserve(rows.size());
    series.values.reserve(rows.size());
    for (const auto &[t, v] : rows) {
        series.timestamps.push_back(t);
        series.values.push_back(v);
    }
    series.validate();
    return series;
}

inline TimeSeries load_series(const std::string &path, const std::string &timestamp_column,
                              const std::string &value_column) {
    return load_series(path, timestamp_column, std::vector<std::string>{value_column});
}

/// Trend + daily/weekly sinusoids + Gaussian noise, hourly stamps from
/// epoch 0. Base level is the constant 100; default amplitudes 10 / 5.
inline TimeSeries synthesize_series(const SynthConfig &config) {
    if (config.length == 0) throw InvalidConfig("length must be positive");
    if (config.noise_std < 0) throw InvalidConfig("noise_std must be >= 0");
    if (config.daily_period <= 1 || config.weekly_period <= 1)
        throw InvalidConfig("periods must be > 1");

    constexpr double kBase = 100.0;
    const double kDailyAmp = config.daily_amplitude;
    const double kWeeklyAmp = config.weekly_amplitude;

    std::mt19937_64 rng(config.seed);
    std::normal_distribution<double> noise(0.0, config.noise_std > 0 ? config.noise_std : 1.0);

    TimeSeries series;
    series.timestamps.reserve(config.length);
    series.values.reserve(config.length);
    const double two_pi = 2.0 * std::numbers::pi;
    for (std::size_t t = 0; t < config.length; ++t) {
        double v = kBase + config.trend_slope * static_cast<double>(t) +
                   kDailyAmp * std::sin(two_pi * static_cast<double>(t) /
                                        static_cast<double>(config.daily_period)) +
                   kWeeklyAmp * std::sin(two_pi * static_cast<double>(t) /
                                         static_cast<double>(config.weekly_period));
        if (config.noise_std > 0) v += noise(rng);
        series.timestamps.push_back(static_cast<std::int64_t>(t) * 3600);
        series.values.push_back(v);
    }
    return series;
}

/// Train gets every point stamped <= boundary; test gets the rest.
inline std::pair<TimeSeries, TimeSeries> split_train_test(const TimeSeries &series,
                                                          std::int64_t boundary) {
    if (boundary < series.timestamps.front() || boundary >= series.timestamps.back())
        throw BoundaryOutOfRange("boundary outside the series time range");
    TimeSeries train, test;
    for (std::size_t i = 0; i < series.size(); ++i) {
        auto &part = series.timestamps[i] <= boundary ? train : test;
        part.timestamps.push_back(series.timestamps[i]);
        part.values.push_back(series.values[i]);
    }
    return {std::move(train), std::move(test)};
}

inline SupervisedSet make_supervised(const TimeSeries &series, std::size_t lag_count) {
    if (lag_count < 1) throw InvalidConfig("lag_count must be >= 1");
    if (series.size() <= lag_count)
        throw SeriesTooShort("series length must exceed lag_count");
    SupervisedSet set;
    set.lag_count = lag_count;
    const std::size_t samples = series.size() - lag_count;
    set.inputs.reserve(samples);
    set.targets.reserve(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        set.inputs.emplace_back(series.values.begin() + static_cast<std::ptrdiff_t>(i),
                                series.values.begin() + static_cast<std::ptrdiff_t>(i + lag_count));
        set.targets.push_back(series.values[i + lag_count]);
    }
    return set;
}

inline SupervisedSet make_supervised(const std::vector<double> &values, std::size_t lag_count) {
    if (lag_count < 1) throw InvalidConfig("lag_count must be >= 1");
    if (values.size() <= lag_count)
        throw SeriesTooShort("series length must exceed lag_count");
    SupervisedSet set;
    set.lag_count = lag_count;
    for (std::size_t i = 0; i + lag_count < values.size(); ++i) {
        set.inputs.emplace_back(values.begin() + static_cast<std::ptrdiff_t>(i),
                                values.begin() + static_cast<std::ptrdiff_t>(i + lag_count));
        set.targets.push_back(values[i + lag_count]);
    }
    return set;
}

} // namespace fedgoal
