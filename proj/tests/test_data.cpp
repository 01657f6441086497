#include "fedgoal/time_series.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <random>

using namespace fedgoal;

namespace {

std::string write_temp_csv(const std::string &name, const std::string &content) {
    const std::string path = std::string("/tmp/fedgoal_test_") + name;
    std::ofstream out(path);
    out << content;
    return path;
}

} // namespace

TEST_CASE("load_series reads an hourly csv") {
    const auto path = write_temp_csv("basic.csv",
                                     "ts,load\n"
                                     "2020-01-01T00:00:00,1\n"
                                     "2020-01-01T01:00:00,2\n"
                                     "2020-01-01T02:00:00,3\n");
    const TimeSeries s = load_series(path, "ts", "load");
    REQUIRE(s.size() == 3);
    CHECK(s.values == std::vector<double>{1, 2, 3});
    CHECK(s.step() == 3600);
}

TEST_CASE("load_series accepts epoch-second timestamps and sorts rows") {
    const auto path = write_temp_csv("epoch.csv",
                                     "ts,load\n7200,3\n0,1\n3600,2\n");
    const TimeSeries s = load_series(path, "ts", "load");
    CHECK(s.values == std::vector<double>{1, 2, 3});
}

TEST_CASE("load_series sums multiple value columns") {
    const auto path = write_temp_csv("zones.csv",
                                     "ts,z1,z2\n0,1,10\n3600,2,20\n");
    const TimeSeries s = load_series(path, "ts", std::vector<std::string>{"z1", "z2"});
    CHECK(s.values == std::vector<double>{11, 22});
}

TEST_CASE("load_series rejects a missing hour") {
    const auto path = write_temp_csv("gap.csv",
                                     "ts,load\n0,1\n3600,2\n10800,3\n");
    CHECK_THROWS_AS(load_series(path, "ts", "load"), NonUniformSpacing);
}

TEST_CASE("load_series rejects NaN values") {
    const auto path = write_temp_csv("nan.csv", "ts,load\n0,1\n3600,NaN\n");
    CHECK_THROWS_AS(load_series(path, "ts", "load"), NonFiniteValue);
}

TEST_CASE("load_series rejects duplicate timestamps") {
    const auto path = write_temp_csv("dup.csv", "ts,load\n0,1\n0,2\n3600,3\n");
    CHECK_THROWS_AS(load_series(path, "ts", "load"), DuplicateTimestamp);
}

TEST_CASE("load_series rejects missing columns and bad stamps") {
    const auto path = write_temp_csv("cols.csv", "ts,load\n0,1\n3600,2\n");
    CHECK_THROWS_AS(load_series(path, "nope", "load"), MissingColumn);
    CHECK_THROWS_AS(load_series(path, "ts", "nope"), MissingColumn);
    const auto bad = write_temp_csv("badts.csv", "ts,load\nyesterday,1\n");
    CHECK_THROWS_AS(load_series(bad, "ts", "load"), UnparseableTimestamp);
}

TEST_CASE("synthesize_series with all variation disabled is constant") {
    SynthConfig cfg;
    cfg.length = 50;
    cfg.daily_amplitude = 0.0;
    cfg.weekly_amplitude = 0.0;
    const TimeSeries s = synthesize_series(cfg);
    for (double v : s.values) CHECK(v == 100.0);
}

TEST_CASE("synthesize_series is deterministic per seed") {
    SynthConfig cfg;
    cfg.length = 200;
    cfg.noise_std = 3.0;
    cfg.seed = 42;
    const TimeSeries a = synthesize_series(cfg);
    const TimeSeries b = synthesize_series(cfg);
    CHECK(a.values == b.values);
    cfg.seed = 43;
    const TimeSeries c = synthesize_series(cfg);
    CHECK(a.values != c.values);
}

TEST_CASE("noiseless synthetic series repeats over the joint period up to trend") {
    SynthConfig cfg;
    cfg.length = 60;
    cfg.daily_period = 4;
    cfg.weekly_period = 6;
    cfg.trend_slope = 0.5;
    const TimeSeries s = synthesize_series(cfg);
    const std::size_t joint = 12; // lcm(4, 6)
    for (std::size_t t = 0; t + joint < s.size(); ++t)
        CHECK(s.values[t + joint] - s.values[t] ==
              Catch::Approx(cfg.trend_slope * static_cast<double>(joint)).margin(1e-9));
}

TEST_CASE("synthesize_series validates its config") {
    SynthConfig cfg;
    cfg.length = 0;
    CHECK_THROWS_AS(synthesize_series(cfg), InvalidConfig);
    cfg.length = 10;
    cfg.noise_std = -1;
    CHECK_THROWS_AS(synthesize_series(cfg), InvalidConfig);
    cfg.noise_std = 0;
    cfg.daily_period = 1;
    CHECK_THROWS_AS(synthesize_series(cfg), InvalidConfig);
}

TEST_CASE("split_train_test honors the boundary") {
    SynthConfig cfg;
    cfg.length = 10;
    const TimeSeries s = synthesize_series(cfg);
    const auto [train, test] = split_train_test(s, s.timestamps[6]);
    CHECK(train.size() == 7);
    CHECK(test.size() == 3);
    CHECK(train.size() + test.size() == s.size());

    CHECK_THROWS_AS(split_train_test(s, s.timestamps.front() - 1), BoundaryOutOfRange);
    CHECK_THROWS_AS(split_train_test(s, s.timestamps.back()), BoundaryOutOfRange);
}

TEST_CASE("paper-style date split yields a 2879-step horizon") {
    // hourly stamps from 2016-12-01T00:00 to 2017-04-30T22:00
    TimeSeries s;
    const std::int64_t start = detail::parse_timestamp("2016-12-01T00:00:00");
    const std::int64_t last = detail::parse_timestamp("2017-04-30T22:00:00");
    for (std::int64_t t = start; t <= last; t += 3600) {
        s.timestamps.push_back(t);
        s.values.push_back(1.0);
    }
    const auto boundary = detail::parse_timestamp("2016-12-31T23:59:59");
    const auto [train, test] = split_train_test(s, boundary);
    CHECK(test.timestamps.front() == detail::parse_timestamp("2017-01-01T00:00:00"));
    CHECK(test.size() == 2879);
}

TEST_CASE("make_supervised windows the series") {
    TimeSeries s;
    for (int i = 0; i < 4; ++i) {
        s.timestamps.push_back(i * 3600);
        s.values.push_back(i + 1.0);
    }
    const SupervisedSet set = make_supervised(s, 2);
    REQUIRE(set.size() == 2);
    CHECK(set.inputs[0] == std::vector<double>{1, 2});
    CHECK(set.inputs[1] == std::vector<double>{2, 3});
    CHECK(set.targets == std::vector<double>{3, 4});
}

TEST_CASE("make_supervised boundary cases") {
    SynthConfig cfg;
    cfg.length = 5;
    const TimeSeries s5 = synthesize_series(cfg);
    CHECK_THROWS_AS(make_supervised(s5, 5), SeriesTooShort);
    cfg.length = 100;
    const TimeSeries s100 = synthesize_series(cfg);
    CHECK(make_supervised(s100, 24).size() == 76);
}

TEST_CASE("make_supervised round-trips the series") {
    SynthConfig cfg;
    cfg.length = 120;
    cfg.noise_std = 2.0;
    cfg.seed = 7;
    const TimeSeries s = synthesize_series(cfg);
    const std::size_t p = 9;
    const SupervisedSet set = make_supervised(s, p);
    std::vector<double> rebuilt(s.values.begin(), s.values.begin() + p);
    rebuilt.insert(rebuilt.end(), set.targets.begin(), set.targets.end());
    CHECK(rebuilt == s.values);
}

TEST_CASE("split_train_test partitions without loss for random boundaries") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        SynthConfig cfg;
        cfg.length = 20 + rng() % 100;
        cfg.noise_std = 1.0;
        cfg.seed = rng();
        const TimeSeries s = synthesize_series(cfg);
        const std::size_t cut = 1 + rng() % (s.size() - 2);
        const auto [train, test] = split_train_test(s, s.timestamps[cut]);
        REQUIRE(train.size() + test.size() == s.size());
        std::vector<double> cat = train.values;
        cat.insert(cat.end(), test.values.begin(), test.values.end());
        CHECK(cat == s.values);
    }
}
