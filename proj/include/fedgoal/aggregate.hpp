#pragma once

#include "fedgoal/errors.hpp"
#include "fedgoal/lp.hpp"
#include "fedgoal/metrics.hpp"
#include "fedgoal/mlp.hpp"

#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace fedgoal {

/// values[j][k] = metric of model j's one-step predictions on split k.
/// The diagonal supplies the goals: g_k = values[k][k].
struct LossMatrix {
    std::vector<std::vector<double>> values;
    MetricKind metric = MetricKind::Smape;
    bool maximize = false;

    std::size_t k_count() const { return values.size(); }

    void validate() const {
        if (values.empty()) throw MalformedLossMatrix("empty loss matrix");
        for (const auto &row : values) {
            if (row.size() != values.size()) throw MalformedLossMatrix("loss matrix not square");
            for (double v : row)
                if (!std::isfinite(v)) throw MalformedLossMatrix("non-finite loss entry");
        }
    }

    double goal(std::size_t k) const { return values[k][k]; }
};

struct GpSolution {
    std::vector<double> alpha;
    double lambda = 0.0;
    std::vector<double> delta_over;  // per-goal over-achievement
    std::vector<double> delta_under; // per-goal under-achievement
};

struct WeightedGpConfig {
    std::vector<double> weights_over;
    std::vector<double> weights_under;
};

inline std::vector<double> one_step_predictions(const MlpParams &model,
                                                const SupervisedSet &set) {
    std::vector<double> out;
    out.reserve(set.size());
    for (const auto &window : set.inputs) out.push_back(forward(model, window));
    return out;
}

inline LossMatrix build_loss_matrix(
    std::span<const MlpParams> models, std::span<const SupervisedSet> validation_sets,
    MetricKind metric, std::optional<std::span<const double>> train_reference = std::nullopt) {
    if (models.empty() || models.size() != validation_sets.size())
        throw MalformedLossMatrix("need one validation set per model");
    if (metric == MetricKind::Mase && !train_reference)
        throw MissingReference("mase loss matrix needs a training reference");
    for (const auto &set : validation_sets)
        if (set.size() == 0) throw EmptyValidationSet("empty validation split");

    const std::size_t K = models.size();
    LossMatrix loss;
    loss.metric = metric;
    loss.values.assign(K, std::vector<double>(K, 0.0));
    for (std::size_t j = 0; j < K; ++j)
        for (std::size_t k = 0; k < K; ++k) {
            const auto preds = one_step_predictions(models[j], validation_sets[k]);
            loss.values[j][k] = evaluate(metric, validation_sets[k].targets, preds, train_reference);
        }
    return loss;
}

/// Chebyshev GP as an equality-form LP. Variable layout:
///   [alpha_1..K, dplus_1..K, dminus_1..K, lambda, slack_1..K]
/// Rows: K deviation-cap rows, K goal rows, one simplex row.
/// For maximize-direction metrics the under-achievement takes the place of
/// the over-achievement in the cap rows.
inline LinearProgram build_chebyshev_gp(const LossMatrix &loss) {
    loss.validate();
    const std::size_t K = loss.k_count();
    const std::size_t n = 4 * K + 1;
    const std::size_t a0 = 0, dp0 = K, dm0 = 2 * K, lam = 3 * K, sl0 = 3 * K + 1;

    LinearProgram lp;
    lp.objective.assign(n, 0.0);
    lp.objective[lam] = 1.0;
    lp.constraint_matrix.assign(2 * K + 1, std::vector<double>(n, 0.0));
    lp.rhs.assign(2 * K + 1, 0.0);

    for (std::size_t k = 0; k < K; ++k) {
        // capped deviation <= lambda
        auto &cap = lp.constraint_matrix[k];
        cap[(loss.maximize ? dm0 : dp0) + k] = 1.0;
        cap[lam] = -1.0;
        cap[sl0 + k] = 1.0;
        // combined loss - dplus + dminus = goal
        auto &row = lp.constraint_matrix[K + k];
        for (std::size_t j = 0; j < K; ++j) row[a0 + j] = loss.values[j][k];
        row[dp0 + k] = -1.0;
        row[dm0 + k] = 1.0;
        lp.rhs[K + k] = loss.goal(k);
    }
    for (std::size_t j = 0; j < K; ++j) lp.constraint_matrix[2 * K][a0 + j] = 1.0;
    lp.rhs[2 * K] = 1.0;
    return lp;
}

namespace detail {

inline GpSolution extract_gp(const std::vector<double> &x, std::size_t K, double lambda) {
    GpSolution sol;
    sol.alpha.assign(x.begin(), x.begin() + static_cast<std::ptrdiff_t>(K));
    sol.delta_over.assign(x.begin() + static_cast<std::ptrdiff_t>(K),
                          x.begin() + static_cast<std::ptrdiff_t>(2 * K));
    sol.delta_under.assign(x.begin() + static_cast<std::ptrdiff_t>(2 * K),
                           x.begin() + static_cast<std::ptrdiff_t>(3 * K));
    sol.lambda = lambda;
    return sol;
}

} // namespace detail

/// Minimizes the maximum over-achievement across all split goals.
inline GpSolution solve_weights(const LossMatrix &loss) {
    const LinearProgram lp = build_chebyshev_gp(loss);
    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
        throw MalformedLossMatrix("chebyshev GP did not solve; construction defect");
    const std::size_t K = loss.k_count();
    return detail::extract_gp(sol.x, K, sol.x[3 * K]);
}

/// Classic weighted GP: same goal rows, objective sum of weighted
/// deviations. lambda in the result is max over-achievement, for
/// comparability with the Chebyshev variant.
inline GpSolution solve_weighted_gp(const LossMatrix &loss, const WeightedGpConfig &config) {
    loss.validate();
    const std::size_t K = loss.k_count();
    if (config.weights_over.size() != K || config.weights_under.size() != K)
        throw InvalidConfig("weight vectors must have length K");
    for (std::size_t k = 0; k < K; ++k)
        if (config.weights_over[k] < 0 || config.weights_under[k] < 0)
            throw InvalidConfig("GP weights must be non-negative");

    const std::size_t n = 3 * K;
    const std::size_t dp0 = K, dm0 = 2 * K;
    LinearProgram lp;
    lp.objective.assign(n, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        lp.objective[dp0 + k] = config.weights_over[k];
        lp.objective[dm0 + k] = config.weights_under[k];
    }
    lp.constraint_matrix.assign(K + 1, std::vector<double>(n, 0.0));
    lp.rhs.assign(K + 1, 0.0);
    for (std::size_t k = 0; k < K; ++k) {
        auto &row = lp.constraint_matrix[k];
        for (std::size_t j = 0; j < K; ++j) row[j] = loss.values[j][k];
        row[dp0 + k] = -1.0;
        row[dm0 + k] = 1.0;
        lp.rhs[k] = loss.goal(k);
    }
    for (std::size_t j = 0; j < K; ++j) lp.constraint_matrix[K][j] = 1.0;
    lp.rhs[K] = 1.0;

    const LpSolution sol = solve_lp(lp);
    if (sol.status != LpStatus::Optimal)
        throw MalformedLossMatrix("weighted GP did not solve; construction defect");
    double lambda = 0.0;
    for (std::size_t k = 0; k < K; ++k) lambda = std::max(lambda, sol.x[dp0 + k]);
    return detail::extract_gp(sol.x, K, lambda);
}

/// Convex-combination recursive forecast. The combined value is fed back
/// into the single shared lag window at every step.
inline std::vector<double> ensemble_predict(std::span<const MlpParams> models,
                                            std::span<const double> alpha,
                                            std::span<const double> history,
                                            std::size_t horizon) {
    if (models.empty() || models.size() != alpha.size())
        throw WeightSimplexViolation("one weight per model required");
    double sum = 0.0;
    for (double a : alpha) {
        if (a < 0) throw WeightSimplexViolation("negative ensemble weight");
        sum += a;
    }
    if (std::abs(sum - 1.0) > 1e-7)
        throw WeightSimplexViolation("ensemble weights must sum to 1");
    const std::size_t p = models.front().lag_count();
    for (const auto &m : models)
        if (m.lag_count() != p) throw HeterogeneousLagCounts("models disagree on lag count");
    if (history.size() != p)
        throw DimensionMismatch("history length must equal the shared lag count");

    std::vector<double> window(history.begin(), history.end());
    std::vector<double> out;
    out.reserve(horizon);
    for (std::size_t h = 0; h < horizon; ++h) {
        double y = 0.0;
        for (std::size_t k = 0; k < models.size(); ++k)
            y += alpha[k] * forward(models[k], window);
        out.push_back(y);
        window.erase(window.begin());
        window.push_back(y);
    }
    return out;
}

} // namespace fedgoal
