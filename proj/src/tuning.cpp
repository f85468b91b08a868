#include "hlsvr/tuning.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "hlsvr/harness.hpp"
#include "hlsvr/lssvr.hpp"
#include "hlsvr/rng.hpp"

namespace hlsvr {

TuningConfig TuningConfig::defaults() {
    TuningConfig c;
    for (int e = 0; e <= 6; ++e)
        c.gamma_grid.push_back(std::pow(10.0, e));
    for (int e = -3; e <= 3; ++e)
        c.theta_grid.push_back(std::pow(10.0, e));
    return c;
}

void TuningConfig::validate() const {
    if (gamma_grid.empty() || theta_grid.empty())
        throw InvalidInput("tuning: empty hyperparameter grid");
    auto check_grid = [](const std::vector<double>& g, const char* name) {
        for (double v : g)
            if (!(v > 0.0) || !std::isfinite(v))
                throw InvalidInput(std::string("tuning: ") + name +
                                   " grid entries must be positive and finite");
        if (!std::is_sorted(g.begin(), g.end()))
            throw InvalidInput(std::string("tuning: ") + name +
                               " grid must be sorted ascending");
    };
    check_grid(gamma_grid, "gamma");
    check_grid(theta_grid, "theta");
    if (folds < 2)
        throw InvalidInput("tuning: folds must be >= 2");
    if (!(fallback_gamma > 0.0) || !(fallback_theta > 0.0))
        throw InvalidInput("tuning: fallback hyperparameters must be positive");
}

std::vector<int> cv_fold_labels(Eigen::Index n, int folds, std::uint64_t seed) {
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<int> labels(static_cast<std::size_t>(n));
    for (std::size_t pos = 0; pos < order.size(); ++pos)
        labels[static_cast<std::size_t>(order[pos])] =
            static_cast<int>(pos % static_cast<std::size_t>(folds));
    return labels;
}

namespace {

struct CellOutcome {
    bool ok = false;
    double cv_rmse = std::numeric_limits<double>::infinity();
    std::string error;
};

CellOutcome evaluate_cell(const Eigen::MatrixXd& inputs,
                          const Eigen::VectorXd& responses,
                          const std::vector<int>& labels, int folds,
                          double gamma, double theta, const AffineMap& map) {
    const Eigen::Index n = inputs.rows();
    CellOutcome out;
    double rmse_sum = 0.0;
    try {
        for (int f = 0; f < folds; ++f) {
            Eigen::Index n_test = 0;
            for (int l : labels)
                if (l == f) ++n_test;
            const Eigen::Index n_train = n - n_test;

            Eigen::MatrixXd train_x(n_train, inputs.cols());
            Eigen::VectorXd train_y(n_train);
            Eigen::MatrixXd test_x(n_test, inputs.cols());
            Eigen::VectorXd test_y(n_test);
            Eigen::Index it = 0, iv = 0;
            for (Eigen::Index r = 0; r < n; ++r) {
                if (labels[static_cast<std::size_t>(r)] == f) {
                    test_x.row(iv) = inputs.row(r);
                    test_y[iv++] = responses[r];
                } else {
                    train_x.row(it) = inputs.row(r);
                    train_y[it++] = responses[r];
                }
            }

            LssvrModel model =
                fit_lssvr(train_x, train_y, gamma, KernelParams{theta}, map);
            rmse_sum += rmse(test_y, predict_many_serial(model, test_x));
        }
        out.ok = true;
        out.cv_rmse = rmse_sum / static_cast<double>(folds);
    } catch (const NumericFailure& e) {
        out.error = e.what();
    }
    return out;
}

} // namespace

GridSearchResult grid_search_cv(const Eigen::MatrixXd& inputs,
                                const Eigen::VectorXd& responses,
                                const TuningConfig& config,
                                const AffineMap& map) {
    config.validate();
    const Eigen::Index n = inputs.rows();
    if (inputs.rows() != responses.size())
        throw ShapeError("grid_search_cv: inputs/responses row count mismatch");
    if (n < config.folds)
        throw InvalidInput("grid_search_cv: need n >= folds (" +
                           std::to_string(n) + " < " +
                           std::to_string(config.folds) + ")");

    const std::vector<int> labels = cv_fold_labels(n, config.folds, config.seed);

    const std::size_t n_gamma = config.gamma_grid.size();
    const std::size_t n_cells = n_gamma * config.theta_grid.size();
    std::vector<CellOutcome> cells(n_cells);

    const long cell_count = static_cast<long>(n_cells);
#pragma omp parallel for schedule(dynamic) if (cell_count > 1)
    for (long c = 0; c < cell_count; ++c) {
        const double gamma = config.gamma_grid[static_cast<std::size_t>(c) % n_gamma];
        const double theta =
            config.theta_grid[static_cast<std::size_t>(c) / n_gamma];
        cells[static_cast<std::size_t>(c)] = evaluate_cell(
            inputs, responses, labels, config.folds, gamma, theta, map);
    }

    // value-based selection: smallest CV RMSE, ties to smaller gamma then theta
    GridSearchResult best;
    bool found = false;
    std::vector<std::string> failures;
    for (std::size_t c = 0; c < n_cells; ++c) {
        const double gamma = config.gamma_grid[c % n_gamma];
        const double theta = config.theta_grid[c / n_gamma];
        if (!cells[c].ok) {
            failures.push_back("gamma=" + std::to_string(gamma) +
                               " theta=" + std::to_string(theta) + ": " +
                               cells[c].error);
            continue;
        }
        const GridSearchResult cand{gamma, theta, cells[c].cv_rmse};
        const bool better =
            !found || cand.cv_rmse < best.cv_rmse ||
            (cand.cv_rmse == best.cv_rmse &&
             (cand.gamma < best.gamma ||
              (cand.gamma == best.gamma && cand.theta < best.theta)));
        if (better) {
            best = cand;
            found = true;
        }
    }

    if (!found)
        throw TuningFailure("grid_search_cv: every grid cell failed",
                            std::move(failures));
    return best;
}

GridSearchResult grid_search_cv(const Eigen::MatrixXd& inputs,
                                const Eigen::VectorXd& responses,
                                const TuningConfig& config) {
    return grid_search_cv(inputs, responses, config,
                          AffineMap::identity(inputs.cols()));
}

} // namespace hlsvr
