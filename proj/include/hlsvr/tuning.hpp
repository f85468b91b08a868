#ifndef HLSVR_TUNING_HPP
#define HLSVR_TUNING_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "hlsvr/box.hpp"

namespace hlsvr {

/// Grid-search-with-CV settings for (gamma, theta) selection.
struct TuningConfig {
    std::vector<double> gamma_grid; // sorted, positive
    std::vector<double> theta_grid; // sorted, positive
    int folds = 5;
    std::uint64_t seed = 0; // fold shuffling

    // Used verbatim when a group is too small to cross-validate (k = 1).
    double fallback_gamma = 1e4;
    double fallback_theta = 1.0;

    static TuningConfig defaults();
    void validate() const;
};

struct GridSearchResult {
    double gamma = 0.0;
    double theta = 0.0;
    double cv_rmse = 0.0;
};

/// Exhaustive grid search minimizing mean out-of-fold RMSE. Folds are a
/// seeded shuffle into `config.folds` near-equal parts. Ties go to the
/// smaller gamma, then the smaller theta, independent of grid order.
GridSearchResult grid_search_cv(const Eigen::MatrixXd& inputs,
                                const Eigen::VectorXd& responses,
                                const TuningConfig& config,
                                const AffineMap& map);

GridSearchResult grid_search_cv(const Eigen::MatrixXd& inputs,
                                const Eigen::VectorXd& responses,
                                const TuningConfig& config);

/// Deterministic fold labels for n points: seeded shuffle, then round-robin
/// split into `folds` near-equal parts. Exposed for tests.
std::vector<int> cv_fold_labels(Eigen::Index n, int folds, std::uint64_t seed);

} // namespace hlsvr

#endif // HLSVR_TUNING_HPP
