#ifndef HLSVR_HLSVR_HPP
#define HLSVR_HLSVR_HPP

#include <Eigen/Dense>
#include <optional>
#include <utility>
#include <vector>

#include "hlsvr/box.hpp"
#include "hlsvr/lssvr.hpp"
#include "hlsvr/tuning.hpp"

namespace hlsvr {

/// One anchor's large-sample block.
struct Group {
    Eigen::MatrixXd inputs_l; // k x q
    Eigen::VectorXd responses; // k
};

/// Training data as m groups: anchor i in the small-sample space paired with
/// its own large-sample design and responses.
struct GroupedDataset {
    Eigen::MatrixXd anchors; // m x p
    std::vector<Group> groups; // size m
    Box bounds_s;
    Box bounds_l;

    Eigen::Index anchor_count() const { return anchors.rows(); }
    Eigen::Index total_rows() const;

    /// Rows (anchor_i ++ x_l, y) over all groups, dimension p + q.
    std::pair<Eigen::MatrixXd, Eigen::VectorXd> flatten() const;

    /// Concatenated bounds_s ++ bounds_l for the flattened space.
    Box flat_bounds() const;

    void validate() const;
};

/// Hyperparameters of the query-time high-level fit. When `theta` is unset
/// it is resolved at fit time as 1 / (2 * median pairwise squared distance)
/// over the normalized anchors (theta = 1 for fewer than 3 anchors).
struct HighLevelPolicy {
    double gamma = 1e4;
    std::optional<double> theta;
};

/// m low-level LS-SVR models keyed by their anchors. The high-level model is
/// intentionally absent: its targets are the low-level predictions at the
/// query's large-sample coordinates, so it is refit per query.
struct HlsvrModel {
    Eigen::MatrixXd anchors; // m x p, raw coordinates
    std::vector<LssvrModel> low_models;
    HighLevelPolicy high_policy;
    double high_theta = 1.0; // resolved value used by the per-query fit
    Box bounds_s;
    Box bounds_l;

    Eigen::Index anchor_count() const { return anchors.rows(); }
    Eigen::Index dim_s() const { return anchors.cols(); }
    Eigen::Index dim_l() const {
        return low_models.empty() ? 0 : low_models.front().dim();
    }
};

/// Tunes and fits one low-level model per group. Groups with k >= 10 use
/// `tuner.folds`-fold CV, 2 <= k < 10 use leave-one-out, k = 1 uses the
/// tuner's fixed fallback values.
HlsvrModel fit_hlsvr(const GroupedDataset& data, const TuningConfig& tuner,
                     HighLevelPolicy policy = {});

/// Two-level prediction: low-level predictions at query_l become the targets
/// of a fresh high-level fit over the anchors, evaluated at query_s.
double predict_hlsvr(const HlsvrModel& model, const Eigen::VectorXd& query_s,
                     const Eigen::VectorXd& query_l);

/// Row-matched batch of (query_s, query_l) pairs; OpenMP-parallel over
/// queries, elementwise identical to predict_hlsvr.
Eigen::VectorXd predict_batch(const HlsvrModel& model,
                              const Eigen::MatrixXd& queries_s,
                              const Eigen::MatrixXd& queries_l);

/// Serial reference for predict_batch; bit-identical output.
Eigen::VectorXd predict_batch_serial(const HlsvrModel& model,
                                     const Eigen::MatrixXd& queries_s,
                                     const Eigen::MatrixXd& queries_l);

} // namespace hlsvr

#endif // HLSVR_HLSVR_HPP
