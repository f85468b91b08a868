#include "hlsvr/hlsvr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace hlsvr {

Eigen::Index GroupedDataset::total_rows() const {
    Eigen::Index n = 0;
    for (const Group& g : groups)
        n += g.inputs_l.rows();
    return n;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> GroupedDataset::flatten() const {
    const Eigen::Index p = anchors.cols();
    const Eigen::Index q = groups.empty() ? 0 : groups.front().inputs_l.cols();
    const Eigen::Index n = total_rows();
    Eigen::MatrixXd rows(n, p + q);
    Eigen::VectorXd y(n);
    Eigen::Index at = 0;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const Group& g = groups[i];
        for (Eigen::Index r = 0; r < g.inputs_l.rows(); ++r) {
            rows.row(at).head(p) = anchors.row(static_cast<Eigen::Index>(i));
            rows.row(at).tail(q) = g.inputs_l.row(r);
            y[at++] = g.responses[r];
        }
    }
    return {std::move(rows), std::move(y)};
}

Box GroupedDataset::flat_bounds() const {
    Box b;
    b.lo.resize(bounds_s.dim() + bounds_l.dim());
    b.hi.resize(bounds_s.dim() + bounds_l.dim());
    b.lo << bounds_s.lo, bounds_l.lo;
    b.hi << bounds_s.hi, bounds_l.hi;
    return b;
}

void GroupedDataset::validate() const {
    if (anchors.rows() < 1)
        throw InvalidInput("grouped dataset: need at least one anchor");
    if (static_cast<Eigen::Index>(groups.size()) != anchors.rows())
        throw ShapeError("grouped dataset: anchor/group count mismatch");
    bounds_s.validate();
    bounds_l.validate();
    if (bounds_s.dim() != anchors.cols())
        throw ShapeError("grouped dataset: bounds_s dimension mismatch");
    if (!anchors.allFinite())
        throw InvalidInput("grouped dataset: non-finite anchor");

    Eigen::Index q = -1;
    for (std::size_t i = 0; i < groups.size(); ++i) {
        const Group& g = groups[i];
        if (g.inputs_l.rows() < 1)
            throw InvalidInput("grouped dataset: group " + std::to_string(i) +
                               " is empty");
        if (g.inputs_l.rows() != g.responses.size())
            throw ShapeError("grouped dataset: group " + std::to_string(i) +
                             " inputs/responses mismatch");
        if (q < 0)
            q = g.inputs_l.cols();
        else if (g.inputs_l.cols() != q)
            throw ShapeError("grouped dataset: inconsistent group dimension");
        if (!g.inputs_l.allFinite() || !g.responses.allFinite())
            throw InvalidInput("grouped dataset: non-finite entry in group " +
                               std::to_string(i));
    }
    if (bounds_l.dim() != q)
        throw ShapeError("grouped dataset: bounds_l dimension mismatch");

    // anchors must stay distinct after normalization; merging duplicates
    // silently would change the model class
    const Eigen::MatrixXd unit = AffineMap::to_unit(bounds_s).apply_rows(anchors);
    for (Eigen::Index i = 0; i < unit.rows(); ++i)
        for (Eigen::Index j = i + 1; j < unit.rows(); ++j)
            if ((unit.row(i) - unit.row(j)).lpNorm<Eigen::Infinity>() <= 1e-12)
                throw InvalidInput("grouped dataset: anchors " +
                                   std::to_string(i) + " and " +
                                   std::to_string(j) +
                                   " coincide after normalization");
}

namespace {

double resolve_high_theta(const Eigen::MatrixXd& anchors, const Box& bounds_s,
                          const HighLevelPolicy& policy) {
    if (policy.theta)
        return *policy.theta;
    const Eigen::Index m = anchors.rows();
    if (m < 3)
        return 1.0;
    const Eigen::MatrixXd unit = AffineMap::to_unit(bounds_s).apply_rows(anchors);
    std::vector<double> sq;
    sq.reserve(static_cast<std::size_t>(m * (m - 1) / 2));
    for (Eigen::Index i = 0; i < m; ++i)
        for (Eigen::Index j = i + 1; j < m; ++j)
            sq.push_back((unit.row(i) - unit.row(j)).squaredNorm());
    std::sort(sq.begin(), sq.end());
    const std::size_t h = sq.size() / 2;
    const double median =
        sq.size() % 2 == 1 ? sq[h] : 0.5 * (sq[h - 1] + sq[h]);
    return 1.0 / (2.0 * median);
}

int folds_for_group(Eigen::Index k, const TuningConfig& tuner) {
    // small groups cannot afford k-fold splits; fall back to leave-one-out
    if (k < 10)
        return static_cast<int>(k);
    return std::min<int>(tuner.folds, static_cast<int>(k));
}

} // namespace

HlsvrModel fit_hlsvr(const GroupedDataset& data, const TuningConfig& tuner,
                     HighLevelPolicy policy) {
    data.validate();
    tuner.validate();
    if (!(policy.gamma > 0.0) || !std::isfinite(policy.gamma))
        throw InvalidInput("fit_hlsvr: high-level gamma must be positive");

    HlsvrModel model;
    model.anchors = data.anchors;
    model.high_policy = policy;
    model.high_theta = resolve_high_theta(data.anchors, data.bounds_s, policy);
    model.bounds_s = data.bounds_s;
    model.bounds_l = data.bounds_l;

    const AffineMap low_map = AffineMap::to_unit(data.bounds_l);
    model.low_models.reserve(data.groups.size());
    for (std::size_t i = 0; i < data.groups.size(); ++i) {
        const Group& g = data.groups[i];
        try {
            double gamma, theta;
            if (g.inputs_l.rows() < 2) {
                gamma = tuner.fallback_gamma;
                theta = tuner.fallback_theta;
            } else {
                TuningConfig group_tuner = tuner;
                group_tuner.folds = folds_for_group(g.inputs_l.rows(), tuner);
                const GridSearchResult choice = grid_search_cv(
                    g.inputs_l, g.responses, group_tuner, low_map);
                gamma = choice.gamma;
                theta = choice.theta;
            }
            model.low_models.push_back(fit_lssvr(
                g.inputs_l, g.responses, gamma, KernelParams{theta}, low_map));
        } catch (const NumericFailure& e) {
            throw NumericFailure("fit_hlsvr: group " + std::to_string(i) + ": " +
                                     e.what(),
                                 e.condition_estimate());
        } catch (const TuningFailure& e) {
            throw TuningFailure("fit_hlsvr: group " + std::to_string(i) + ": " +
                                    e.what(),
                                e.cell_errors());
        }
    }
    return model;
}

namespace {

double predict_one(const HlsvrModel& model, const Eigen::VectorXd& query_s,
                   const Eigen::VectorXd& query_l) {
    const Eigen::Index m = model.anchor_count();
    Eigen::VectorXd low_predictions(m);
    for (Eigen::Index i = 0; i < m; ++i)
        low_predictions[i] = predict_lssvr(model.low_models[static_cast<std::size_t>(i)], query_l);

    const LssvrModel high = fit_lssvr(
        model.anchors, low_predictions, model.high_policy.gamma,
        KernelParams{model.high_theta}, AffineMap::to_unit(model.bounds_s));
    return predict_lssvr(high, query_s);
}

void check_query_dims(const HlsvrModel& model, Eigen::Index ds, Eigen::Index dl) {
    if (ds != model.dim_s())
        throw ShapeError("predict_hlsvr: query_s dimension mismatch");
    if (dl != model.dim_l())
        throw ShapeError("predict_hlsvr: query_l dimension mismatch");
}

} // namespace

double predict_hlsvr(const HlsvrModel& model, const Eigen::VectorXd& query_s,
                     const Eigen::VectorXd& query_l) {
    check_query_dims(model, query_s.size(), query_l.size());
    if (!query_s.allFinite() || !query_l.allFinite())
        throw InvalidInput("predict_hlsvr: non-finite query");
    return predict_one(model, query_s, query_l);
}

Eigen::VectorXd predict_batch_serial(const HlsvrModel& model,
                                     const Eigen::MatrixXd& queries_s,
                                     const Eigen::MatrixXd& queries_l) {
    if (queries_s.rows() != queries_l.rows())
        throw ShapeError("predict_batch: query row count mismatch");
    if (queries_s.rows() < 1)
        throw InvalidInput("predict_batch: empty query list");
    check_query_dims(model, queries_s.cols(), queries_l.cols());

    Eigen::VectorXd out(queries_s.rows());
    for (Eigen::Index r = 0; r < queries_s.rows(); ++r) {
        try {
            out[r] = predict_hlsvr(model, queries_s.row(r).transpose(),
                                   queries_l.row(r).transpose());
        } catch (const NumericFailure& e) {
            throw NumericFailure("predict_batch: query " + std::to_string(r) +
                                     ": " + e.what(),
                                 e.condition_estimate());
        } catch (const InvalidInput& e) {
            throw InvalidInput("predict_batch: query " + std::to_string(r) +
                               ": " + e.what());
        }
    }
    return out;
}

Eigen::VectorXd predict_batch(const HlsvrModel& model,
                              const Eigen::MatrixXd& queries_s,
                              const Eigen::MatrixXd& queries_l) {
    if (queries_s.rows() != queries_l.rows())
        throw ShapeError("predict_batch: query row count mismatch");
    if (queries_s.rows() < 1)
        throw InvalidInput("predict_batch: empty query list");
    check_query_dims(model, queries_s.cols(), queries_l.cols());

    const Eigen::Index nq = queries_s.rows();
    Eigen::VectorXd out(nq);
    std::vector<std::string> errors(static_cast<std::size_t>(nq));
    std::vector<char> is_numeric(static_cast<std::size_t>(nq), 0);
#pragma omp parallel for schedule(dynamic, 4) if (nq >= 16)
    for (Eigen::Index r = 0; r < nq; ++r) {
        try {
            out[r] = predict_hlsvr(model, queries_s.row(r).transpose(),
                                   queries_l.row(r).transpose());
        } catch (const NumericFailure& e) {
            errors[static_cast<std::size_t>(r)] = e.what();
            is_numeric[static_cast<std::size_t>(r)] = 1;
        } catch (const InvalidInput& e) {
            errors[static_cast<std::size_t>(r)] = e.what();
        }
    }
    // report the lowest failing index so the error does not depend on the
    // thread schedule
    for (Eigen::Index r = 0; r < nq; ++r) {
        if (errors[static_cast<std::size_t>(r)].empty())
            continue;
        const std::string msg =
            "predict_batch: query " + std::to_string(r) + ": " +
            errors[static_cast<std::size_t>(r)];
        if (is_numeric[static_cast<std::size_t>(r)])
            throw NumericFailure(msg);
        throw InvalidInput(msg);
    }
    return out;
}

} // namespace hlsvr
