#ifndef HLSVR_BOX_HPP
#define HLSVR_BOX_HPP

#include <Eigen/Dense>
#include <cmath>
#include <utility>
#include <vector>

#include "hlsvr/errors.hpp"

namespace hlsvr {

/// Axis-aligned box of per-dimension (lo, hi) bounds.
struct Box {
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;

    static Box from_pairs(const std::vector<std::pair<double, double>>& pairs) {
        Box b;
        b.lo.resize(static_cast<Eigen::Index>(pairs.size()));
        b.hi.resize(static_cast<Eigen::Index>(pairs.size()));
        for (std::size_t i = 0; i < pairs.size(); ++i) {
            b.lo[static_cast<Eigen::Index>(i)] = pairs[i].first;
            b.hi[static_cast<Eigen::Index>(i)] = pairs[i].second;
        }
        return b;
    }

    static Box unit(Eigen::Index d) {
        Box b;
        b.lo = Eigen::VectorXd::Zero(d);
        b.hi = Eigen::VectorXd::Ones(d);
        return b;
    }

    Eigen::Index dim() const { return lo.size(); }

    void validate() const {
        if (lo.size() != hi.size())
            throw ShapeError("box: lo/hi dimension mismatch");
        if (lo.size() < 1)
            throw InvalidInput("box: dimension must be >= 1");
        for (Eigen::Index i = 0; i < lo.size(); ++i) {
            if (!std::isfinite(lo[i]) || !std::isfinite(hi[i]))
                throw InvalidInput("box: non-finite bound");
            if (!(lo[i] < hi[i]))
                throw InvalidInput("box: degenerate bounds (lo >= hi) in dimension " +
                                   std::to_string(i));
        }
    }
};

/// Affine map x -> (x - lo) / (hi - lo) onto the unit cube. Dimensions with
/// zero span (possible when bounds come from data) map to 0.
class AffineMap {
public:
    AffineMap() = default;

    static AffineMap identity(Eigen::Index d) {
        AffineMap m;
        m.lo_ = Eigen::VectorXd::Zero(d);
        m.inv_span_ = Eigen::VectorXd::Ones(d);
        return m;
    }

    static AffineMap to_unit(const Box& box) {
        box.validate();
        AffineMap m;
        m.lo_ = box.lo;
        m.inv_span_ = (box.hi - box.lo).cwiseInverse();
        return m;
    }

    /// Column-wise min/max of a data matrix; constant columns get span 0.
    static AffineMap from_data(const Eigen::MatrixXd& rows) {
        AffineMap m;
        m.lo_ = rows.colwise().minCoeff();
        Eigen::VectorXd span = rows.colwise().maxCoeff().transpose() - m.lo_;
        m.inv_span_.resize(span.size());
        for (Eigen::Index i = 0; i < span.size(); ++i)
            m.inv_span_[i] = span[i] > 0.0 ? 1.0 / span[i] : 0.0;
        return m;
    }

    Eigen::Index dim() const { return lo_.size(); }

    Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
        if (x.size() != lo_.size())
            throw ShapeError("affine map: query dimension mismatch");
        return (x - lo_).cwiseProduct(inv_span_);
    }

    Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& rows) const {
        if (rows.cols() != lo_.size())
            throw ShapeError("affine map: row dimension mismatch");
        return (rows.rowwise() - lo_.transpose()) * inv_span_.asDiagonal();
    }

    const Eigen::VectorXd& offset() const { return lo_; }
    const Eigen::VectorXd& inv_span() const { return inv_span_; }

    static AffineMap from_parts(Eigen::VectorXd lo, Eigen::VectorXd inv_span) {
        AffineMap m;
        m.lo_ = std::move(lo);
        m.inv_span_ = std::move(inv_span);
        return m;
    }

private:
    Eigen::VectorXd lo_;
    Eigen::VectorXd inv_span_;
};

} // namespace hlsvr

#endif // HLSVR_BOX_HPP
