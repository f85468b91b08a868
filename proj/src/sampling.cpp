#include "hlsvr/sampling.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "hlsvr/rng.hpp"

namespace hlsvr {

void NestedDesignSpec::validate() const {
    if (dims_s < 1 || dims_l < 1)
        throw InvalidInput("nested design: dimensions must be >= 1");
    if (m_train < 1 || k_train < 1 || m_test < 1 || k_test < 1)
        throw InvalidInput("nested design: all counts must be >= 1");
    bounds_s.validate();
    bounds_l.validate();
    if (bounds_s.dim() != dims_s || bounds_l.dim() != dims_l)
        throw ShapeError("nested design: bounds dimension mismatch");
}

Eigen::MatrixXd lhs(int n, int d, const Box& bounds, std::uint64_t seed) {
    if (n < 1 || d < 1)
        throw InvalidInput("lhs: need n >= 1 and d >= 1");
    bounds.validate();
    if (bounds.dim() != d)
        throw ShapeError("lhs: bounds dimension mismatch");

    Rng rng(seed);
    Eigen::MatrixXd points(n, d);
    std::vector<int> strata(static_cast<std::size_t>(n));
    for (int j = 0; j < d; ++j) {
        std::iota(strata.begin(), strata.end(), 0);
        rng.shuffle(strata);
        const double lo = bounds.lo[j];
        const double span = bounds.hi[j] - bounds.lo[j];
        for (int i = 0; i < n; ++i) {
            const double t =
                (static_cast<double>(strata[static_cast<std::size_t>(i)]) +
                 rng.next_unit()) /
                static_cast<double>(n);
            points(i, j) = lo + t * span;
        }
    }
    return points;
}

namespace {

GroupedDataset generate_half(const NestedDesignSpec& spec, const ResponseFn& f,
                             int m, int k, std::uint64_t anchors_role,
                             std::uint64_t group_role) {
    GroupedDataset data;
    data.bounds_s = spec.bounds_s;
    data.bounds_l = spec.bounds_l;
    data.anchors = lhs(m, spec.dims_s, spec.bounds_s,
                       derive_seed(spec.seed, anchors_role, 0));
    data.groups.resize(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        Group& g = data.groups[static_cast<std::size_t>(i)];
        g.inputs_l = lhs(k, spec.dims_l, spec.bounds_l,
                         derive_seed(spec.seed, group_role,
                                     static_cast<std::uint64_t>(i)));
        g.responses.resize(k);
        const Eigen::VectorXd anchor = data.anchors.row(i).transpose();
        for (int r = 0; r < k; ++r) {
            const Eigen::VectorXd xl = g.inputs_l.row(r).transpose();
            const double y = f(anchor, xl);
            if (!std::isfinite(y)) {
                std::string point = "anchor (";
                for (Eigen::Index c = 0; c < anchor.size(); ++c)
                    point += (c ? ", " : "") + std::to_string(anchor[c]);
                point += "), x_l (";
                for (Eigen::Index c = 0; c < xl.size(); ++c)
                    point += (c ? ", " : "") + std::to_string(xl[c]);
                point += ")";
                throw GenerationFailure(
                    "generate_nested: response function returned a non-finite "
                    "value at " + point);
            }
            g.responses[r] = y;
        }
    }
    return data;
}

} // namespace

std::pair<GroupedDataset, GroupedDataset>
generate_nested(const NestedDesignSpec& spec, const ResponseFn& f) {
    spec.validate();
    GroupedDataset train =
        generate_half(spec, f, spec.m_train, spec.k_train,
                      seed_role::train_anchors, seed_role::train_group);
    GroupedDataset test =
        generate_half(spec, f, spec.m_test, spec.k_test,
                      seed_role::test_anchors, seed_role::test_group);
    train.validate();
    test.validate();
    return {std::move(train), std::move(test)};
}

} // namespace hlsvr
