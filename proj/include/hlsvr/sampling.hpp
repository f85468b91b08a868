#ifndef HLSVR_SAMPLING_HPP
#define HLSVR_SAMPLING_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <utility>

#include "hlsvr/box.hpp"
#include "hlsvr/hlsvr.hpp"

namespace hlsvr {

/// Sizing for a nested train/test layout: m anchors of dimension p, each
/// carrying k low-level points of dimension q. All child designs derive
/// their seeds from `seed` via the fixed splitting rule in rng.hpp.
struct NestedDesignSpec {
    int dims_s = 0;
    int dims_l = 0;
    Box bounds_s;
    Box bounds_l;
    int m_train = 1;
    int k_train = 1;
    int m_test = 1;
    int k_test = 1;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Latin hypercube design: per dimension, exactly one point in each of the n
/// equal strata of [lo, hi), position uniform within the stratum, strata
/// paired by a uniform permutation. Deterministic given seed.
Eigen::MatrixXd lhs(int n, int d, const Box& bounds, std::uint64_t seed);

using ResponseFn =
    std::function<double(const Eigen::VectorXd& xs, const Eigen::VectorXd& xl)>;

/// The nested data-generation protocol: anchors by LHS over bounds_s, then an
/// independent LHS over bounds_l for every anchor, responses from f. The test
/// set is built the same way with (m_test, k_test) and fresh derived seeds.
std::pair<GroupedDataset, GroupedDataset>
generate_nested(const NestedDesignSpec& spec, const ResponseFn& f);

} // namespace hlsvr

#endif // HLSVR_SAMPLING_HPP
