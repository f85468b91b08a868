#ifndef HLSVR_BENCHMARKS_HPP
#define HLSVR_BENCHMARKS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "hlsvr/sampling.hpp"

namespace hlsvr {

/// y = (x_l1 - 5.1 x_s1^2 / (4 pi^2) + 5 x_l2 / pi - 6)^2
///     + 10 (1 - 1/(8 pi)) cos(x_s2) + 10, on [-1, 1]^4.
double eval_ex1(const Eigen::VectorXd& xs, const Eigen::VectorXd& xl);

/// y = x_l1^2 (4 - 2.1 x_s1^2 + x_s1^4 / 3) + x_l1 x_s1
///     + (4 x_l1^2 - 4) x_l2^2, on [0, 1]^3.
double eval_ex2(const Eigen::VectorXd& xs, const Eigen::VectorXd& xl);

/// y = (1 - 2 x_l1 + 0.05 sin(4 pi x_l2) - x_s1)^2
///     + (x_l3 - 0.5 sin(2 pi x_s2))^2 + (x_l4 - 0.5 sin(2 pi x_s3))^2
///     + x_s4, on [0, 1]^8.
double eval_ex3(const Eigen::VectorXd& xs, const Eigen::VectorXd& xl);

/// An analytic test problem with its variable-role split and default nested
/// sizing. Sizes are defaults only; callers may override any of them.
struct BenchmarkProblem {
    std::string id;
    int dims_s = 0;
    int dims_l = 0;
    Box bounds_s;
    Box bounds_l;
    ResponseFn evaluator;
    int m_train = 1, k_train = 1;
    int m_test = 1, k_test = 1;

    NestedDesignSpec design_spec(std::uint64_t seed) const;
};

/// Problems "ex1", "ex2", "ex3"; unknown id raises InvalidInput.
const BenchmarkProblem& benchmark_by_id(const std::string& id);

std::vector<std::string> benchmark_ids();

} // namespace hlsvr

#endif // HLSVR_BENCHMARKS_HPP
