#include "hlsvr/benchmarks.hpp"

#include <cmath>
#include <numbers>

namespace hlsvr {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dims(const Eigen::VectorXd& xs, Eigen::Index p,
                  const Eigen::VectorXd& xl, Eigen::Index q, const char* id) {
    if (xs.size() != p || xl.size() != q)
        throw ShapeError(std::string(id) + ": wrong input dimensions");
}

} // namespace

double eval_ex1(const Eigen::VectorXd& xs, const Eigen::VectorXd& xl) {
    require_dims(xs, 2, xl, 2, "ex1");
    const double inner =
        xl[0] - 5.1 * xs[0] * xs[0] / (4.0 * kPi * kPi) + 5.0 * xl[1] / kPi - 6.0;
    return inner * inner + 10.0 * (1.0 - 1.0 / (8.0 * kPi)) * std::cos(xs[1]) +
           10.0;
}

double eval_ex2(const Eigen::VectorXd& xs, const Eigen::VectorXd& xl) {
    require_dims(xs, 1, xl, 2, "ex2");
    const double s = xs[0];
    return xl[0] * xl[0] * (4.0 - 2.1 * s * s + s * s * s * s / 3.0) +
           xl[0] * s + (4.0 * xl[0] * xl[0] - 4.0) * xl[1] * xl[1];
}

double eval_ex3(const Eigen::VectorXd& xs, const Eigen::VectorXd& xl) {
    require_dims(xs, 4, xl, 4, "ex3");
    const double t1 =
        1.0 - 2.0 * xl[0] + 0.05 * std::sin(4.0 * kPi * xl[1]) - xs[0];
    const double t2 = xl[2] - 0.5 * std::sin(2.0 * kPi * xs[1]);
    const double t3 = xl[3] - 0.5 * std::sin(2.0 * kPi * xs[2]);
    return t1 * t1 + t2 * t2 + t3 * t3 + xs[3];
}

NestedDesignSpec BenchmarkProblem::design_spec(std::uint64_t seed) const {
    NestedDesignSpec spec;
    spec.dims_s = dims_s;
    spec.dims_l = dims_l;
    spec.bounds_s = bounds_s;
    spec.bounds_l = bounds_l;
    spec.m_train = m_train;
    spec.k_train = k_train;
    spec.m_test = m_test;
    spec.k_test = k_test;
    spec.seed = seed;
    return spec;
}

namespace {

Box cube(double lo, double hi, Eigen::Index d) {
    Box b;
    b.lo = Eigen::VectorXd::Constant(d, lo);
    b.hi = Eigen::VectorXd::Constant(d, hi);
    return b;
}

std::vector<BenchmarkProblem> make_problems() {
    std::vector<BenchmarkProblem> v;

    BenchmarkProblem ex1;
    ex1.id = "ex1";
    ex1.dims_s = 2;
    ex1.dims_l = 2;
    ex1.bounds_s = cube(-1.0, 1.0, 2);
    ex1.bounds_l = cube(-1.0, 1.0, 2);
    ex1.evaluator = eval_ex1;
    ex1.m_train = 4;
    ex1.k_train = 10;
    ex1.m_test = 20;
    ex1.k_test = 6;
    v.push_back(std::move(ex1));

    BenchmarkProblem ex2;
    ex2.id = "ex2";
    ex2.dims_s = 1;
    ex2.dims_l = 2;
    ex2.bounds_s = cube(0.0, 1.0, 1);
    ex2.bounds_l = cube(0.0, 1.0, 2);
    ex2.evaluator = eval_ex2;
    ex2.m_train = 3;
    ex2.k_train = 20;
    ex2.m_test = 10;
    ex2.k_test = 6;
    v.push_back(std::move(ex2));

    BenchmarkProblem ex3;
    ex3.id = "ex3";
    ex3.dims_s = 4;
    ex3.dims_l = 4;
    ex3.bounds_s = cube(0.0, 1.0, 4);
    ex3.bounds_l = cube(0.0, 1.0, 4);
    ex3.evaluator = eval_ex3;
    ex3.m_train = 8;
    ex3.k_train = 40;
    ex3.m_test = 40;
    ex3.k_test = 1;
    v.push_back(std::move(ex3));

    return v;
}

const std::vector<BenchmarkProblem>& problems() {
    static const std::vector<BenchmarkProblem> v = make_problems();
    return v;
}

} // namespace

const BenchmarkProblem& benchmark_by_id(const std::string& id) {
    for (const BenchmarkProblem& p : problems())
        if (p.id == id)
            return p;
    throw InvalidInput("unknown benchmark id '" + id + "' (expected ex1|ex2|ex3)");
}

std::vector<std::string> benchmark_ids() {
    std::vector<std::string> ids;
    for (const BenchmarkProblem& p : problems())
        ids.push_back(p.id);
    return ids;
}

} // namespace hlsvr
