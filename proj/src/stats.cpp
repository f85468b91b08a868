#include "hlsvr/stats.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "hlsvr/errors.hpp"

namespace hlsvr {

namespace {

Eigen::VectorXd paired_differences(const Eigen::VectorXd& a,
                                   const Eigen::VectorXd& b) {
    if (a.size() != b.size())
        throw ShapeError("paired test: sample length mismatch");
    if (!a.allFinite() || !b.allFinite())
        throw InvalidInput("paired test: non-finite entry");
    return a - b;
}

} // namespace

PairedTestResult paired_t_test(const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b) {
    const Eigen::VectorXd d = paired_differences(a, b);
    const Eigen::Index n = d.size();
    if (n < 2)
        throw InvalidInput("paired_t_test: need at least two pairs");

    const double mean = d.mean();
    const double ss = (d.array() - mean).square().sum();
    const double var = ss / static_cast<double>(n - 1);
    if (var <= 0.0)
        throw DegenerateInput("paired_t_test: zero variance of differences");

    const double t = mean / std::sqrt(var / static_cast<double>(n));
    const boost::math::students_t dist(static_cast<double>(n - 1));
    PairedTestResult result;
    result.statistic = t;
    result.p_value = boost::math::cdf(boost::math::complement(dist, t));
    result.n_effective = static_cast<int>(n);
    result.method = TestMethod::student_t;
    return result;
}

namespace {

// Mid-ranks of |d|, doubled so every rank is an integer (a run of ties at
// 1-based positions i..j gets mid-rank (i + j) / 2, doubled to i + j).
std::vector<std::int64_t> doubled_midranks(const std::vector<double>& abs_d) {
    const std::size_t n = abs_d.size();
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t x, std::size_t y) { return abs_d[x] < abs_d[y]; });

    std::vector<std::int64_t> doubled(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && abs_d[order[j + 1]] == abs_d[order[i]])
            ++j;
        const std::int64_t doubled_rank =
            static_cast<std::int64_t>(i + 1) + static_cast<std::int64_t>(j + 1);
        for (std::size_t k = i; k <= j; ++k)
            doubled[order[k]] = doubled_rank;
        i = j + 1;
    }
    return doubled;
}

// P(W+ >= observed) over all 2^n sign assignments, computed from the exact
// count distribution of the doubled rank sum.
double exact_upper_tail(const std::vector<std::int64_t>& doubled_ranks,
                        std::int64_t doubled_observed) {
    std::int64_t total = 0;
    for (std::int64_t r : doubled_ranks)
        total += r;
    std::vector<std::uint64_t> ways(static_cast<std::size_t>(total) + 1, 0);
    ways[0] = 1;
    for (std::int64_t r : doubled_ranks)
        for (std::int64_t s = total; s >= r; --s)
            ways[static_cast<std::size_t>(s)] +=
                ways[static_cast<std::size_t>(s - r)];

    std::uint64_t at_or_above = 0;
    for (std::int64_t s = doubled_observed; s <= total; ++s)
        at_or_above += ways[static_cast<std::size_t>(s)];
    return static_cast<double>(at_or_above) /
           std::ldexp(1.0, static_cast<int>(doubled_ranks.size()));
}

double normal_upper_tail(double z) {
    return 0.5 * std::erfc(z / std::sqrt(2.0));
}

} // namespace

PairedTestResult wilcoxon_signed_rank(const Eigen::VectorXd& a,
                                      const Eigen::VectorXd& b) {
    const Eigen::VectorXd diff = paired_differences(a, b);

    std::vector<double> abs_d;
    std::vector<bool> positive;
    for (Eigen::Index i = 0; i < diff.size(); ++i) {
        if (diff[i] == 0.0)
            continue;
        abs_d.push_back(std::abs(diff[i]));
        positive.push_back(diff[i] > 0.0);
    }
    const std::size_t n = abs_d.size();
    if (n == 0)
        throw DegenerateInput("wilcoxon_signed_rank: all differences are zero");

    const std::vector<std::int64_t> doubled = doubled_midranks(abs_d);
    std::int64_t doubled_w = 0;
    for (std::size_t i = 0; i < n; ++i)
        if (positive[i])
            doubled_w += doubled[i];

    PairedTestResult result;
    result.statistic = 0.5 * static_cast<double>(doubled_w);
    result.n_effective = static_cast<int>(n);
    result.method = TestMethod::wilcoxon;

    if (n <= 20) {
        result.p_value = exact_upper_tail(doubled, doubled_w);
        return result;
    }

    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    double tie_term = 0.0;
    {
        std::vector<double> sorted(abs_d);
        std::sort(sorted.begin(), sorted.end());
        std::size_t i = 0;
        while (i < sorted.size()) {
            std::size_t j = i;
            while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i])
                ++j;
            const double t = static_cast<double>(j - i + 1);
            tie_term += t * t * t - t;
            i = j + 1;
        }
    }
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term / 48.0;
    const double w = result.statistic;
    const double z = (w - mean - 0.5) / std::sqrt(var);
    result.p_value = normal_upper_tail(z);
    return result;
}

} // namespace hlsvr
