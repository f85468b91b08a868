#ifndef HLSVR_STATS_HPP
#define HLSVR_STATS_HPP

#include <Eigen/Dense>

namespace hlsvr {

enum class TestMethod { student_t, wilcoxon };

struct PairedTestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int n_effective = 0; // pairs remaining after zero-difference removal
    TestMethod method = TestMethod::student_t;
};

/// One-sided paired Student's t-test with H1: mean(a - b) > 0.
/// t = dbar / (s_d / sqrt(n)) on n - 1 degrees of freedom; p is the upper
/// tail. Zero variance of the differences raises DegenerateInput.
PairedTestResult paired_t_test(const Eigen::VectorXd& a,
                               const Eigen::VectorXd& b);

/// One-sided Wilcoxon signed-rank test with H1: a > b. Zero differences are
/// dropped (n_effective reports the remainder; all-zero raises
/// DegenerateInput). Ties in |d| get mid-ranks. For n <= 20 the p-value is
/// exact over all 2^n sign assignments; beyond that a normal approximation
/// with continuity and tie corrections is used.
PairedTestResult wilcoxon_signed_rank(const Eigen::VectorXd& a,
                                      const Eigen::VectorXd& b);

} // namespace hlsvr

#endif // HLSVR_STATS_HPP
