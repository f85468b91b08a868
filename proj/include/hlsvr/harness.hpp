#ifndef HLSVR_HARNESS_HPP
#define HLSVR_HARNESS_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hlsvr/benchmarks.hpp"
#include "hlsvr/hlsvr.hpp"
#include "hlsvr/stats.hpp"
#include "hlsvr/tuning.hpp"

namespace hlsvr {

/// sqrt(mean squared error) of pred against truth.
double rmse(const Eigen::VectorXd& truth, const Eigen::VectorXd& pred);

/// Baseline: flatten the groups to rows (anchor ++ x_l, y) and fit a single
/// tuned LS-SVR over the concatenated p + q space.
LssvrModel fit_conventional_svr(const GroupedDataset& train,
                                const TuningConfig& tuner);

struct RepetitionRecord {
    int rep = 0;
    std::uint64_t seed = 0;
    bool ok = false;
    std::string error;
    double rmse_hlsvr = 0.0;
    double rmse_svr = 0.0;
    double svr_gamma = 0.0;
    double svr_theta = 0.0;
    std::vector<std::pair<double, double>> low_hyper; // (gamma, theta) per group
    double high_gamma = 0.0;
    double high_theta = 0.0;
};

struct MethodSummary {
    double mean = 0.0;
    double stddev = 0.0; // sample std (n - 1); 0 by convention for one record
};

struct ExperimentReport {
    std::string label; // problem id or "dental"
    std::uint64_t master_seed = 0;
    std::vector<RepetitionRecord> records;
    MethodSummary hlsvr_summary;
    MethodSummary svr_summary;
    std::optional<PairedTestResult> student_t;
    std::optional<PairedTestResult> wilcoxon;
    std::string test_note; // set when the paired tests were degenerate

    int ok_count() const;
};

/// Runs `reps` repetitions: per repetition a derived seed regenerates the
/// nested data, both methods are fitted on the *same* dataset (paired
/// design), and the pooled test rows are scored with RMSE. Repetitions run
/// concurrently; the report is identical to sequential execution. Individual
/// failures are recorded; the call fails only if every repetition fails.
ExperimentReport run_benchmark(const BenchmarkProblem& problem, int reps,
                               std::uint64_t master_seed,
                               const TuningConfig& tuner,
                               HighLevelPolicy policy = {});

/// Summary statistics and paired tests over already-scored records.
void finalize_report(ExperimentReport& report);

void write_report_csv(const ExperimentReport& report, std::ostream& out);
void write_summary_json(const ExperimentReport& report, std::ostream& out);
/// gnuplot-ready columns: method, mean RMSE, std for bar charts.
void write_gnuplot_bars(const ExperimentReport& report, std::ostream& out);
/// Text table with both paired tests and their p-values.
void write_test_table(const ExperimentReport& report, std::ostream& out);

/// Row-matched (queries_s, queries_l, truth) over all groups of a dataset.
std::tuple<Eigen::MatrixXd, Eigen::MatrixXd, Eigen::VectorXd>
split_rows(const GroupedDataset& data);

} // namespace hlsvr

#endif // HLSVR_HARNESS_HPP
