#include "hlsvr/harness.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

#include "hlsvr/rng.hpp"
#include "hlsvr/sampling.hpp"

namespace hlsvr {

double rmse(const Eigen::VectorXd& truth, const Eigen::VectorXd& pred) {
    if (truth.size() != pred.size())
        throw ShapeError("rmse: length mismatch");
    if (truth.size() == 0)
        throw InvalidInput("rmse: empty input");
    if (!truth.allFinite() || !pred.allFinite())
        throw InvalidInput("rmse: non-finite entry");
    return std::sqrt((truth - pred).squaredNorm() /
                     static_cast<double>(truth.size()));
}

LssvrModel fit_conventional_svr(const GroupedDataset& train,
                                const TuningConfig& tuner) {
    train.validate();
    const auto [rows, y] = train.flatten();
    const AffineMap map = AffineMap::to_unit(train.flat_bounds());
    const GridSearchResult choice = grid_search_cv(rows, y, tuner, map);
    return fit_lssvr(rows, y, choice.gamma, KernelParams{choice.theta}, map);
}

std::tuple<Eigen::MatrixXd, Eigen::MatrixXd, Eigen::VectorXd>
split_rows(const GroupedDataset& data) {
    const Eigen::Index p = data.anchors.cols();
    const Eigen::Index q =
        data.groups.empty() ? 0 : data.groups.front().inputs_l.cols();
    const Eigen::Index n = data.total_rows();
    Eigen::MatrixXd qs(n, p), ql(n, q);
    Eigen::VectorXd y(n);
    Eigen::Index at = 0;
    for (std::size_t i = 0; i < data.groups.size(); ++i) {
        const Group& g = data.groups[i];
        for (Eigen::Index r = 0; r < g.inputs_l.rows(); ++r) {
            qs.row(at) = data.anchors.row(static_cast<Eigen::Index>(i));
            ql.row(at) = g.inputs_l.row(r);
            y[at++] = g.responses[r];
        }
    }
    return {std::move(qs), std::move(ql), std::move(y)};
}

int ExperimentReport::ok_count() const {
    int n = 0;
    for (const RepetitionRecord& r : records)
        if (r.ok)
            ++n;
    return n;
}

namespace {

MethodSummary summarize(const std::vector<double>& values) {
    MethodSummary s;
    if (values.empty())
        return s;
    double sum = 0.0;
    for (double v : values)
        sum += v;
    s.mean = sum / static_cast<double>(values.size());
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values)
            ss += (v - s.mean) * (v - s.mean);
        s.stddev = std::sqrt(ss / static_cast<double>(values.size() - 1));
    }
    return s;
}

RepetitionRecord run_one(const BenchmarkProblem& problem, int rep,
                         std::uint64_t seed, const TuningConfig& tuner,
                         const HighLevelPolicy& policy) {
    RepetitionRecord rec;
    rec.rep = rep;
    rec.seed = seed;
    try {
        const NestedDesignSpec spec = problem.design_spec(seed);
        const auto [train, test] = generate_nested(spec, problem.evaluator);

        const HlsvrModel hl = fit_hlsvr(train, tuner, policy);
        const LssvrModel svr = fit_conventional_svr(train, tuner);

        const auto [test_s, test_l, truth] = split_rows(test);
        const Eigen::VectorXd hl_pred = predict_batch(hl, test_s, test_l);
        Eigen::MatrixXd flat_queries(test_s.rows(), test_s.cols() + test_l.cols());
        flat_queries << test_s, test_l;
        const Eigen::VectorXd svr_pred = predict_many(svr, flat_queries);

        rec.rmse_hlsvr = rmse(truth, hl_pred);
        rec.rmse_svr = rmse(truth, svr_pred);
        rec.svr_gamma = svr.gamma;
        rec.svr_theta = svr.kernel.theta;
        for (const LssvrModel& low : hl.low_models)
            rec.low_hyper.emplace_back(low.gamma, low.kernel.theta);
        rec.high_gamma = hl.high_policy.gamma;
        rec.high_theta = hl.high_theta;
        rec.ok = true;
    } catch (const std::exception& e) {
        rec.ok = false;
        rec.error = e.what();
    }
    return rec;
}

} // namespace

void finalize_report(ExperimentReport& report) {
    std::vector<double> hl_rmses, svr_rmses;
    for (const RepetitionRecord& r : report.records) {
        if (!r.ok)
            continue;
        hl_rmses.push_back(r.rmse_hlsvr);
        svr_rmses.push_back(r.rmse_svr);
    }
    if (hl_rmses.empty())
        throw NumericFailure("experiment report: every repetition failed" +
                             (report.records.empty()
                                  ? std::string()
                                  : "; first error: " + report.records.front().error));

    report.hlsvr_summary = summarize(hl_rmses);
    report.svr_summary = summarize(svr_rmses);

    Eigen::VectorXd a = Eigen::Map<Eigen::VectorXd>(svr_rmses.data(),
                                                    static_cast<Eigen::Index>(svr_rmses.size()));
    Eigen::VectorXd b = Eigen::Map<Eigen::VectorXd>(hl_rmses.data(),
                                                    static_cast<Eigen::Index>(hl_rmses.size()));
    try {
        report.student_t = paired_t_test(a, b);
    } catch (const InvalidInput& e) {
        report.test_note = e.what();
    }
    try {
        report.wilcoxon = wilcoxon_signed_rank(a, b);
    } catch (const InvalidInput& e) {
        if (!report.test_note.empty())
            report.test_note += "; ";
        report.test_note += e.what();
    }
}

ExperimentReport run_benchmark(const BenchmarkProblem& problem, int reps,
                               std::uint64_t master_seed,
                               const TuningConfig& tuner,
                               HighLevelPolicy policy) {
    if (reps < 1)
        throw InvalidInput("run_benchmark: reps must be >= 1");
    tuner.validate();

    ExperimentReport report;
    report.label = problem.id;
    report.master_seed = master_seed;
    report.records.resize(static_cast<std::size_t>(reps));

#pragma omp parallel for schedule(dynamic) if (reps > 1)
    for (int r = 0; r < reps; ++r) {
        const std::uint64_t seed =
            derive_seed(master_seed, seed_role::repetition,
                        static_cast<std::uint64_t>(r));
        report.records[static_cast<std::size_t>(r)] =
            run_one(problem, r, seed, tuner, policy);
    }

    finalize_report(report);
    return report;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string low_hyper_field(const RepetitionRecord& rec) {
    std::string s;
    for (std::size_t i = 0; i < rec.low_hyper.size(); ++i) {
        if (i)
            s += ';';
        s += fmt_double(rec.low_hyper[i].first) + ":" +
             fmt_double(rec.low_hyper[i].second);
    }
    return s;
}

nlohmann::json test_json(const PairedTestResult& t) {
    return {{"statistic", t.statistic},
            {"p_value", t.p_value},
            {"n_effective", t.n_effective},
            {"method", t.method == TestMethod::student_t ? "student_t"
                                                         : "wilcoxon"}};
}

} // namespace

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
    out << "rep,seed,ok,rmse_hlsvr,rmse_svr,svr_gamma,svr_theta,"
           "hl_low_hyper,hl_high_gamma,hl_high_theta,error\n";
    for (const RepetitionRecord& r : report.records) {
        out << r.rep << ',' << r.seed << ',' << (r.ok ? 1 : 0) << ',';
        if (r.ok) {
            out << fmt_double(r.rmse_hlsvr) << ',' << fmt_double(r.rmse_svr)
                << ',' << fmt_double(r.svr_gamma) << ','
                << fmt_double(r.svr_theta) << ',' << low_hyper_field(r) << ','
                << fmt_double(r.high_gamma) << ',' << fmt_double(r.high_theta)
                << ',';
        } else {
            out << ",,,,,,,";
        }
        // commas in error messages would break the column layout
        std::string err = r.error;
        for (char& c : err)
            if (c == ',' || c == '\n')
                c = ';';
        out << err << '\n';
    }
}

void write_summary_json(const ExperimentReport& report, std::ostream& out) {
    nlohmann::json j;
    j["label"] = report.label;
    j["master_seed"] = report.master_seed;
    j["repetitions"] = report.records.size();
    j["ok_repetitions"] = report.ok_count();
    j["hlsvr"] = {{"mean_rmse", report.hlsvr_summary.mean},
                  {"std_rmse", report.hlsvr_summary.stddev}};
    j["svr"] = {{"mean_rmse", report.svr_summary.mean},
                {"std_rmse", report.svr_summary.stddev}};
    j["tests"] = nlohmann::json::object();
    if (report.student_t)
        j["tests"]["student_t"] = test_json(*report.student_t);
    if (report.wilcoxon)
        j["tests"]["wilcoxon"] = test_json(*report.wilcoxon);
    if (!report.test_note.empty())
        j["tests"]["note"] = report.test_note;
    out << j.dump(2) << '\n';
}

void write_gnuplot_bars(const ExperimentReport& report, std::ostream& out) {
    out << "# method mean_rmse std_rmse\n";
    out << "HL-SVR " << fmt_double(report.hlsvr_summary.mean) << ' '
        << fmt_double(report.hlsvr_summary.stddev) << '\n';
    out << "SVR " << fmt_double(report.svr_summary.mean) << ' '
        << fmt_double(report.svr_summary.stddev) << '\n';
}

void write_test_table(const ExperimentReport& report, std::ostream& out) {
    out << "Paired one-sided tests, H1: SVR RMSE > HL-SVR RMSE (" << report.label
        << ", " << report.ok_count() << " paired repetitions)\n";
    char line[128];
    std::snprintf(line, sizeof line, "%-16s %12s %12s %6s\n", "Test",
                  "statistic", "p-value", "n");
    out << line;
    auto row = [&](const char* name, const std::optional<PairedTestResult>& t) {
        if (t) {
            std::snprintf(line, sizeof line, "%-16s %12.6g %12.4e %6d\n", name,
                          t->statistic, t->p_value, t->n_effective);
            out << line;
        } else {
            std::snprintf(line, sizeof line, "%-16s %12s %12s %6s\n", name, "-",
                          "-", "-");
            out << line;
        }
    };
    row("Student's test", report.student_t);
    row("Wilcoxon test", report.wilcoxon);
    if (!report.test_note.empty())
        out << "note: " << report.test_note << '\n';
}

} // namespace hlsvr
