#include "hlsvr/dental.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "hlsvr/rng.hpp"
#include "hlsvr/sampling.hpp"

namespace hlsvr {

const std::vector<Material>& builtin_materials() {
    static const std::vector<Material> table = {
        {1, "Y-TZP", 210.0, 0.230},       {2, "Zr", 200.0, 0.310},
        {3, "Ti (TC4)", 110.0, 0.350},    {4, "Ti-Au", 106.0, 0.340},
        {5, "Ti (Grade 4)", 105.0, 0.360}, {6, "Ti-15Zr", 102.0, 0.335},
        {7, "Ti alloy", 91.0, 0.230},     {8, "Ti-Nb-Zr", 71.0, 0.320},
    };
    return table;
}

const Material& material_by_id(int id) {
    const auto& table = builtin_materials();
    if (id < 1 || id > static_cast<int>(table.size()))
        throw InvalidInput("material id out of range: " + std::to_string(id));
    return table[static_cast<std::size_t>(id - 1)];
}

Box material_bounds() {
    const auto& table = builtin_materials();
    Box b;
    b.lo.resize(2);
    b.hi.resize(2);
    b.lo << table.front().elastic_modulus_gpa, table.front().poisson_ratio;
    b.hi = b.lo;
    for (const Material& m : table) {
        b.lo[0] = std::min(b.lo[0], m.elastic_modulus_gpa);
        b.hi[0] = std::max(b.hi[0], m.elastic_modulus_gpa);
        b.lo[1] = std::min(b.lo[1], m.poisson_ratio);
        b.hi[1] = std::max(b.hi[1], m.poisson_ratio);
    }
    return b;
}

Box structure_bounds() {
    return Box::from_pairs(
        {{8.0, 9.0}, {6.0, 7.0}, {1.0, 1.4}, {0.4, 0.8}, {50.0, 70.0}});
}

std::vector<DoePlan> generate_doe(std::uint64_t seed) {
    std::vector<DoePlan> plans;
    const Box bounds = structure_bounds();
    int exp_no = 0;
    // test pairs are the 2-subsets of {2..7} in lexicographic order; materials
    // 1 and 8 always train
    for (int t1 = 2; t1 <= 7; ++t1) {
        for (int t2 = t1 + 1; t2 <= 7; ++t2) {
            DoePlan plan;
            plan.experiment_no = ++exp_no;
            plan.test_materials = {t1, t2};
            std::size_t at = 0;
            for (int id = 1; id <= 8; ++id)
                if (id != t1 && id != t2)
                    plan.train_materials[at++] = id;

            auto design_for = [&](int material_id) {
                return lhs(kSamplesPerMaterial, 5, bounds,
                           derive_seed(seed, seed_role::dental_design,
                                       static_cast<std::uint64_t>(
                                           plan.experiment_no * 100 + material_id)));
            };
            for (int id : plan.train_materials)
                plan.train_designs.push_back(design_for(id));
            for (int id : plan.test_materials)
                plan.test_designs.push_back(design_for(id));
            plans.push_back(std::move(plan));
        }
    }
    return plans;
}

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_rows(std::ostream& out, int exp_no, const char* role,
                int material_id, const Eigen::MatrixXd& design) {
    const Material& m = material_by_id(material_id);
    for (Eigen::Index r = 0; r < design.rows(); ++r) {
        out << exp_no << ',' << role << ',' << material_id << ','
            << fmt_double(m.elastic_modulus_gpa) << ','
            << fmt_double(m.poisson_ratio);
        for (Eigen::Index c = 0; c < design.cols(); ++c)
            out << ',' << fmt_double(design(r, c));
        out << '\n';
    }
}

} // namespace

void export_plan_csv(const DoePlan& plan, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw InvalidInput("export_plan_csv: cannot open " + path.string() +
                           " for writing");
    out << "exp,role,material_id,E_gpa,nu,L_C,L_T,P,L,beta\n";
    for (std::size_t i = 0; i < plan.train_materials.size(); ++i)
        write_rows(out, plan.experiment_no, "train", plan.train_materials[i],
                   plan.train_designs[i]);
    for (std::size_t i = 0; i < plan.test_materials.size(); ++i)
        write_rows(out, plan.experiment_no, "test", plan.test_materials[i],
                   plan.test_designs[i]);
    if (!out.good())
        throw InvalidInput("export_plan_csv: write failed for " + path.string());
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, ','))
        fields.push_back(field);
    if (!line.empty() && line.back() == ',')
        fields.push_back("");
    return fields;
}

double parse_double(const std::string& s, std::size_t line_no,
                    const std::string& column) {
    if (s.empty())
        throw ParseError("line " + std::to_string(line_no) + ": empty " +
                             column + " cell",
                         line_no);
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": bad numeric '" +
                             s + "' in column " + column,
                         line_no);
    }
    if (pos != s.size() || !std::isfinite(v))
        throw ParseError("line " + std::to_string(line_no) + ": bad numeric '" +
                             s + "' in column " + column,
                         line_no);
    return v;
}

struct IngestRow {
    int material_id;
    Eigen::Matrix<double, 5, 1> structure;
    double stress;
};

GroupedDataset to_grouped(const std::map<int, std::vector<IngestRow>>& by_material) {
    GroupedDataset data;
    data.bounds_s = material_bounds();
    data.bounds_l = structure_bounds();
    data.anchors.resize(static_cast<Eigen::Index>(by_material.size()), 2);
    Eigen::Index i = 0;
    for (const auto& [id, rows] : by_material) {
        const Material& m = material_by_id(id);
        data.anchors(i, 0) = m.elastic_modulus_gpa;
        data.anchors(i, 1) = m.poisson_ratio;
        Group g;
        g.inputs_l.resize(static_cast<Eigen::Index>(rows.size()), 5);
        g.responses.resize(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r) {
            g.inputs_l.row(static_cast<Eigen::Index>(r)) =
                rows[r].structure.transpose();
            g.responses[static_cast<Eigen::Index>(r)] = rows[r].stress;
        }
        data.groups.push_back(std::move(g));
        ++i;
    }
    data.validate();
    return data;
}

} // namespace

DentalExperimentData ingest_responses_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("ingest_responses_csv: cannot open " + path.string());

    static const std::vector<std::string> kColumns = {
        "exp", "role", "material_id", "E_gpa", "nu",
        "L_C", "L_T",  "P",           "L",     "beta", "stress_mpa"};

    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line))
        throw ParseError("empty file: " + path.string(), 0);
    ++line_no;
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    {
        const std::vector<std::string> header = split_csv_line(line);
        if (header != kColumns) {
            std::string expected;
            for (std::size_t i = 0; i < kColumns.size(); ++i)
                expected += (i ? "," : "") + kColumns[i];
            throw ParseError("line 1: header mismatch, expected '" + expected +
                                 "'",
                             1);
        }
    }

    int exp_no = 0;
    std::map<int, std::vector<IngestRow>> train_rows, test_rows;
    std::set<std::pair<int, std::array<double, 5>>> seen;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (f.size() != kColumns.size())
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(kColumns.size()) +
                                 " fields, got " + std::to_string(f.size()),
                             line_no);

        const int row_exp =
            static_cast<int>(parse_double(f[0], line_no, "exp"));
        if (exp_no == 0)
            exp_no = row_exp;
        else if (row_exp != exp_no)
            throw IntegrityError("line " + std::to_string(line_no) +
                                 ": mixed experiment numbers (" +
                                 std::to_string(exp_no) + " and " +
                                 std::to_string(row_exp) + ")");

        const std::string& role = f[1];
        if (role != "train" && role != "test")
            throw ParseError("line " + std::to_string(line_no) +
                                 ": role must be train or test, got '" + role +
                                 "'",
                             line_no);

        const int material_id =
            static_cast<int>(parse_double(f[2], line_no, "material_id"));
        if (material_id < 1 || material_id > 8)
            throw ParseError("line " + std::to_string(line_no) +
                                 ": unknown material id " +
                                 std::to_string(material_id),
                             line_no);
        const Material& mat = material_by_id(material_id);

        const double e_gpa = parse_double(f[3], line_no, "E_gpa");
        const double nu = parse_double(f[4], line_no, "nu");
        if (std::abs(e_gpa - mat.elastic_modulus_gpa) > 1e-9 ||
            std::abs(nu - mat.poisson_ratio) > 1e-9)
            throw ParseError("line " + std::to_string(line_no) +
                                 ": (E, nu) disagree with material " +
                                 std::to_string(material_id),
                             line_no);

        IngestRow row;
        row.material_id = material_id;
        for (int c = 0; c < 5; ++c)
            row.structure[c] = parse_double(f[static_cast<std::size_t>(5 + c)],
                                            line_no, kColumns[static_cast<std::size_t>(5 + c)]);
        row.stress = parse_double(f[10], line_no, "stress_mpa");

        std::array<double, 5> key;
        for (int c = 0; c < 5; ++c)
            key[static_cast<std::size_t>(c)] = row.structure[c];
        if (!seen.insert({material_id, key}).second)
            throw IntegrityError("line " + std::to_string(line_no) +
                                 ": duplicate (material, design point) row");

        (role == "train" ? train_rows : test_rows)[material_id].push_back(row);
    }

    if (train_rows.empty() || test_rows.empty())
        throw IntegrityError(path.string() +
                             ": need both train and test rows in an experiment "
                             "file");

    DentalExperimentData data;
    data.experiment_no = exp_no;
    data.train = to_grouped(train_rows);
    data.test = to_grouped(test_rows);
    return data;
}

ExperimentReport run_dental_study(
    const std::vector<DentalExperimentData>& experiments,
    const TuningConfig& tuner, HighLevelPolicy policy) {
    tuner.validate();

    std::set<int> present;
    for (const DentalExperimentData& e : experiments)
        present.insert(e.experiment_no);
    std::string missing;
    for (int i = 1; i <= kDentalExperiments; ++i)
        if (!present.count(i))
            missing += (missing.empty() ? "" : ", ") + std::to_string(i);
    if (!missing.empty())
        throw InvalidInput("run_dental_study: missing experiments " + missing);
    if (experiments.size() != static_cast<std::size_t>(kDentalExperiments))
        throw InvalidInput("run_dental_study: expected exactly " +
                           std::to_string(kDentalExperiments) +
                           " experiments, got " +
                           std::to_string(experiments.size()));

    std::vector<const DentalExperimentData*> ordered(kDentalExperiments);
    for (const DentalExperimentData& e : experiments)
        ordered[static_cast<std::size_t>(e.experiment_no - 1)] = &e;

    ExperimentReport report;
    report.label = "dental";
    report.records.resize(kDentalExperiments);

#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < kDentalExperiments; ++i) {
        const DentalExperimentData& e = *ordered[static_cast<std::size_t>(i)];
        RepetitionRecord rec;
        rec.rep = e.experiment_no;
        rec.seed = 0;
        try {
            const HlsvrModel hl = fit_hlsvr(e.train, tuner, policy);
            const LssvrModel svr = fit_conventional_svr(e.train, tuner);

            const auto [test_s, test_l, truth] = split_rows(e.test);
            const Eigen::VectorXd hl_pred = predict_batch(hl, test_s, test_l);
            Eigen::MatrixXd flat(test_s.rows(), test_s.cols() + test_l.cols());
            flat << test_s, test_l;
            const Eigen::VectorXd svr_pred = predict_many(svr, flat);

            rec.rmse_hlsvr = rmse(truth, hl_pred);
            rec.rmse_svr = rmse(truth, svr_pred);
            rec.svr_gamma = svr.gamma;
            rec.svr_theta = svr.kernel.theta;
            for (const LssvrModel& low : hl.low_models)
                rec.low_hyper.emplace_back(low.gamma, low.kernel.theta);
            rec.high_gamma = hl.high_policy.gamma;
            rec.high_theta = hl.high_theta;
            rec.ok = true;
        } catch (const std::exception& ex) {
            rec.ok = false;
            rec.error = ex.what();
        }
        report.records[static_cast<std::size_t>(i)] = std::move(rec);
    }

    finalize_report(report);
    return report;
}

} // namespace hlsvr
