#include "hlsvr/dataset_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

namespace hlsvr {

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

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

double parse_double(const std::string& s, std::size_t line_no) {
    std::size_t pos = 0;
    double v;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": bad numeric '" +
                             s + "'",
                         line_no);
    }
    if (pos != s.size() || !std::isfinite(v))
        throw ParseError("line " + std::to_string(line_no) + ": bad numeric '" +
                             s + "'",
                         line_no);
    return v;
}

// header must be s1..sp,l1..lq then `extra` trailing names
std::pair<Eigen::Index, Eigen::Index>
parse_sl_header(const std::vector<std::string>& header,
                const std::vector<std::string>& extra) {
    std::size_t i = 0;
    Eigen::Index p = 0, q = 0;
    while (i < header.size() &&
           header[i] == "s" + std::to_string(static_cast<long long>(p) + 1)) {
        ++p;
        ++i;
    }
    while (i < header.size() &&
           header[i] == "l" + std::to_string(static_cast<long long>(q) + 1)) {
        ++q;
        ++i;
    }
    bool tail_ok = header.size() == i + extra.size();
    for (std::size_t k = 0; tail_ok && k < extra.size(); ++k)
        tail_ok = header[i + k] == extra[k];
    if (p == 0 || q == 0 || !tail_ok)
        throw ParseError("line 1: expected header s1..sp,l1..lq" +
                             (extra.empty() ? std::string()
                                            : "," + extra.front()),
                         1);
    return {p, q};
}

std::string read_stripped_line(std::ifstream& in, std::string& line) {
    if (!std::getline(in, line))
        return {};
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    return line;
}

Box padded_data_bounds(const Eigen::MatrixXd& rows) {
    Box b;
    b.lo = rows.colwise().minCoeff();
    b.hi = rows.colwise().maxCoeff();
    for (Eigen::Index c = 0; c < b.lo.size(); ++c) {
        if (!(b.lo[c] < b.hi[c])) {
            b.lo[c] -= 0.5;
            b.hi[c] += 0.5;
        }
    }
    return b;
}

} // namespace

void write_grouped_csv(const GroupedDataset& data,
                       const std::filesystem::path& path) {
    data.validate();
    std::ofstream out(path);
    if (!out)
        throw InvalidInput("write_grouped_csv: cannot open " + path.string());

    const Eigen::Index p = data.anchors.cols();
    const Eigen::Index q = data.groups.front().inputs_l.cols();
    for (Eigen::Index c = 0; c < p; ++c)
        out << (c ? "," : "") << 's' << c + 1;
    for (Eigen::Index c = 0; c < q; ++c)
        out << ",l" << c + 1;
    out << ",y\n";

    for (std::size_t i = 0; i < data.groups.size(); ++i) {
        const Group& g = data.groups[i];
        for (Eigen::Index r = 0; r < g.inputs_l.rows(); ++r) {
            for (Eigen::Index c = 0; c < p; ++c)
                out << (c ? "," : "")
                    << fmt_double(data.anchors(static_cast<Eigen::Index>(i), c));
            for (Eigen::Index c = 0; c < q; ++c)
                out << ',' << fmt_double(g.inputs_l(r, c));
            out << ',' << fmt_double(g.responses[r]) << '\n';
        }
    }
    if (!out.good())
        throw InvalidInput("write_grouped_csv: write failed for " +
                           path.string());
}

GroupedDataset read_grouped_csv(const std::filesystem::path& path,
                                const Box* bounds_s, const Box* bounds_l) {
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("read_grouped_csv: cannot open " + path.string());

    std::string line;
    std::size_t line_no = 1;
    if (read_stripped_line(in, line).empty() && line.empty())
        throw ParseError("empty file: " + path.string(), 0);
    const auto [p, q] = parse_sl_header(split_csv_line(line), {"y"});

    std::vector<Eigen::VectorXd> anchors;      // first-appearance order
    std::vector<std::vector<Eigen::VectorXd>> group_inputs;
    std::vector<std::vector<double>> group_responses;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const std::vector<std::string> f = split_csv_line(line);
        if (static_cast<Eigen::Index>(f.size()) != p + q + 1)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(p + q + 1) + " fields, got " +
                                 std::to_string(f.size()),
                             line_no);
        Eigen::VectorXd s(p), l(q);
        for (Eigen::Index c = 0; c < p; ++c)
            s[c] = parse_double(f[static_cast<std::size_t>(c)], line_no);
        for (Eigen::Index c = 0; c < q; ++c)
            l[c] = parse_double(f[static_cast<std::size_t>(p + c)], line_no);
        const double y = parse_double(f[static_cast<std::size_t>(p + q)], line_no);

        std::size_t g = anchors.size();
        for (std::size_t i = 0; i < anchors.size(); ++i) {
            if ((anchors[i] - s).lpNorm<Eigen::Infinity>() == 0.0) {
                g = i;
                break;
            }
        }
        if (g == anchors.size()) {
            anchors.push_back(s);
            group_inputs.emplace_back();
            group_responses.emplace_back();
        }
        group_inputs[g].push_back(l);
        group_responses[g].push_back(y);
    }
    if (anchors.empty())
        throw ParseError(path.string() + ": no data rows", line_no);

    GroupedDataset data;
    data.anchors.resize(static_cast<Eigen::Index>(anchors.size()), p);
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        data.anchors.row(static_cast<Eigen::Index>(i)) = anchors[i].transpose();
        Group grp;
        grp.inputs_l.resize(static_cast<Eigen::Index>(group_inputs[i].size()), q);
        grp.responses.resize(static_cast<Eigen::Index>(group_responses[i].size()));
        for (std::size_t r = 0; r < group_inputs[i].size(); ++r) {
            grp.inputs_l.row(static_cast<Eigen::Index>(r)) =
                group_inputs[i][r].transpose();
            grp.responses[static_cast<Eigen::Index>(r)] = group_responses[i][r];
        }
        data.groups.push_back(std::move(grp));
    }

    data.bounds_s = bounds_s ? *bounds_s : padded_data_bounds(data.anchors);
    if (bounds_l) {
        data.bounds_l = *bounds_l;
    } else {
        Eigen::MatrixXd all_l(data.total_rows(), q);
        Eigen::Index at = 0;
        for (const Group& g : data.groups) {
            all_l.middleRows(at, g.inputs_l.rows()) = g.inputs_l;
            at += g.inputs_l.rows();
        }
        data.bounds_l = padded_data_bounds(all_l);
    }

    data.validate();
    return data;
}

std::pair<Eigen::MatrixXd, Eigen::MatrixXd>
read_query_csv(const std::filesystem::path& path, Eigen::Index p,
               Eigen::Index q) {
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("read_query_csv: cannot open " + path.string());

    std::string line;
    std::size_t line_no = 1;
    if (read_stripped_line(in, line).empty() && line.empty())
        throw ParseError("empty file: " + path.string(), 0);

    const std::vector<std::string> header = split_csv_line(line);
    bool has_y = !header.empty() && header.back() == "y";
    const auto [fp, fq] = parse_sl_header(
        header, has_y ? std::vector<std::string>{"y"} : std::vector<std::string>{});
    if (fp != p || fq != q)
        throw ShapeError("query file has dimensions (s=" + std::to_string(fp) +
                         ", l=" + std::to_string(fq) + "), model expects (s=" +
                         std::to_string(p) + ", l=" + std::to_string(q) + ")");

    std::vector<Eigen::VectorXd> srows, lrows;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();
        if (line.empty())
            continue;
        const std::vector<std::string> f = split_csv_line(line);
        const Eigen::Index expected = p + q + (has_y ? 1 : 0);
        if (static_cast<Eigen::Index>(f.size()) != expected)
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(expected) + " fields, got " +
                                 std::to_string(f.size()),
                             line_no);
        Eigen::VectorXd s(p), l(q);
        for (Eigen::Index c = 0; c < p; ++c)
            s[c] = parse_double(f[static_cast<std::size_t>(c)], line_no);
        for (Eigen::Index c = 0; c < q; ++c)
            l[c] = parse_double(f[static_cast<std::size_t>(p + c)], line_no);
        srows.push_back(std::move(s));
        lrows.push_back(std::move(l));
    }
    if (srows.empty())
        throw ParseError(path.string() + ": no query rows", line_no);

    Eigen::MatrixXd qs(static_cast<Eigen::Index>(srows.size()), p);
    Eigen::MatrixXd ql(static_cast<Eigen::Index>(lrows.size()), q);
    for (std::size_t i = 0; i < srows.size(); ++i) {
        qs.row(static_cast<Eigen::Index>(i)) = srows[i].transpose();
        ql.row(static_cast<Eigen::Index>(i)) = lrows[i].transpose();
    }
    return {std::move(qs), std::move(ql)};
}

void write_predictions_csv(const Eigen::MatrixXd& queries_s,
                           const Eigen::MatrixXd& queries_l,
                           const Eigen::VectorXd& predictions,
                           const std::filesystem::path& path) {
    if (queries_s.rows() != predictions.size() ||
        queries_l.rows() != predictions.size())
        throw ShapeError("write_predictions_csv: row count mismatch");
    std::ofstream out(path);
    if (!out)
        throw InvalidInput("write_predictions_csv: cannot open " + path.string());

    for (Eigen::Index c = 0; c < queries_s.cols(); ++c)
        out << (c ? "," : "") << 's' << c + 1;
    for (Eigen::Index c = 0; c < queries_l.cols(); ++c)
        out << ",l" << c + 1;
    out << ",y_pred\n";
    for (Eigen::Index r = 0; r < predictions.size(); ++r) {
        for (Eigen::Index c = 0; c < queries_s.cols(); ++c)
            out << (c ? "," : "") << fmt_double(queries_s(r, c));
        for (Eigen::Index c = 0; c < queries_l.cols(); ++c)
            out << ',' << fmt_double(queries_l(r, c));
        out << ',' << fmt_double(predictions[r]) << '\n';
    }
    if (!out.good())
        throw InvalidInput("write_predictions_csv: write failed for " +
                           path.string());
}

} // namespace hlsvr
