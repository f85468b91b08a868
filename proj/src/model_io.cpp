#include "hlsvr/model_io.hpp"

#include <fstream>

#include <json.hpp>

namespace hlsvr {

namespace {

using nlohmann::json;

json vec_to_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i)
        a.push_back(v[i]);
    return a;
}

json mat_to_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c)
            row.push_back(m(r, c));
        rows.push_back(std::move(row));
    }
    return rows;
}

Eigen::VectorXd vec_from_json(const json& a) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(a.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = a.at(i).get<double>();
    return v;
}

Eigen::MatrixXd mat_from_json(const json& rows) {
    const Eigen::Index nr = static_cast<Eigen::Index>(rows.size());
    const Eigen::Index nc =
        nr == 0 ? 0 : static_cast<Eigen::Index>(rows.at(0).size());
    Eigen::MatrixXd m(nr, nc);
    for (Eigen::Index r = 0; r < nr; ++r) {
        const json& row = rows.at(static_cast<std::size_t>(r));
        if (static_cast<Eigen::Index>(row.size()) != nc)
            throw ParseError("model file: ragged matrix rows");
        for (Eigen::Index c = 0; c < nc; ++c)
            m(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
    }
    return m;
}

json box_to_json(const Box& b) {
    return {{"lo", vec_to_json(b.lo)}, {"hi", vec_to_json(b.hi)}};
}

Box box_from_json(const json& j) {
    Box b;
    b.lo = vec_from_json(j.at("lo"));
    b.hi = vec_from_json(j.at("hi"));
    return b;
}

json low_model_to_json(const LssvrModel& m) {
    return {{"support_inputs", mat_to_json(m.support_inputs)},
            {"alphas", vec_to_json(m.alphas)},
            {"bias", m.bias},
            {"theta", m.kernel.theta},
            {"gamma", m.gamma},
            {"map_lo", vec_to_json(m.input_map.offset())},
            {"map_inv_span", vec_to_json(m.input_map.inv_span())}};
}

LssvrModel low_model_from_json(const json& j) {
    LssvrModel m;
    m.support_inputs = mat_from_json(j.at("support_inputs"));
    m.alphas = vec_from_json(j.at("alphas"));
    m.bias = j.at("bias").get<double>();
    m.kernel.theta = j.at("theta").get<double>();
    m.gamma = j.at("gamma").get<double>();
    m.input_map = AffineMap::from_parts(vec_from_json(j.at("map_lo")),
                                        vec_from_json(j.at("map_inv_span")));
    if (m.support_inputs.rows() != m.alphas.size())
        throw ParseError("model file: support/alpha count mismatch");
    return m;
}

} // namespace

void save_hlsvr_model(const HlsvrModel& model,
                      const std::filesystem::path& path) {
    json j;
    j["format"] = "hlsvr-model";
    j["version"] = kModelFormatVersion;
    j["anchors"] = mat_to_json(model.anchors);
    j["bounds_s"] = box_to_json(model.bounds_s);
    j["bounds_l"] = box_to_json(model.bounds_l);
    j["high_gamma"] = model.high_policy.gamma;
    if (model.high_policy.theta)
        j["high_policy_theta"] = *model.high_policy.theta;
    j["high_theta"] = model.high_theta;
    json low = json::array();
    for (const LssvrModel& m : model.low_models)
        low.push_back(low_model_to_json(m));
    j["low_models"] = std::move(low);

    std::ofstream out(path);
    if (!out)
        throw InvalidInput("save_hlsvr_model: cannot open " + path.string());
    out << j.dump(2) << '\n';
    if (!out.good())
        throw InvalidInput("save_hlsvr_model: write failed for " + path.string());
}

HlsvrModel load_hlsvr_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw InvalidInput("load_hlsvr_model: cannot open " + path.string());
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw ParseError("model file " + path.string() + ": " + e.what());
    }

    try {
        if (j.at("format").get<std::string>() != "hlsvr-model")
            throw ParseError("model file " + path.string() +
                             ": unrecognized format tag");
        if (j.at("version").get<int>() != kModelFormatVersion)
            throw ParseError("model file " + path.string() +
                             ": unsupported version " +
                             j.at("version").dump());

        HlsvrModel model;
        model.anchors = mat_from_json(j.at("anchors"));
        model.bounds_s = box_from_json(j.at("bounds_s"));
        model.bounds_l = box_from_json(j.at("bounds_l"));
        model.high_policy.gamma = j.at("high_gamma").get<double>();
        if (j.contains("high_policy_theta"))
            model.high_policy.theta = j.at("high_policy_theta").get<double>();
        model.high_theta = j.at("high_theta").get<double>();
        for (const json& lm : j.at("low_models"))
            model.low_models.push_back(low_model_from_json(lm));

        if (model.low_models.empty() ||
            static_cast<Eigen::Index>(model.low_models.size()) !=
                model.anchors.rows())
            throw ParseError("model file " + path.string() +
                             ": anchor/low-model count mismatch");
        return model;
    } catch (const json::exception& e) {
        throw ParseError("model file " + path.string() + ": " + e.what());
    }
}

} // namespace hlsvr
