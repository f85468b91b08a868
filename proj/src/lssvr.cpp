#include "hlsvr/lssvr.hpp"

#include <cmath>
#include <string>

namespace hlsvr {

namespace {

void check_finite(const Eigen::MatrixXd& m, const char* what) {
    if (!m.allFinite())
        throw InvalidInput(std::string(what) + ": non-finite entry");
}

double rbf_from_sqdist(double sq_dist, double theta) {
    return std::exp(-theta * sq_dist);
}

// Bordered dual system of the LS-SVR fit, built from normalized inputs.
// jitter is added to the K diagonal together with 1/gamma.
Eigen::MatrixXd assemble_system(const Eigen::MatrixXd& gram, double gamma,
                                double jitter) {
    const Eigen::Index n = gram.rows();
    Eigen::MatrixXd lhs(n + 1, n + 1);
    lhs.topLeftCorner(n, n) = gram;
    lhs.topLeftCorner(n, n).diagonal().array() += 1.0 / gamma + jitter;
    lhs.topRightCorner(n, 1).setOnes();
    lhs.bottomLeftCorner(1, n).setOnes();
    lhs(n, n) = 0.0;
    return lhs;
}

} // namespace

void KernelParams::validate() const {
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw InvalidInput("kernel: theta must be positive and finite");
}

double rbf_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                  KernelParams params) {
    params.validate();
    if (x.size() != z.size())
        throw ShapeError("rbf_kernel: dimension mismatch");
    check_finite(x, "rbf_kernel");
    check_finite(z, "rbf_kernel");
    return rbf_from_sqdist((x - z).squaredNorm(), params.theta);
}

Eigen::MatrixXd gram_matrix_serial(const Eigen::MatrixXd& inputs,
                                   KernelParams params) {
    params.validate();
    if (inputs.rows() < 1)
        throw InvalidInput("gram_matrix: need at least one input row");
    check_finite(inputs, "gram_matrix");

    const Eigen::Index n = inputs.rows();
    Eigen::MatrixXd gram(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        gram(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j) {
            const double k = rbf_from_sqdist(
                (inputs.row(i) - inputs.row(j)).squaredNorm(), params.theta);
            gram(i, j) = k;
            gram(j, i) = k;
        }
    }
    return gram;
}

Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& inputs, KernelParams params) {
    params.validate();
    if (inputs.rows() < 1)
        throw InvalidInput("gram_matrix: need at least one input row");
    check_finite(inputs, "gram_matrix");

    const Eigen::Index n = inputs.rows();
    Eigen::MatrixXd gram(n, n);
#pragma omp parallel for schedule(dynamic, 16) if (n >= 64)
    for (Eigen::Index i = 0; i < n; ++i) {
        gram(i, i) = 1.0;
        for (Eigen::Index j = i + 1; j < n; ++j)
            gram(i, j) = rbf_from_sqdist(
                (inputs.row(i) - inputs.row(j)).squaredNorm(), params.theta);
    }
    // mirror the strictly upper triangle; entries are computed once each
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = i + 1; j < n; ++j)
            gram(j, i) = gram(i, j);
    return gram;
}

LssvrModel fit_lssvr(const Eigen::MatrixXd& inputs,
                     const Eigen::VectorXd& responses, double gamma,
                     KernelParams kernel, const AffineMap& map) {
    kernel.validate();
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw InvalidInput("fit_lssvr: gamma must be positive and finite");
    if (inputs.rows() < 1)
        throw InvalidInput("fit_lssvr: need at least one training row");
    if (inputs.rows() != responses.size())
        throw ShapeError("fit_lssvr: inputs/responses row count mismatch");
    if (map.dim() != inputs.cols())
        throw ShapeError("fit_lssvr: normalization map dimension mismatch");
    check_finite(inputs, "fit_lssvr inputs");
    check_finite(responses, "fit_lssvr responses");

    LssvrModel model;
    model.support_inputs = map.apply_rows(inputs);
    model.kernel = kernel;
    model.gamma = gamma;
    model.input_map = map;

    const Eigen::Index n = inputs.rows();
    if (n == 1) {
        // The second row of the dual system forces alpha = 0, the first then
        // gives b = y exactly; keeping this closed form makes the m = 1
        // hierarchy degeneracy bitwise exact.
        model.alphas = Eigen::VectorXd::Zero(1);
        model.bias = responses[0];
        return model;
    }

    const Eigen::MatrixXd gram = gram_matrix(model.support_inputs, kernel);
    Eigen::VectorXd rhs(n + 1);
    rhs.head(n) = responses;
    rhs[n] = 0.0;

    constexpr double kRcondFloor = 1e-14; // condition numbers above 1e14 are rejected
    Eigen::MatrixXd lhs = assemble_system(gram, gamma, 0.0);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(lhs);
    double rcond = lu.rcond();

    if (!(rcond > kRcondFloor)) {
        // Duplicate rows (legitimate in nested designs) can make the system
        // singular; retry once with a small diagonal jitter.
        const double jitter = 1e-10 * gram.trace() / static_cast<double>(n);
        lhs = assemble_system(gram, gamma, jitter);
        lu.compute(lhs);
        rcond = lu.rcond();
        if (!(rcond > kRcondFloor))
            throw NumericFailure(
                "fit_lssvr: system too ill-conditioned (cond ~ " +
                    std::to_string(1.0 / rcond) + ")",
                1.0 / rcond);
    }

    Eigen::VectorXd sol = lu.solve(rhs);
    // one step of iterative refinement
    sol += lu.solve(rhs - lhs * sol);

    const double residual = (lhs * sol - rhs).lpNorm<Eigen::Infinity>();
    const double tol = 1e-8 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>());
    if (!sol.allFinite() || residual > tol)
        throw NumericFailure("fit_lssvr: solve residual " +
                                 std::to_string(residual) + " exceeds tolerance",
                             1.0 / rcond);

    model.alphas = sol.head(n);
    model.bias = sol[n];
    return model;
}

LssvrModel fit_lssvr(const Eigen::MatrixXd& inputs,
                     const Eigen::VectorXd& responses, double gamma,
                     KernelParams kernel) {
    return fit_lssvr(inputs, responses, gamma, kernel,
                     AffineMap::identity(inputs.cols()));
}

namespace {

double predict_normalized(const LssvrModel& model, const Eigen::VectorXd& unit_q) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < model.support_inputs.rows(); ++i)
        acc += model.alphas[i] *
               rbf_from_sqdist(
                   (model.support_inputs.row(i).transpose() - unit_q).squaredNorm(),
                   model.kernel.theta);
    return acc + model.bias;
}

} // namespace

double predict_lssvr(const LssvrModel& model, const Eigen::VectorXd& query) {
    if (query.size() != model.input_map.dim())
        throw ShapeError("predict_lssvr: query dimension mismatch");
    check_finite(query, "predict_lssvr query");
    return predict_normalized(model, model.input_map.apply(query));
}

Eigen::VectorXd predict_many_serial(const LssvrModel& model,
                                    const Eigen::MatrixXd& queries) {
    if (queries.cols() != model.input_map.dim())
        throw ShapeError("predict_many: query dimension mismatch");
    check_finite(queries, "predict_many queries");
    const Eigen::MatrixXd unit = model.input_map.apply_rows(queries);
    Eigen::VectorXd out(queries.rows());
    for (Eigen::Index r = 0; r < queries.rows(); ++r)
        out[r] = predict_normalized(model, unit.row(r).transpose());
    return out;
}

Eigen::VectorXd predict_many(const LssvrModel& model,
                             const Eigen::MatrixXd& queries) {
    if (queries.cols() != model.input_map.dim())
        throw ShapeError("predict_many: query dimension mismatch");
    check_finite(queries, "predict_many queries");
    const Eigen::MatrixXd unit = model.input_map.apply_rows(queries);
    Eigen::VectorXd out(queries.rows());
    const Eigen::Index nq = queries.rows();
#pragma omp parallel for schedule(static) if (nq >= 32)
    for (Eigen::Index r = 0; r < nq; ++r)
        out[r] = predict_normalized(model, unit.row(r).transpose());
    return out;
}

} // namespace hlsvr
