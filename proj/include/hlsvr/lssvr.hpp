#ifndef HLSVR_LSSVR_HPP
#define HLSVR_LSSVR_HPP

#include <Eigen/Dense>

#include "hlsvr/box.hpp"
#include "hlsvr/errors.hpp"

namespace hlsvr {

/// RBF width: k(x, z) = exp(-theta * ||x - z||^2). Note this is the raw
/// squared-distance coefficient, not the 1/(2 sigma^2) parameterization;
/// theta = 1 / (2 sigma^2) converts between the two.
struct KernelParams {
    double theta = 1.0;

    void validate() const;
};

double rbf_kernel(const Eigen::VectorXd& x, const Eigen::VectorXd& z,
                  KernelParams params);

/// n x n RBF Gram matrix of the rows of `inputs`. Symmetric, unit diagonal,
/// entries in (0, 1]. OpenMP-parallel over rows for larger n.
Eigen::MatrixXd gram_matrix(const Eigen::MatrixXd& inputs, KernelParams params);

/// Serial reference for gram_matrix; must produce bit-identical output.
Eigen::MatrixXd gram_matrix_serial(const Eigen::MatrixXd& inputs,
                                   KernelParams params);

/// Fitted least-squares SVR. Training solves the bordered dual system
///
///   [ K + (1/gamma) I   1 ] [alpha]   [y]
///   [ 1^T               0 ] [  b  ] = [0]
///
/// so sum(alpha) = 0 holds up to solver residual. Inputs are stored in
/// normalized coordinates; `input_map` is applied to queries in predict.
struct LssvrModel {
    Eigen::MatrixXd support_inputs; // n x d, normalized coordinates
    Eigen::VectorXd alphas;         // n dual weights
    double bias = 0.0;
    KernelParams kernel;
    double gamma = 0.0;
    AffineMap input_map;

    Eigen::Index support_count() const { return support_inputs.rows(); }
    Eigen::Index dim() const { return input_map.dim(); }
};

/// Fit on raw inputs; `map` normalizes them (and later the queries).
LssvrModel fit_lssvr(const Eigen::MatrixXd& inputs,
                     const Eigen::VectorXd& responses, double gamma,
                     KernelParams kernel, const AffineMap& map);

/// Identity normalization overload.
LssvrModel fit_lssvr(const Eigen::MatrixXd& inputs,
                     const Eigen::VectorXd& responses, double gamma,
                     KernelParams kernel);

/// sum_i alpha_i k(x_i, query) + b at a raw-coordinate query.
double predict_lssvr(const LssvrModel& model, const Eigen::VectorXd& query);

/// Row-wise prediction; OpenMP-parallel over queries, elementwise identical
/// to predict_lssvr per row.
Eigen::VectorXd predict_many(const LssvrModel& model,
                             const Eigen::MatrixXd& queries);

/// Serial reference for predict_many; bit-identical output.
Eigen::VectorXd predict_many_serial(const LssvrModel& model,
                                    const Eigen::MatrixXd& queries);

} // namespace hlsvr

#endif // HLSVR_LSSVR_HPP
