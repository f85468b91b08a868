#ifndef HLSVR_DATASET_IO_HPP
#define HLSVR_DATASET_IO_HPP

#include <filesystem>
#include <utility>

#include "hlsvr/hlsvr.hpp"

namespace hlsvr {

/// Generic grouped-data CSV with header `s1..sp,l1..lq,y`.
void write_grouped_csv(const GroupedDataset& data,
                       const std::filesystem::path& path);

/// Reads the generic schema back; rows sharing an identical s-tuple form one
/// group (first-appearance order). Bounds default to per-column data ranges,
/// padded by +-0.5 around constant columns; pass explicit boxes to override.
GroupedDataset read_grouped_csv(const std::filesystem::path& path,
                                const Box* bounds_s = nullptr,
                                const Box* bounds_l = nullptr);

/// Query CSV `s1..sp,l1..lq` (a trailing `y` column is tolerated and
/// ignored). Returns row-matched (queries_s, queries_l).
std::pair<Eigen::MatrixXd, Eigen::MatrixXd>
read_query_csv(const std::filesystem::path& path, Eigen::Index p,
               Eigen::Index q);

/// Echoes the query columns and appends `y_pred`, preserving row order.
void write_predictions_csv(const Eigen::MatrixXd& queries_s,
                           const Eigen::MatrixXd& queries_l,
                           const Eigen::VectorXd& predictions,
                           const std::filesystem::path& path);

} // namespace hlsvr

#endif // HLSVR_DATASET_IO_HPP
