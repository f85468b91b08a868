#ifndef HLSVR_DENTAL_HPP
#define HLSVR_DENTAL_HPP

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "hlsvr/harness.hpp"
#include "hlsvr/hlsvr.hpp"

namespace hlsvr {

struct Material {
    int id = 0; // 1..8
    std::string name;
    double elastic_modulus_gpa = 0.0;
    double poisson_ratio = 0.0;
};

/// The eight implant materials, ordered by id.
const std::vector<Material>& builtin_materials();

const Material& material_by_id(int id);

/// (elastic modulus, Poisson's ratio) ranges spanned by the material table;
/// the small-sample bounds used to normalize material anchors.
Box material_bounds();

/// Design ranges of the five structure parameters L_C, L_T, P, L, beta
/// (mm, mm, mm, mm, degrees).
Box structure_bounds();

inline constexpr int kDentalExperiments = 15;
inline constexpr int kSamplesPerMaterial = 25;

/// One leave-two-materials-out experiment: six training materials and two
/// testing materials, each with its own 25-point LHS over the structure box.
struct DoePlan {
    int experiment_no = 0; // 1..15
    std::array<int, 6> train_materials{};
    std::array<int, 2> test_materials{};
    std::vector<Eigen::MatrixXd> train_designs; // 6 x (25 x 5)
    std::vector<Eigen::MatrixXd> test_designs;  // 2 x (25 x 5)
};

/// All 15 experiments. The material splits are fixed (every 2-subset of
/// materials 2..7 as the test pair); only the LHS designs depend on seed.
std::vector<DoePlan> generate_doe(std::uint64_t seed);

/// Writes `exp,role,material_id,E_gpa,nu,L_C,L_T,P,L,beta` rows (no stress
/// column; responses are appended externally).
void export_plan_csv(const DoePlan& plan, const std::filesystem::path& path);

struct DentalExperimentData {
    int experiment_no = 0;
    GroupedDataset train;
    GroupedDataset test;
};

/// Reads a completed experiment CSV (the exported schema plus a filled
/// stress_mpa column) back as grouped train/test datasets with material
/// (E, nu) anchors. Malformed content raises ParseError with the line
/// number; duplicate (material, design point) rows raise IntegrityError.
DentalExperimentData ingest_responses_csv(const std::filesystem::path& path);

/// Fits HL-SVR and conventional SVR per experiment, scores test RMSE, and
/// runs both paired tests across the 15 experiments.
ExperimentReport run_dental_study(const std::vector<DentalExperimentData>& experiments,
                                  const TuningConfig& tuner,
                                  HighLevelPolicy policy = {});

} // namespace hlsvr

#endif // HLSVR_DENTAL_HPP
