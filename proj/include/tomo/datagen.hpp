#pragma once

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "tomo/noise.hpp"
#include "tomo/qcore.hpp"

namespace tomo {

enum class Split : std::uint8_t { Train = 0, Val = 1, Test = 2 };

std::string split_name(Split s);
Split parse_split(const std::string& name);

enum class StateKind { Pure, Mixed };

struct Dataset {
    Eigen::MatrixXd X;                     // n x 36, NaN marks a missing cell
    Eigen::MatrixXd Y;                     // n x 16 when present, else 0 x 0
    Eigen::VectorXi labels;                // n when present, else 0
    std::vector<Split> split;              // n
    std::vector<std::int64_t> state_id;    // n
    nlohmann::json meta = nlohmann::json::object();

    Eigen::Index rows() const { return X.rows(); }
    bool has_y() const { return Y.rows() > 0; }
    bool has_labels() const { return labels.size() > 0; }

    Dataset select(const std::vector<Eigen::Index>& idx) const;
    Dataset subset(Split s) const;
    std::vector<Eigen::Index> indices_of(Split s) const;

    // Row-count agreement across fields plus split-fraction checks.
    void validate() const;
};

Dataset concat(const std::vector<Dataset>& parts);

struct GenConfig {
    int n_pure = 50000;
    int n_mixed = 50000;
    int noisy_states_per_sigma = 300;
    int rotations_per_state = 400;
    std::vector<double> sigma_list = {M_PI / 24.0, M_PI / 12.0, M_PI / 6.0};
    std::array<double, 3> split_ratios = {0.90, 0.05, 0.05};
    // normal, laplace, brown, blue, pink; must sum to rotations_per_state.
    std::array<int, 5> distribution_mix = {125, 125, 50, 50, 50};
    std::uint64_t master_seed = 0;

    // Paper-scale reference: n_pure = n_mixed = 1'000'000, 3000 noisy states
    // per sigma, 400 rotations each.
    static GenConfig desk();
    static GenConfig paper();

    // Proportional 5:5:2:2:2 allocation with largest-remainder rounding.
    static std::array<int, 5> mix_for_rotations(int rotations);

    void validate() const;
};

// Split sizes for n rows under the given ratios; train gets the remainder so
// counts always sum to n and match the ratios within one row.
std::array<Eigen::Index, 3> split_counts(Eigen::Index n, const std::array<double, 3>& ratios);

// Noiseless design matrix X (Born probabilities) and target matrix Y (tau).
Dataset gen_noiseless(StateKind kind, int n, std::uint64_t seed,
                      const std::array<double, 3>& ratios = {0.90, 0.05, 0.05});

struct NoisyTriple {
    Dataset allnoise;          // X = noisy rows, Y = tau copies
    Eigen::MatrixXd x_nonoise; // aligned noiseless copies, same row order
};

// n_states source states, rotations_per_state noisy rows each, one sigma.
// Train/val/test partitions are disjoint in the underlying states.
NoisyTriple gen_noisy(StateKind kind, int n_states, double sigma, const GenConfig& cfg,
                      std::uint64_t seed);

struct ClassifierSets {
    Dataset ispure;   // label 0 = pure, 1 = mixed
    Dataset isnoise;  // label 0 = noiseless, 1 = noisy
};

ClassifierSets build_classifier_sets(const Dataset& noiseless_pure,
                                     const Dataset& noiseless_mixed,
                                     const Dataset& noisy_pure,
                                     const Dataset& noisy_mixed);

// Persistence. Format picked by extension: .csv (header m00..m35 / t00..t15,
// missing as empty cell) or .bin (magic TMF1, little-endian f64 rows, NaN
// encodes missing). A <path>.meta.json sidecar carries schema and metadata.
void save(const Dataset& ds, const std::filesystem::path& path);
Dataset load(const std::filesystem::path& path);

}  // namespace tomo
