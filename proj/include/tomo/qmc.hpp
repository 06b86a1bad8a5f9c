#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <vector>

#include "tomo/common.hpp"

namespace tomo {

// Radical-inverse value of `index` in a prime base, computed with integer
// digit reversal and a single division so results are correctly rounded.
double halton(std::uint64_t index, std::uint64_t base);

// Boolean missingness masks; each row has exactly k cells turned off.
struct Mask {
    int k = 0;
    std::vector<std::uint8_t> cells;  // rows * 36, 1 = forced missing
    Eigen::Index rows = 0;

    bool at(Eigen::Index r, int c) const {
        return cells[static_cast<std::size_t>(r) * kNumMeasurements +
                     static_cast<std::size_t>(c)] != 0;
    }
};

// Columns are drawn from a shared 2-D Halton stream (bases 2 and 3) mapped
// to [0,36); duplicate columns within a row are rejected and redrawn.
std::vector<Mask> gen_masks(int n_masks, int k, Eigen::Index n_rows,
                            std::uint64_t seed_offset);

// Paper mask schedule: 50 masks per missing measurement, capped at 500.
// Desk runs shrink both numbers, e.g. per_k=10, cap=50.
int mask_count_for_k(int k, int per_k = 50, int cap = 500);

struct McEstimate {
    double mean = 0.0;
    double std = 0.0;
    int n_masks = 0;
    int k = 0;
};

// Applies the mask, runs `recover`, and reduces `metric(original, recovered)`
// over masks in index order.
McEstimate mc_estimate(
    const Eigen::MatrixXd& data, int k, int n_masks, std::uint64_t seed_offset,
    const std::function<Eigen::MatrixXd(const Eigen::MatrixXd&)>& recover,
    const std::function<double(const Eigen::MatrixXd&, const Eigen::MatrixXd&)>& metric);

// Least-squares a for mse ~ a * k^2 (no intercept or linear term).
double fit_quadratic_no_intercept(const std::vector<double>& ks,
                                  const std::vector<double>& mses);

// Masks a copy of `data`: masked cells become NaN.
Eigen::MatrixXd apply_mask(const Eigen::MatrixXd& data, const Mask& mask);

// Mean squared error over the masked cells.
double masked_mse(const Eigen::MatrixXd& original, const Eigen::MatrixXd& recovered,
                  const Mask& mask);

}  // namespace tomo
