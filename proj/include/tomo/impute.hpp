#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "tomo/common.hpp"
#include "tomo/rng.hpp"

namespace tomo {

struct BayesRidgeHyperpriors {
    double alpha1 = 1e-6;
    double alpha2 = 1e-6;
    double lambda1 = 1e-6;
    double lambda2 = 1e-6;
};

// Linear-Gaussian model with evidence-maximized precisions. Fit by
// alternating weight-posterior and (alpha, lambda) updates until the
// relative weight change drops below 1e-6 (or 300 iterations).
class BayesRidgeModel {
public:
    BayesRidgeModel() = default;

    double predict(const Eigen::VectorXd& x) const;
    double predictive_variance(const Eigen::VectorXd& x) const;

    const Eigen::VectorXd& weights() const { return weights_; }
    double intercept() const { return intercept_; }
    double alpha() const { return alpha_; }
    double lambda() const { return lambda_; }
    // Posterior covariance of the weights (centered parametrization).
    const Eigen::MatrixXd& posterior_covariance() const { return sigma_; }

private:
    friend class ImputerModel;
    friend BayesRidgeModel fit_bayes_ridge(const Eigen::MatrixXd&, const Eigen::VectorXd&,
                                           const BayesRidgeHyperpriors&);
    friend BayesRidgeModel fit_bayes_ridge_moments(const Eigen::MatrixXd&,
                                                   const Eigen::VectorXd&, double,
                                                   const Eigen::VectorXd&, double,
                                                   Eigen::Index,
                                                   const BayesRidgeHyperpriors&);

    Eigen::VectorXd weights_;
    Eigen::VectorXd feature_means_;
    Eigen::MatrixXd sigma_;
    double intercept_ = 0.0;
    double alpha_ = 1.0;
    double lambda_ = 1.0;
};

BayesRidgeModel fit_bayes_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                const BayesRidgeHyperpriors& priors = {});

// Gram-space variant: xtx and xty are centered second moments, yty the
// centered target moment; avoids re-streaming the data per column model.
BayesRidgeModel fit_bayes_ridge_moments(const Eigen::MatrixXd& xtx_centered,
                                        const Eigen::VectorXd& xty_centered,
                                        double yty_centered,
                                        const Eigen::VectorXd& feature_means,
                                        double target_mean, Eigen::Index n_rows,
                                        const BayesRidgeHyperpriors& priors = {});

// One Bayesian ridge per measurement column, regressed on the other 35.
class ImputerModel {
public:
    static ImputerModel fit(const Eigen::MatrixXd& x_complete,
                            const BayesRidgeHyperpriors& priors = {}, int t_iterations = 15,
                            int n_seeds = 4);

    const BayesRidgeModel& column_model(int j) const {
        return models_[static_cast<std::size_t>(j)];
    }
    const Eigen::VectorXd& column_means() const { return column_means_; }
    int t_iterations() const { return t_iterations_; }
    int n_seeds() const { return n_seeds_; }

    void save(const std::filesystem::path& path) const;
    static ImputerModel load(const std::filesystem::path& path);

private:
    std::vector<BayesRidgeModel> models_;
    Eigen::VectorXd column_means_;
    int t_iterations_ = 15;
    int n_seeds_ = 4;
};

// Single chained-equation chain: mean initial fill, then t round-robin
// sweeps in ascending column order. Stochastic mode samples each prediction
// from the Gaussian predictive distribution. Observed cells are preserved.
Eigen::MatrixXd impute_once(const Eigen::MatrixXd& x_missing, const ImputerModel& imp,
                            std::uint64_t seed, bool stochastic);

// MICE: n_seeds stochastic chains pooled by per-cell mean, imputed cells
// clamped to [0,1] after pooling.
Eigen::MatrixXd mice_impute(const Eigen::MatrixXd& x_missing, const ImputerModel& imp,
                            std::uint64_t seed = 0);

}  // namespace tomo
