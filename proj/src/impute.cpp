#include "tomo/impute.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>

#include <json.hpp>

#include "tomo/threads.hpp"

namespace tomo {

double BayesRidgeModel::predict(const Eigen::VectorXd& x) const {
    return intercept_ + weights_.dot(x);
}

double BayesRidgeModel::predictive_variance(const Eigen::VectorXd& x) const {
    const Eigen::VectorXd xc = x - feature_means_;
    return 1.0 / alpha_ + xc.dot(sigma_ * xc);
}

BayesRidgeModel fit_bayes_ridge_moments(const Eigen::MatrixXd& xtx_centered,
                                        const Eigen::VectorXd& xty_centered,
                                        double yty_centered,
                                        const Eigen::VectorXd& feature_means,
                                        double target_mean, Eigen::Index n_rows,
                                        const BayesRidgeHyperpriors& priors) {
    const Eigen::Index p = xtx_centered.rows();
    const double n = static_cast<double>(n_rows);
    if (xtx_centered.diagonal().maxCoeff() <= 0.0)
        throw DegenerateDesignError("all features have zero variance");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(xtx_centered);
    const Eigen::VectorXd evals = es.eigenvalues().cwiseMax(0.0);
    const Eigen::MatrixXd& v = es.eigenvectors();
    const Eigen::VectorXd vty = v.transpose() * xty_centered;

    // Initial noise precision from target variance, as in the reference
    // evidence-approximation scheme.
    const double y_var = yty_centered / std::max(1.0, n - 1.0);
    double alpha = y_var > 0.0 ? 1.0 / y_var : 1.0;
    double lambda = 1.0;

    Eigen::VectorXd w = Eigen::VectorXd::Zero(p);
    for (int it = 0; it < 300; ++it) {
        const Eigen::VectorXd denom = (alpha * evals.array() + lambda).matrix();
        const Eigen::VectorXd w_new = v * (alpha * vty.array() / denom.array()).matrix();
        const double gamma = (alpha * evals.array() / denom.array()).sum();
        const double sse = std::max(
            0.0, yty_centered - 2.0 * w_new.dot(xty_centered) + w_new.dot(xtx_centered * w_new));
        const double w2 = w_new.squaredNorm();
        lambda = (gamma + 2.0 * priors.lambda1) / (w2 + 2.0 * priors.lambda2);
        alpha = (n - gamma + 2.0 * priors.alpha1) / (sse + 2.0 * priors.alpha2);
        const double change = (w_new - w).norm();
        const double scale = std::max(w_new.norm(), 1e-12);
        w = w_new;
        if (change / scale < 1e-6 && it > 0) break;
    }

    BayesRidgeModel model;
    model.weights_ = w;
    model.feature_means_ = feature_means;
    model.intercept_ = target_mean - w.dot(feature_means);
    model.alpha_ = alpha;
    model.lambda_ = lambda;
    const Eigen::VectorXd denom = (alpha * evals.array() + lambda).matrix();
    model.sigma_ = v * denom.cwiseInverse().asDiagonal() * v.transpose();
    return model;
}

BayesRidgeModel fit_bayes_ridge(const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                                const BayesRidgeHyperpriors& priors) {
    if (x.rows() != y.size()) throw ShapeMismatchError("bayes ridge: X/y row mismatch");
    if (x.rows() < 2) throw DegenerateDesignError("bayes ridge needs at least 2 rows");
    const Eigen::VectorXd means = x.colwise().mean();
    const double y_mean = y.mean();
    const Eigen::MatrixXd xc = x.rowwise() - means.transpose();
    const Eigen::VectorXd yc = y.array() - y_mean;
    return fit_bayes_ridge_moments(xc.transpose() * xc, xc.transpose() * yc, yc.squaredNorm(),
                                   means, y_mean, x.rows(), priors);
}

ImputerModel ImputerModel::fit(const Eigen::MatrixXd& x_complete,
                               const BayesRidgeHyperpriors& priors, int t_iterations,
                               int n_seeds) {
    const Eigen::Index n = x_complete.rows();
    const Eigen::Index p = x_complete.cols();
    if (n < 2) throw DegenerateDesignError("imputer needs at least 2 rows");
    if (x_complete.hasNaN()) throw Error("imputer must be fitted on complete data");

    ImputerModel imp;
    imp.t_iterations_ = t_iterations;
    imp.n_seeds_ = n_seeds;
    imp.column_means_ = x_complete.colwise().mean();

    // One pass over the data builds the centered Gram matrix; every column
    // model is then fitted in moment space with its row/column deleted.
    const Eigen::MatrixXd xc = x_complete.rowwise() - imp.column_means_.transpose();
    const Eigen::MatrixXd gram = xc.transpose() * xc;

    imp.models_.resize(static_cast<std::size_t>(p));
    parallel_for(static_cast<std::size_t>(p), [&](std::size_t j) {
        const Eigen::Index tj = static_cast<Eigen::Index>(j);
        std::vector<Eigen::Index> others;
        others.reserve(static_cast<std::size_t>(p - 1));
        for (Eigen::Index c = 0; c < p; ++c)
            if (c != tj) others.push_back(c);
        Eigen::MatrixXd xtx(p - 1, p - 1);
        Eigen::VectorXd xty(p - 1);
        Eigen::VectorXd fmeans(p - 1);
        for (Eigen::Index a = 0; a < p - 1; ++a) {
            xty(a) = gram(others[static_cast<std::size_t>(a)], tj);
            fmeans(a) = imp.column_means_(others[static_cast<std::size_t>(a)]);
            for (Eigen::Index b = 0; b < p - 1; ++b)
                xtx(a, b) = gram(others[static_cast<std::size_t>(a)],
                                 others[static_cast<std::size_t>(b)]);
        }
        imp.models_[j] = fit_bayes_ridge_moments(xtx, xty, gram(tj, tj), fmeans,
                                                 imp.column_means_(tj), n, priors);
    });
    return imp;
}

Eigen::MatrixXd impute_once(const Eigen::MatrixXd& x_missing, const ImputerModel& imp,
                            std::uint64_t seed, bool stochastic) {
    const Eigen::Index n = x_missing.rows();
    const Eigen::Index p = x_missing.cols();
    Eigen::MatrixXd x = x_missing;

    // Missing-cell bookkeeping; rows with nothing observed cannot be imputed.
    std::vector<std::vector<Eigen::Index>> missing_rows(static_cast<std::size_t>(p));
    for (Eigen::Index r = 0; r < n; ++r) {
        int count = 0;
        for (Eigen::Index c = 0; c < p; ++c) {
            if (is_missing(x(r, c))) {
                ++count;
                missing_rows[static_cast<std::size_t>(c)].push_back(r);
            }
        }
        if (count == p) throw AllMissingError("row " + std::to_string(r) + " has no observed cells");
    }

    bool any = false;
    for (Eigen::Index c = 0; c < p; ++c) {
        for (Eigen::Index r : missing_rows[static_cast<std::size_t>(c)]) {
            x(r, c) = imp.column_means()(c);
            any = true;
        }
    }
    if (!any) return x;

    Rng rng(seed);
    Eigen::VectorXd features(p - 1);
    for (int sweep = 0; sweep < imp.t_iterations(); ++sweep) {
        for (Eigen::Index c = 0; c < p; ++c) {
            const auto& rows = missing_rows[static_cast<std::size_t>(c)];
            if (rows.empty()) continue;
            const BayesRidgeModel& model = imp.column_model(static_cast<int>(c));
            for (Eigen::Index r : rows) {
                Eigen::Index at = 0;
                for (Eigen::Index f = 0; f < p; ++f)
                    if (f != c) features(at++) = x(r, f);
                double value = model.predict(features);
                if (stochastic) {
                    const double var = model.predictive_variance(features);
                    value += std::sqrt(std::max(0.0, var)) * rng.normal();
                }
                x(r, c) = value;
            }
        }
    }
    return x;
}

Eigen::MatrixXd mice_impute(const Eigen::MatrixXd& x_missing, const ImputerModel& imp,
                            std::uint64_t seed) {
    const int chains = imp.n_seeds();
    std::vector<Eigen::MatrixXd> filled(static_cast<std::size_t>(chains));
    parallel_for(static_cast<std::size_t>(chains), [&](std::size_t k) {
        filled[k] = impute_once(x_missing, imp, derive_seed(seed, k), true);
    });
    Eigen::MatrixXd pooled = filled[0];
    for (int k = 1; k < chains; ++k) pooled += filled[static_cast<std::size_t>(k)];
    pooled /= static_cast<double>(chains);
    // Observed cells stay bit-identical; imputed ones are clamped to [0,1].
    for (Eigen::Index r = 0; r < pooled.rows(); ++r)
        for (Eigen::Index c = 0; c < pooled.cols(); ++c)
            pooled(r, c) = is_missing(x_missing(r, c)) ? clamp01(pooled(r, c)) : x_missing(r, c);
    return pooled;
}

void ImputerModel::save(const std::filesystem::path& path) const {
    nlohmann::json j;
    j["schema"] = "tomoforge-imputer-v1";
    j["t_iterations"] = t_iterations_;
    j["n_seeds"] = n_seeds_;
    j["column_means"] = std::vector<double>(column_means_.data(),
                                            column_means_.data() + column_means_.size());
    auto& cols = j["columns"] = nlohmann::json::array();
    for (const auto& m : models_) {
        nlohmann::json cj;
        cj["weights"] = std::vector<double>(m.weights().data(),
                                            m.weights().data() + m.weights().size());
        cj["intercept"] = m.intercept();
        cj["alpha"] = m.alpha();
        cj["lambda"] = m.lambda();
        const auto& s = m.posterior_covariance();
        cj["posterior_covariance"] = std::vector<double>(s.data(), s.data() + s.size());
        cols.push_back(std::move(cj));
    }
    std::ofstream f(path);
    if (!f) throw IoError("cannot write imputer: " + path.string());
    f << j.dump() << "\n";
}

ImputerModel ImputerModel::load(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open imputer: " + path.string());
    nlohmann::json j = nlohmann::json::parse(f, nullptr, false);
    if (j.is_discarded() || j.value("schema", "") != "tomoforge-imputer-v1")
        throw SchemaError("not an imputer model: " + path.string());
    ImputerModel imp;
    imp.t_iterations_ = j.at("t_iterations").get<int>();
    imp.n_seeds_ = j.at("n_seeds").get<int>();
    const auto means = j.at("column_means").get<std::vector<double>>();
    imp.column_means_ = Eigen::Map<const Eigen::VectorXd>(means.data(),
                                                          static_cast<Eigen::Index>(means.size()));
    for (const auto& cj : j.at("columns")) {
        BayesRidgeModel m;
        const auto w = cj.at("weights").get<std::vector<double>>();
        const Eigen::Index p = static_cast<Eigen::Index>(w.size());
        m.weights_ = Eigen::Map<const Eigen::VectorXd>(w.data(), p);
        m.intercept_ = cj.at("intercept").get<double>();
        m.alpha_ = cj.at("alpha").get<double>();
        m.lambda_ = cj.at("lambda").get<double>();
        const auto s = cj.at("posterior_covariance").get<std::vector<double>>();
        m.sigma_ = Eigen::Map<const Eigen::MatrixXd>(s.data(), p, p);
        // Feature means for column j are the other columns' means.
        imp.models_.push_back(std::move(m));
    }
    const Eigen::Index p = imp.column_means_.size();
    for (Eigen::Index j2 = 0; j2 < p; ++j2) {
        Eigen::VectorXd fm(p - 1);
        Eigen::Index at = 0;
        for (Eigen::Index c = 0; c < p; ++c)
            if (c != j2) fm(at++) = imp.column_means_(c);
        imp.models_[static_cast<std::size_t>(j2)].feature_means_ = fm;
    }
    return imp;
}

}  // namespace tomo
