#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "featsel/data.hpp"

namespace featsel {

enum class Penalty { l1, l2 };

Penalty parse_penalty(std::string_view name);
std::string_view penalty_name(Penalty p);

struct LogRegOptions {
    double C = 1.0;  ///< inverse penalty weight, > 0
    Penalty penalty = Penalty::l1;
    double tol = 1e-6;  ///< on the largest coordinate change in an epoch
    std::size_t max_epochs = 10000;
};

/// Binary logistic regression on internally standardized features.
///
/// Minimises  sum_i logloss_i + (1/C) * sum_j |beta_j|  (L1) or
/// sum_i logloss_i + (1/(2C)) * sum_j beta_j^2  (L2); the intercept is never
/// penalised. Coefficients live on the standardized scale. Class id 1 is the
/// positive class.
class LogRegModel {
public:
    static LogRegModel fit(const Dataset& train, const LogRegOptions& opts = {});

    /// P(class 1 | x) for raw (unstandardized) rows.
    std::vector<double> predict_proba(const Matrix& x) const;
    /// Class 1 iff probability >= 0.5.
    std::vector<Label> predict(const Matrix& x) const;

    double beta0() const noexcept { return beta0_; }
    const std::vector<double>& beta() const noexcept { return beta_; }
    double C() const noexcept { return opts_.C; }
    Penalty penalty() const noexcept { return opts_.penalty; }
    const Standardizer& standardizer() const noexcept { return scaler_; }

    /// Features with a coefficient that is not exactly zero.
    FeatureSet nonzero() const;

    bool converged() const noexcept { return converged_; }
    std::size_t epochs() const noexcept { return epochs_; }
    /// Largest coordinate change in the final epoch.
    double final_change() const noexcept { return final_change_; }

    /// Builds a model from explicit parameters (standardizer fitted on `x`).
    static LogRegModel from_parameters(const Matrix& x, double beta0, std::vector<double> beta);

private:
    LogRegOptions opts_;
    Standardizer scaler_;
    double beta0_ = 0.0;
    std::vector<double> beta_;
    bool converged_ = false;
    std::size_t epochs_ = 0;
    double final_change_ = 0.0;
};

/// Numerically stable 1 / (1 + exp(-t)).
double sigmoid(double t);

/// Summed log-loss of labels y in {0,1} for linear scores beta0 + z.beta.
double logistic_loss(const Matrix& z, std::span<const Label> y, double beta0,
                     std::span<const double> beta);

/// Gradient of logistic_loss: element 0 is d/d beta0, then d/d beta_j.
std::vector<double> logistic_gradient(const Matrix& z, std::span<const Label> y, double beta0,
                                      std::span<const double> beta);

} // namespace featsel
