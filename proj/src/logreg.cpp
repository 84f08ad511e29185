#include "featsel/logreg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "featsel/error.hpp"
#include "featsel/log.hpp"

namespace featsel {

Penalty parse_penalty(std::string_view name) {
    if (name == "l1") return Penalty::l1;
    if (name == "l2") return Penalty::l2;
    throw std::invalid_argument("unknown penalty: " + std::string(name));
}

std::string_view penalty_name(Penalty p) { return p == Penalty::l1 ? "l1" : "l2"; }

double sigmoid(double t) {
    if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
    const double e = std::exp(t);
    return e / (1.0 + e);
}

namespace {

// log(1 + e^t) without overflow.
double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double penalty_value(Penalty p, double lambda, double b) {
    return p == Penalty::l1 ? lambda * std::abs(b) : 0.5 * lambda * b * b;
}

} // namespace

double logistic_loss(const Matrix& z, std::span<const Label> y, double beta0,
                     std::span<const double> beta) {
    if (z.rows() != y.size() || z.cols() != beta.size())
        throw std::invalid_argument("logistic_loss: shape mismatch");
    double loss = 0.0;
    for (std::size_t i = 0; i < z.rows(); ++i) {
        double eta = beta0;
        for (std::size_t j = 0; j < z.cols(); ++j) eta += beta[j] * z(i, j);
        loss += softplus(eta) - static_cast<double>(y[i]) * eta;
    }
    return loss;
}

std::vector<double> logistic_gradient(const Matrix& z, std::span<const Label> y, double beta0,
                                      std::span<const double> beta) {
    if (z.rows() != y.size() || z.cols() != beta.size())
        throw std::invalid_argument("logistic_gradient: shape mismatch");
    std::vector<double> g(z.cols() + 1, 0.0);
    for (std::size_t i = 0; i < z.rows(); ++i) {
        double eta = beta0;
        for (std::size_t j = 0; j < z.cols(); ++j) eta += beta[j] * z(i, j);
        const double r = sigmoid(eta) - static_cast<double>(y[i]);
        g[0] += r;
        for (std::size_t j = 0; j < z.cols(); ++j) g[j + 1] += r * z(i, j);
    }
    return g;
}

LogRegModel LogRegModel::fit(const Dataset& train, const LogRegOptions& opts) {
    if (train.num_classes() != 2)
        throw DataError("lasso_logreg_fit: expected exactly 2 classes, got " +
                        std::to_string(train.num_classes()));
    const auto counts = train.class_counts();
    if (counts[0] == 0 || counts[1] == 0)
        throw DataError("lasso_logreg_fit: both classes must be present");
    if (!(opts.C > 0.0) || !std::isfinite(opts.C))
        throw std::invalid_argument("lasso_logreg_fit: C must be a positive finite number");
    if (!(opts.tol > 0.0)) throw std::invalid_argument("lasso_logreg_fit: tol must be > 0");

    LogRegModel m;
    m.opts_ = opts;
    m.scaler_ = Standardizer::fit(train.x());
    const Matrix zt = m.scaler_.transform(train.x()).transposed();  // one row per feature
    const std::size_t n = train.n();
    const std::size_t p = train.p();
    const double lambda = 1.0 / opts.C;
    std::vector<double> yv(n);
    for (std::size_t i = 0; i < n; ++i) yv[i] = static_cast<double>(train.y()[i]);

    m.beta_.assign(p, 0.0);
    std::vector<double> eta(n, 0.0);
    const std::vector<double> ones(n, 1.0);

    // One proximal Newton step on coordinate j (j == p is the intercept),
    // with a backtracking line search on the full objective.
    auto step = [&](std::size_t j) -> double {
        const std::span<const double> col = j == p ? std::span<const double>(ones) : zt.row(j);
        double& b = j == p ? m.beta0_ : m.beta_[j];
        const double lam = j == p ? 0.0 : lambda;
        const Penalty pen = j == p ? Penalty::l2 : opts.penalty;  // lam = 0 for the intercept

        double g = 0.0, h = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (col[i] == 0.0) continue;
            const double s = sigmoid(eta[i]);
            g += (s - yv[i]) * col[i];
            h += s * (1.0 - s) * col[i] * col[i];
        }
        h = std::max(h, 1e-12);

        double d;
        if (pen == Penalty::l1) {
            if (g + lam <= h * b)
                d = -(g + lam) / h;
            else if (g - lam >= h * b)
                d = -(g - lam) / h;
            else
                d = -b;  // soft-threshold lands on zero
        } else {
            d = -(g + lam * b) / (h + lam);
        }
        if (d == 0.0) return 0.0;

        const double base_pen = penalty_value(pen, lam, b);
        const double model_decrease = g * d + penalty_value(pen, lam, b + d) - base_pen;
        double alpha = 1.0;
        for (int it = 0; it < 50; ++it, alpha *= 0.5) {
            const double ad = alpha * d;
            double diff = penalty_value(pen, lam, b + ad) - base_pen;
            for (std::size_t i = 0; i < n; ++i) {
                if (col[i] == 0.0) continue;
                const double delta = ad * col[i];
                diff += softplus(eta[i] + delta) - softplus(eta[i]) - yv[i] * delta;
            }
            if (diff <= 0.01 * alpha * model_decrease) {
                // b + (-b) is exactly zero, so a full soft-threshold step zeroes b.
                b += ad;
                for (std::size_t i = 0; i < n; ++i) eta[i] += ad * col[i];
                return std::abs(ad);
            }
        }
        return 0.0;
    };

    for (m.epochs_ = 0; m.epochs_ < opts.max_epochs;) {
        ++m.epochs_;
        double change = step(p);
        for (std::size_t j = 0; j < p; ++j) change = std::max(change, step(j));
        m.final_change_ = change;
        if (change < opts.tol) {
            m.converged_ = true;
            break;
        }
    }
    if (!m.converged_) {
        std::ostringstream os;
        os << "lasso_logreg_fit: not converged after " << m.epochs_
           << " epochs (last max coefficient change " << m.final_change_ << ")";
        warn(os.str());
    }
    return m;
}

LogRegModel LogRegModel::from_parameters(const Matrix& x, double beta0, std::vector<double> beta) {
    if (beta.size() != x.cols()) throw std::invalid_argument("from_parameters: width mismatch");
    LogRegModel m;
    m.scaler_ = Standardizer::fit(x);
    m.beta0_ = beta0;
    m.beta_ = std::move(beta);
    m.converged_ = true;
    return m;
}

std::vector<double> LogRegModel::predict_proba(const Matrix& x) const {
    if (x.cols() != beta_.size())
        throw std::invalid_argument("logreg_predict_proba: expected " +
                                    std::to_string(beta_.size()) + " columns, got " +
                                    std::to_string(x.cols()));
    std::vector<double> out(x.rows());
    std::vector<double> z(x.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        scaler_.transform_row(x.row(i), z);
        double eta = beta0_;
        for (std::size_t j = 0; j < z.size(); ++j) eta += beta_[j] * z[j];
        // Keep the open interval even where the sigmoid saturates.
        out[i] = std::clamp(sigmoid(eta), std::numeric_limits<double>::min(),
                            1.0 - std::numeric_limits<double>::epsilon() / 2);
    }
    return out;
}

std::vector<Label> LogRegModel::predict(const Matrix& x) const {
    const auto pr = predict_proba(x);
    std::vector<Label> out(pr.size());
    for (std::size_t i = 0; i < pr.size(); ++i) out[i] = pr[i] >= 0.5 ? 1 : 0;
    return out;
}

FeatureSet LogRegModel::nonzero() const {
    FeatureSet out;
    for (std::size_t j = 0; j < beta_.size(); ++j)
        if (beta_[j] != 0.0) out.push_back(j);
    return out;
}

} // namespace featsel
