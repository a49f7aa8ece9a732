#include "granular/anfis.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "granular/error.hpp"

namespace granular {

double GaussianMf::operator()(double x) const noexcept {
    const double z = (x - center) / sigma;
    return std::exp(-0.5 * z * z);
}

double TskRule::output(std::span<const double> scaled) const noexcept {
    double f = consequent.back();
    for (std::size_t i = 0; i < scaled.size(); ++i) f += consequent[i] * scaled[i];
    return f;
}

void TskModel::validate() const {
    if (rules.empty()) fail(ErrorCode::empty_cluster_set, "TSK model has no rules");
    if (normalization.size() != input_dim)
        fail(ErrorCode::dimension_mismatch, "normalization does not match the input dimension");
    for (const auto& r : rules)
        if (r.premises.size() != input_dim || r.consequent.size() != input_dim + 1)
            fail(ErrorCode::dimension_mismatch, "rule shape does not match the input dimension");
}

namespace {

void check_samples(std::span<const Vector> inputs, std::span<const double> targets, std::size_t dim) {
    if (inputs.empty()) fail(ErrorCode::empty_data, "no training data");
    if (inputs.size() != targets.size()) fail(ErrorCode::length_mismatch, "inputs and targets differ in length");
    for (const auto& x : inputs)
        if (x.size() != dim) fail(ErrorCode::dimension_mismatch, "input has wrong dimensionality");
}

Vector log_strengths(const TskModel& model, std::span<const double> scaled) {
    Vector out(model.rules.size());
    for (std::size_t k = 0; k < model.rules.size(); ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < scaled.size(); ++i) {
            const auto& mf = model.rules[k].premises[i];
            const double z = (scaled[i] - mf.center) / mf.sigma;
            s -= 0.5 * z * z;
        }
        out[k] = s;
    }
    return out;
}

// Normalized firing strengths; the underflow fallback puts all weight on the
// rule with the largest log-strength.
Vector normalized_strengths(const TskModel& model, std::span<const double> scaled, double* total = nullptr) {
    const Vector logw = log_strengths(model, scaled);
    Vector w(logw.size());
    double sum = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k) {
        w[k] = std::exp(logw[k]);
        sum += w[k];
    }
    if (total) *total = sum;
    if (sum > 0.0) {
        for (auto& v : w) v /= sum;
        return w;
    }
    std::fill(w.begin(), w.end(), 0.0);
    w[static_cast<std::size_t>(std::max_element(logw.begin(), logw.end()) - logw.begin())] = 1.0;
    return w;
}

double forward_scaled(const TskModel& model, std::span<const double> scaled) {
    const Vector w = normalized_strengths(model, scaled);
    double y = 0.0;
    for (std::size_t k = 0; k < w.size(); ++k)
        if (w[k] != 0.0) y += w[k] * model.rules[k].output(scaled);
    return y;
}

Vector gradient_scaled(const TskModel& model, std::span<const double> scaled, double target) {
    const std::size_t d = model.input_dim;
    Vector grad(model.rules.size() * d * 2, 0.0);
    double sum = 0.0;
    const Vector wn = normalized_strengths(model, scaled, &sum);
    if (!(sum > 0.0)) return grad;  // fallback region: output is locally constant in the premises

    Vector f(model.rules.size());
    double y = 0.0;
    for (std::size_t k = 0; k < f.size(); ++k) {
        f[k] = model.rules[k].output(scaled);
        y += wn[k] * f[k];
    }
    const double e2 = 2.0 * (y - target);
    for (std::size_t k = 0; k < model.rules.size(); ++k) {
        // d y / d w_k = (f_k - y) / S, and d w_k / d theta = w_k * (...), with w_k / S = wn_k.
        const double g = e2 * wn[k] * (f[k] - y);
        for (std::size_t i = 0; i < d; ++i) {
            const auto& mf = model.rules[k].premises[i];
            const double diff = scaled[i] - mf.center;
            const double s2 = mf.sigma * mf.sigma;
            grad[(k * d + i) * 2] = g * diff / s2;
            grad[(k * d + i) * 2 + 1] = g * diff * diff / (s2 * mf.sigma);
        }
    }
    return grad;
}

std::vector<Vector> scale_inputs(const TskModel& model, std::span<const Vector> inputs) {
    std::vector<Vector> out;
    out.reserve(inputs.size());
    for (const auto& x : inputs) out.push_back(model.normalization.apply(x));
    return out;
}

void solve_consequents(TskModel& model, const std::vector<Vector>& scaled, std::span<const double> targets) {
    const std::size_t d = model.input_dim;
    const std::size_t k_rules = model.rules.size();
    const auto p = static_cast<Eigen::Index>(k_rules * (d + 1));
    const auto n = static_cast<Eigen::Index>(scaled.size());

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + p, p);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(n + p);
    for (Eigen::Index r = 0; r < n; ++r) {
        const auto& s = scaled[static_cast<std::size_t>(r)];
        const Vector w = normalized_strengths(model, s);
        for (std::size_t k = 0; k < k_rules; ++k) {
            const auto base = static_cast<Eigen::Index>(k * (d + 1));
            for (std::size_t i = 0; i < d; ++i) a(r, base + static_cast<Eigen::Index>(i)) = w[k] * s[i];
            a(r, base + static_cast<Eigen::Index>(d)) = w[k];
        }
        b(r) = targets[static_cast<std::size_t>(r)];
    }
    const double ridge = std::sqrt(kRidge);
    for (Eigen::Index c = 0; c < p; ++c) a(n + c, c) = ridge;

    const Eigen::VectorXd theta = a.colPivHouseholderQr().solve(b);
    if (!theta.allFinite()) fail(ErrorCode::singular_system, "consequent least-squares system is degenerate");
    for (std::size_t k = 0; k < k_rules; ++k)
        for (std::size_t i = 0; i <= d; ++i)
            model.rules[k].consequent[i] = theta(static_cast<Eigen::Index>(k * (d + 1) + i));
}

double mse_scaled(const TskModel& model, const std::vector<Vector>& scaled, std::span<const double> targets) {
    double s = 0.0;
    for (std::size_t r = 0; r < scaled.size(); ++r) {
        const double e = forward_scaled(model, scaled[r]) - targets[r];
        s += e * e;
    }
    return s / static_cast<double>(scaled.size());
}

}  // namespace

TskModel init_from_clusters(const ClusterSet& clusters, std::span<const Vector> inputs,
                            std::span<const double> targets, std::optional<Normalization> normalization) {
    if (clusters.centers.empty()) fail(ErrorCode::empty_cluster_set, "cannot build rules from zero clusters");
    if (inputs.empty()) fail(ErrorCode::empty_data, "no training data");
    const std::size_t dim = clusters.centers.front().size();
    check_samples(inputs, targets, dim);

    TskModel model;
    model.input_dim = dim;
    model.normalization = normalization ? *normalization : Normalization::fit(inputs);
    if (model.normalization.size() != dim)
        fail(ErrorCode::dimension_mismatch, "normalization does not match cluster dimensionality");
    const double sigma = std::max(clusters.config.radius / std::sqrt(8.0), kSigmaMin);
    const double mean_y = std::accumulate(targets.begin(), targets.end(), 0.0) / static_cast<double>(targets.size());
    for (const auto& c : clusters.centers) {
        TskRule rule;
        for (double v : c) rule.premises.push_back({v, sigma});
        rule.consequent.assign(dim + 1, 0.0);
        rule.consequent.back() = mean_y;
        model.rules.push_back(std::move(rule));
    }
    return model;
}

Vector firing_strengths(const TskModel& model, std::span<const double> scaled) {
    if (scaled.size() != model.input_dim) fail(ErrorCode::dimension_mismatch, "input has wrong dimensionality");
    Vector w = log_strengths(model, scaled);
    for (auto& v : w) v = std::exp(v);
    return w;
}

double forward(const TskModel& model, std::span<const double> x) {
    if (x.size() != model.input_dim) fail(ErrorCode::dimension_mismatch, "input has wrong dimensionality");
    return forward_scaled(model, model.normalization.apply(x));
}

Vector premise_gradient(const TskModel& model, std::span<const double> x, double target) {
    if (x.size() != model.input_dim) fail(ErrorCode::dimension_mismatch, "input has wrong dimensionality");
    return gradient_scaled(model, model.normalization.apply(x), target);
}

Vector premise_parameters(const TskModel& model) {
    Vector out;
    out.reserve(model.rules.size() * model.input_dim * 2);
    for (const auto& r : model.rules)
        for (const auto& mf : r.premises) {
            out.push_back(mf.center);
            out.push_back(mf.sigma);
        }
    return out;
}

void set_premise_parameters(TskModel& model, std::span<const double> parameters) {
    if (parameters.size() != model.rules.size() * model.input_dim * 2)
        fail(ErrorCode::dimension_mismatch, "premise parameter vector has the wrong length");
    std::size_t p = 0;
    for (auto& r : model.rules)
        for (auto& mf : r.premises) {
            mf.center = parameters[p++];
            mf.sigma = parameters[p++];
        }
}

TskModel fit_consequents(const TskModel& model, std::span<const Vector> inputs, std::span<const double> targets) {
    model.validate();
    check_samples(inputs, targets, model.input_dim);
    TskModel out = model;
    solve_consequents(out, scale_inputs(model, inputs), targets);
    return out;
}

TrainResult hybrid_train(const TskModel& model, std::span<const Vector> inputs, std::span<const double> targets,
                         std::size_t epochs, double learning_rate) {
    model.validate();
    check_samples(inputs, targets, model.input_dim);
    if (epochs < 1) fail(ErrorCode::invalid_argument, "need at least one epoch");
    if (!(learning_rate >= 0.0)) fail(ErrorCode::invalid_argument, "learning rate must be >= 0");

    const auto scaled = scale_inputs(model, inputs);
    TrainResult result{model, {}};
    TskModel& m = result.model;
    const std::size_t n_params = m.rules.size() * m.input_dim * 2;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        solve_consequents(m, scaled, targets);
        if (learning_rate > 0.0) {
            Vector grad(n_params, 0.0);
            for (std::size_t r = 0; r < scaled.size(); ++r) {
                const Vector g = gradient_scaled(m, scaled[r], targets[r]);
                for (std::size_t p = 0; p < n_params; ++p) grad[p] += g[p];
            }
            Vector theta = premise_parameters(m);
            const double scale = learning_rate / static_cast<double>(scaled.size());
            for (std::size_t p = 0; p < n_params; ++p) {
                theta[p] -= scale * grad[p];
                if (p % 2 == 1) theta[p] = std::max(theta[p], kSigmaMin);
            }
            set_premise_parameters(m, theta);
        }
        result.mse_trace.push_back(mse_scaled(m, scaled, targets));
    }
    return result;
}

double training_mse(const TskModel& model, std::span<const Vector> inputs, std::span<const double> targets) {
    check_samples(inputs, targets, model.input_dim);
    return mse_scaled(model, scale_inputs(model, inputs), targets);
}

std::string format_tsk_rules(const TskModel& model) {
    std::string out;
    for (std::size_t k = 0; k < model.rules.size(); ++k) {
        out += "If ";
        for (std::size_t i = 0; i < model.input_dim; ++i) {
            if (i) out += " and ";
            const auto in = "in" + std::to_string(i + 1);
            out += "(" + in + " is " + in + "mf" + std::to_string(k + 1) + ")";
        }
        out += " then (f" + std::to_string(k + 1) + ")\n";
    }
    return out;
}

}  // namespace granular
