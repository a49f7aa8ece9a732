#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "granular/clustering.hpp"
#include "granular/normalization.hpp"

namespace granular {

inline constexpr double kSigmaMin = 1e-4;
inline constexpr double kRidge = 1e-8;

struct GaussianMf {
    double center = 0.0;
    double sigma = 1.0;

    double operator()(double x) const noexcept;

    bool operator==(const GaussianMf&) const = default;
};

/// First-order rule: premises per input, consequent p_1..p_d followed by the
/// bias. Both act on normalized inputs.
struct TskRule {
    std::vector<GaussianMf> premises;
    Vector consequent;

    double output(std::span<const double> scaled) const noexcept;

    bool operator==(const TskRule&) const = default;
};

struct TskModel {
    std::vector<TskRule> rules;
    std::size_t input_dim = 0;
    Normalization normalization;

    std::size_t n_rules() const noexcept { return rules.size(); }
    void validate() const;

    bool operator==(const TskModel&) const = default;
};

/// One rule per center, sigma = r_a / sqrt(8), zero slopes and bias = mean(y).
/// Cluster centers must be expressed in `normalization`; when omitted it is
/// fitted on `inputs`.
TskModel init_from_clusters(const ClusterSet& clusters, std::span<const Vector> inputs,
                            std::span<const double> targets,
                            std::optional<Normalization> normalization = std::nullopt);

/// Raw (unnormalized) firing strengths for a normalized input.
Vector firing_strengths(const TskModel& model, std::span<const double> scaled);

/// Weighted average of rule outputs. When every strength underflows the rule
/// with the largest log-strength answers alone.
double forward(const TskModel& model, std::span<const double> x);

/// d(forward(x) - y)^2 / d theta for every premise parameter, laid out rule by
/// rule as [c_1, sigma_1, c_2, sigma_2, ...].
Vector premise_gradient(const TskModel& model, std::span<const double> x, double target);

Vector premise_parameters(const TskModel& model);
void set_premise_parameters(TskModel& model, std::span<const double> parameters);

struct TrainResult {
    TskModel model;
    std::vector<double> mse_trace;  // training MSE at the end of each epoch
};

/// Hybrid learning: per epoch a ridge least-squares solve of the consequents
/// with premises frozen, then one batch gradient step on the premises.
TrainResult hybrid_train(const TskModel& model, std::span<const Vector> inputs,
                         std::span<const double> targets, std::size_t epochs,
                         double learning_rate);

/// Least-squares consequent pass alone (pass 1 of hybrid_train).
TskModel fit_consequents(const TskModel& model, std::span<const Vector> inputs,
                         std::span<const double> targets);

double training_mse(const TskModel& model, std::span<const Vector> inputs,
                    std::span<const double> targets);

/// "If (in1 is in1mf1) and ... then (f1)" listing.
std::string format_tsk_rules(const TskModel& model);

}  // namespace granular
