#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "grnf/graph.hpp"
#include "grnf/invariant_maps.hpp"
#include "grnf/rng.hpp"

namespace grnf {

// Largest tensor order the feature sampler will draw.
inline constexpr int kMaxFeatureOrder = 3;

// Distribution over feature parameters w = (k, theta) together with the fixed
// architectural choices the features evaluate under. k is drawn as
// 1 + Poisson(lambda) truncated and renormalized to {1..k_max}; every theta
// entry is i.i.d. Normal(0, sigma_eff^2). With mean normalization sigma_eff is
// sigma itself; with raw-sum normalization the equivariant linear coefficients
// use sigma / sqrt(bell(k+2)) so pre-activations stay O(1).
struct DistributionConfig {
    double lambda = 1.0;
    int k_max = kMaxFeatureOrder;
    double sigma = 1.0;
    std::string activation_e = "sigmoid";  // squashing: sigmoid | tanh
    std::string activation_i = "sigmoid";  // sigmoid | tanh | relu
    Normalization normalization = Normalization::mean;
    int channels = 1;  // attribute channels the features accept
};

// Throws ValidationError unless lambda > 0, sigma > 0, 1 <= k_max <= 3,
// channels >= 1, activation_e is squashing and activation_i is known.
void validate_config(const DistributionConfig& config);

// One sampled feature: psi(g; w) = act_i(H_k(act_e(F_{2,k}(A_g; theta_F)); theta_H)).
struct FeatureParams {
    int k = 1;
    EquivariantLayerParams theta_F;
    InvariantLayerParams theta_H;
};

// Mass of k under the shifted truncated Poisson and the log joint density
// log p(k) + sum log N(theta_i; 0, sigma_eff^2) of a sampled feature. The
// density uses exactly the sigma_eff rule of the sampler; k outside
// {1..k_max} has mass 0 (log density -inf).
double order_mass(const DistributionConfig& config, int k);
double log_density(const DistributionConfig& config, const FeatureParams& w);

// Draws one feature. Draw order is fixed: k (one uniform), then the Gaussian
// entries of theta_F linear, theta_F bias, theta_H linear, theta_H bias, in
// their flat storage orders. Nothing else may consume the stream in between,
// so (seed, config) pins every sampled map bit for bit.
FeatureParams sample_parameter(const DistributionConfig& config, RandomStream& rng);

// A sampled embedding map z(g) = (weights[m] * psi(g; params[m]))_m. Plain
// maps weight every feature 1/sqrt(M); importance-sampled maps draw params
// from `proposal` and weight feature m by sqrt(p(w_m) / (M * p_bar(w_m))).
struct GrnfMap {
    int version = 1;
    int M = 0;
    std::uint64_t seed = 0;
    DistributionConfig config;                   // target distribution P
    std::optional<DistributionConfig> proposal;  // P_bar, set on weighted maps
    std::vector<FeatureParams> params;
    std::vector<double> weights;
};

// Samples M features sequentially from one stream seeded with `seed`.
GrnfMap build_grnf(int M, const DistributionConfig& config, std::uint64_t seed);

// Importance-sampled variant: features drawn from `proposal`, weighted toward
// `target`. The two configs must agree on activations, normalization and
// channels (they describe one architecture), and the proposal must cover the
// target's orders (proposal.k_max >= target.k_max), else CoverageError.
// With proposal == target this reproduces build_grnf(M, target, seed) exactly.
GrnfMap build_grnf_weighted(int M, const DistributionConfig& target,
                            const DistributionConfig& proposal, std::uint64_t seed);

// Single-feature evaluation. Exactly invariant under node relabeling: every
// order-sensitive reduction inside is a fixed-point integer sum.
double psi(const Graph& g, const FeatureParams& w, const DistributionConfig& config);

// Precomputed per-graph evaluation state (the strict-pattern expansion of the
// graph tensor for each order k): build once per graph, then evaluate many
// features cheaply. Not safe for concurrent use; embed() creates its own.
class GraphEvaluator {
public:
    GraphEvaluator(const Graph& g, const DistributionConfig& config);
    ~GraphEvaluator();
    GraphEvaluator(GraphEvaluator&&) noexcept;
    GraphEvaluator& operator=(GraphEvaluator&&) noexcept;

    double psi(const FeatureParams& w);

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// z(g): component m = weights[m] * psi(g; params[m]).
std::vector<double> embed(const GrnfMap& map, const Graph& g);

// z(g) - z(null graph): the centered embedding whose inner products estimate
// the positive-definite kernel. Centering the null graph itself gives 0.
std::vector<double> embed_centered(const GrnfMap& map, const Graph& g);

// Raw per-feature values psi(g; params[m]) without weights, for variance
// diagnostics.
std::vector<double> feature_values(const GrnfMap& map, const Graph& g);

}  // namespace grnf
