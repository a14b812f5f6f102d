#include "grnf/features.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "grnf/errors.hpp"
#include "grnf/kernels.hpp"
#include "invariant_detail.hpp"

namespace grnf {

namespace {

constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // log(sqrt(2*pi))

// Gaussian std used for the equivariant linear coefficients: with raw-sum
// normalization the bell(k+2) un-normalized basis sums are each O(n^2), so
// the draw scale shrinks to keep pre-activations O(1).
double effective_lin_sigma(const DistributionConfig& config, int k) {
    if (config.normalization == Normalization::sum) {
        return config.sigma / std::sqrt(static_cast<double>(bell(k + 2)));
    }
    return config.sigma;
}

double log_normal_pdf(double v, double sigma) {
    const double t = v / sigma;
    return -0.5 * t * t - std::log(sigma) - kLogSqrt2Pi;
}

bool squashing_activation(const std::string& name) {
    return name == "sigmoid" || name == "tanh";
}

double scalar_activation(const std::string& name, double x) {
    if (name == "sigmoid") return kern::sigmoid_scalar(x);
    if (name == "tanh") return std::fma(2.0, kern::sigmoid_scalar(2.0 * x), -1.0);
    return x > 0.0 ? x : 0.0;  // relu
}

void check_feature_shape(const FeatureParams& w, int channels) {
    if (w.k < 1 || w.k > kMaxFeatureOrder) {
        throw ValidationError("feature: order k must lie in 1..3");
    }
    const std::size_t d = static_cast<std::size_t>(channels);
    if (w.theta_F.k != w.k || w.theta_H.k != w.k ||
        w.theta_F.theta_lin.size() != bell(w.k + 2) * d ||
        w.theta_F.theta_bias.size() != bell(w.k) ||
        w.theta_H.theta.size() != bell(w.k)) {
        throw ValidationError("feature: parameter sizes do not match the order/channel layout");
    }
}

// Graph tensor zero-padded to the channel count the map was sampled for.
DenseTensor padded_graph_tensor(const Graph& g, int channels) {
    DenseTensor t = graph_to_tensor(g);
    if (t.channels() == channels) return t;
    if (t.channels() > channels) {
        throw ValidationError("embed: graph carries more attribute channels than the map accepts");
    }
    DenseTensor out(2, t.n(), channels);
    for (std::size_t tup = 0; tup < t.tuple_count(); ++tup) {
        for (int c = 0; c < t.channels(); ++c) {
            out.data()[tup * static_cast<std::size_t>(channels) + static_cast<std::size_t>(c)] =
                t.data()[tup * static_cast<std::size_t>(t.channels()) + static_cast<std::size_t>(c)];
        }
    }
    return out;
}

}  // namespace

void validate_config(const DistributionConfig& config) {
    if (!(config.lambda > 0.0) || !std::isfinite(config.lambda)) {
        throw ValidationError("config: lambda must be positive and finite");
    }
    if (!(config.sigma > 0.0) || !std::isfinite(config.sigma)) {
        throw ValidationError("config: sigma must be positive and finite");
    }
    if (config.k_max < 1 || config.k_max > kMaxFeatureOrder) {
        throw ValidationError("config: k_max must lie in 1..3");
    }
    if (config.channels < 1) {
        throw ValidationError("config: channels must be at least 1");
    }
    if (!squashing_activation(config.activation_e)) {
        throw ValidationError("config: activation_e must be squashing (sigmoid or tanh)");
    }
    if (config.activation_i != "sigmoid" && config.activation_i != "tanh" &&
        config.activation_i != "relu") {
        throw ValidationError("config: activation_i must be sigmoid, tanh or relu");
    }
}

double order_mass(const DistributionConfig& config, int k) {
    if (k < 1 || k > config.k_max) return 0.0;
    double term = 1.0;  // lambda^j / j!
    double z = 1.0;
    for (int j = 1; j < config.k_max; ++j) {
        term *= config.lambda / static_cast<double>(j);
        z += term;
    }
    term = 1.0;
    for (int j = 1; j < k; ++j) term *= config.lambda / static_cast<double>(j);
    return term / z;
}

double log_density(const DistributionConfig& config, const FeatureParams& w) {
    check_feature_shape(w, config.channels);
    const double mass = order_mass(config, w.k);
    if (mass == 0.0) return -std::numeric_limits<double>::infinity();
    double ld = std::log(mass);
    const double sigma_lin = effective_lin_sigma(config, w.k);
    for (double v : w.theta_F.theta_lin) ld += log_normal_pdf(v, sigma_lin);
    for (double v : w.theta_F.theta_bias) ld += log_normal_pdf(v, config.sigma);
    for (double v : w.theta_H.theta) ld += log_normal_pdf(v, config.sigma);
    ld += log_normal_pdf(w.theta_H.bias, config.sigma);
    return ld;
}

FeatureParams sample_parameter(const DistributionConfig& config, RandomStream& rng) {
    FeatureParams w;
    w.k = rng.shifted_truncated_poisson(config.lambda, config.k_max);
    const std::size_t d = static_cast<std::size_t>(config.channels);
    const double sigma_lin = effective_lin_sigma(config, w.k);

    w.theta_F.k = w.k;
    w.theta_F.theta_lin.resize(bell(w.k + 2) * d);
    for (double& v : w.theta_F.theta_lin) v = rng.normal(0.0, sigma_lin);
    w.theta_F.theta_bias.resize(bell(w.k));
    for (double& v : w.theta_F.theta_bias) v = rng.normal(0.0, config.sigma);

    w.theta_H.k = w.k;
    w.theta_H.theta.resize(bell(w.k));
    for (double& v : w.theta_H.theta) v = rng.normal(0.0, config.sigma);
    w.theta_H.bias = rng.normal(0.0, config.sigma);
    return w;
}

GrnfMap build_grnf(int M, const DistributionConfig& config, std::uint64_t seed) {
    if (M < 1) throw ValidationError("build_grnf: M must be at least 1");
    validate_config(config);
    GrnfMap map;
    map.M = M;
    map.seed = seed;
    map.config = config;
    map.params.reserve(static_cast<std::size_t>(M));
    RandomStream rng(seed);
    for (int m = 0; m < M; ++m) map.params.push_back(sample_parameter(config, rng));
    map.weights.assign(static_cast<std::size_t>(M), 1.0 / std::sqrt(static_cast<double>(M)));
    return map;
}

GrnfMap build_grnf_weighted(int M, const DistributionConfig& target,
                            const DistributionConfig& proposal, std::uint64_t seed) {
    if (M < 1) throw ValidationError("build_grnf_weighted: M must be at least 1");
    validate_config(target);
    validate_config(proposal);
    if (target.activation_e != proposal.activation_e ||
        target.activation_i != proposal.activation_i ||
        target.normalization != proposal.normalization || target.channels != proposal.channels) {
        throw ValidationError(
            "build_grnf_weighted: target and proposal must describe one architecture "
            "(same activations, normalization and channels)");
    }
    if (target.k_max > proposal.k_max) {
        throw CoverageError(
            "build_grnf_weighted: proposal assigns zero mass to orders the target supports");
    }
    GrnfMap map;
    map.M = M;
    map.seed = seed;
    map.config = target;
    map.proposal = proposal;
    map.params.reserve(static_cast<std::size_t>(M));
    map.weights.reserve(static_cast<std::size_t>(M));
    const double inv_sqrt_m = 1.0 / std::sqrt(static_cast<double>(M));
    RandomStream rng(seed);
    for (int m = 0; m < M; ++m) {
        FeatureParams w = sample_parameter(proposal, rng);
        const double lq = log_density(proposal, w);
        if (!std::isfinite(lq)) {
            throw CoverageError("build_grnf_weighted: zero proposal density at a sampled point");
        }
        const double lp = log_density(target, w);
        // exp(-inf) = 0: orders outside the target's support contribute nothing.
        map.weights.push_back(std::exp(0.5 * (lp - lq)) * inv_sqrt_m);
        map.params.push_back(std::move(w));
    }
    return map;
}

// ===== Evaluation =====

struct GraphEvaluator::Impl {
    // Per-order precomputed state: the normalized strict expansion of the
    // graph tensor for every (partition of {1..k+2}, channel), partition-major
    // to match the theta_lin layout, plus the pattern table driving bias
    // lookups and invariant bucket sums.
    struct KBasis {
        bool built = false;
        std::shared_ptr<const detail::PatternTable> table;
        std::size_t len = 0;  // n^k output entries
        std::vector<std::vector<double>> columns;
        std::vector<double> buf;
        std::vector<double> sums;
    };

    DistributionConfig config;
    DenseTensor tensor;
    std::array<KBasis, kMaxFeatureOrder> bases;

    Impl(const Graph& g, const DistributionConfig& cfg)
        : config(cfg), tensor(padded_graph_tensor(g, cfg.channels)) {
        validate_config(cfg);
    }

    void build(KBasis& b, int k) {
        const int n = tensor.n();
        b.table = detail::PatternTable::get(n, k);
        b.len = 1;
        for (int i = 0; i < k; ++i) b.len *= static_cast<std::size_t>(n);
        const auto partitions = enumerate_partitions(k + 2);
        const int d = config.channels;
        std::vector<detail::QuantizedMatrix> qms;
        qms.reserve(static_cast<std::size_t>(d));
        for (int c = 0; c < d; ++c) qms.push_back(detail::quantize_matrix(tensor, c));
        b.columns.assign(partitions.size() * static_cast<std::size_t>(d), {});
        for (std::size_t g = 0; g < partitions.size(); ++g) {
            for (int c = 0; c < d; ++c) {
                auto& column = b.columns[g * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)];
                column.assign(b.len, 0.0);
                detail::equivariant_strict_fill(partitions[g], qms[static_cast<std::size_t>(c)], k,
                                                config.normalization, column.data());
            }
        }
        b.buf.resize(b.len);
        b.sums.resize(bell(k));
        b.built = true;
    }

    double psi(const FeatureParams& w) {
        check_feature_shape(w, config.channels);
        KBasis& b = bases[static_cast<std::size_t>(w.k - 1)];
        if (!b.built) build(b, w.k);

        // Bias part first: strict patterns tile the index space, so each
        // output entry reads exactly one bias coefficient.
        const std::int32_t* pid = b.table->pid.data();
        double* buf = b.buf.data();
        for (std::size_t t = 0; t < b.len; ++t) {
            buf[t] = w.theta_F.theta_bias[static_cast<std::size_t>(pid[t])];
        }
        const auto& ops = kern::active_ops();
        for (std::size_t i = 0; i < b.columns.size(); ++i) {
            ops.axpy(buf, b.columns[i].data(), w.theta_F.theta_lin[i], b.len);
        }
        if (config.activation_e == "sigmoid") {
            ops.sigmoid(buf, b.len);
        } else {
            ops.tanh_act(buf, b.len);
        }

        // Invariant readout over strict-pattern buckets.
        const int nbuckets = b.table->pattern_count;
        detail::strict_bucket_sums(buf, b.len, 1, pid, nbuckets, b.sums.data());
        double h = w.theta_H.bias;
        for (int p = 0; p < nbuckets; ++p) {
            double v = b.sums[static_cast<std::size_t>(p)];
            if (config.normalization == Normalization::mean) {
                const std::int64_t count = b.table->count[static_cast<std::size_t>(p)];
                v = (count > 0) ? v / static_cast<double>(count) : 0.0;
            }
            h += w.theta_H.theta[static_cast<std::size_t>(p)] * v;
        }
        return scalar_activation(config.activation_i, h);
    }
};

GraphEvaluator::GraphEvaluator(const Graph& g, const DistributionConfig& config)
    : impl_(std::make_unique<Impl>(g, config)) {}
GraphEvaluator::~GraphEvaluator() = default;
GraphEvaluator::GraphEvaluator(GraphEvaluator&&) noexcept = default;
GraphEvaluator& GraphEvaluator::operator=(GraphEvaluator&&) noexcept = default;

double GraphEvaluator::psi(const FeatureParams& w) { return impl_->psi(w); }

double psi(const Graph& g, const FeatureParams& w, const DistributionConfig& config) {
    GraphEvaluator ev(g, config);
    return ev.psi(w);
}

std::vector<double> embed(const GrnfMap& map, const Graph& g) {
    if (map.params.size() != static_cast<std::size_t>(map.M) ||
        map.weights.size() != static_cast<std::size_t>(map.M)) {
        throw ValidationError("embed: map params/weights do not match M");
    }
    GraphEvaluator ev(g, map.config);
    std::vector<double> out(static_cast<std::size_t>(map.M));
    for (std::size_t m = 0; m < out.size(); ++m) {
        const double weight = map.weights[m];
        out[m] = (weight == 0.0) ? 0.0 : weight * ev.psi(map.params[m]);
    }
    return out;
}

std::vector<double> embed_centered(const GrnfMap& map, const Graph& g) {
    std::vector<double> z = embed(map, g);
    const std::vector<double> z0 = embed(map, Graph::null());
    for (std::size_t m = 0; m < z.size(); ++m) z[m] -= z0[m];
    return z;
}

std::vector<double> feature_values(const GrnfMap& map, const Graph& g) {
    if (map.params.size() != static_cast<std::size_t>(map.M)) {
        throw ValidationError("feature_values: map params do not match M");
    }
    GraphEvaluator ev(g, map.config);
    std::vector<double> out(static_cast<std::size_t>(map.M));
    for (std::size_t m = 0; m < out.size(); ++m) out[m] = ev.psi(map.params[m]);
    return out;
}

}  // namespace grnf
