#include "grnf/metrics.hpp"

#include <algorithm>
#include <cmath>

#include "csv_detail.hpp"
#include "grnf/errors.hpp"
#include "grnf/kernels.hpp"
#include "grnf/rng.hpp"
#include "parallel_detail.hpp"

namespace grnf {

DistanceEstimate distance_estimate(const std::vector<double>& z1, const std::vector<double>& z2) {
    if (z1.size() != z2.size()) {
        throw ValidationError("distance_estimate: embedding lengths differ");
    }
    DistanceEstimate est;
    est.M = static_cast<int>(z1.size());
    est.squared = kern::active_ops().sumsq_diff(z1.data(), z2.data(), z1.size());
    est.value = std::sqrt(est.squared);
    return est;
}

double kernel_estimate(const std::vector<double>& zc1, const std::vector<double>& zc2) {
    if (zc1.size() != zc2.size()) {
        throw ValidationError("kernel_estimate: embedding lengths differ");
    }
    return kern::active_ops().dot(zc1.data(), zc2.data(), zc1.size());
}

GramMatrix gram_matrix(const GrnfMap& map, const std::vector<Graph>& graphs) {
    if (graphs.empty()) throw ValidationError("gram_matrix: graph list is empty");
    const int s = static_cast<int>(graphs.size());
    std::vector<std::vector<double>> centered;
    centered.reserve(graphs.size());
    for (const auto& g : graphs) centered.push_back(embed_centered(map, g));

    GramMatrix gram;
    gram.size = s;
    gram.values.assign(static_cast<std::size_t>(s) * static_cast<std::size_t>(s), 0.0);
    for (int i = 0; i < s; ++i) {
        for (int j = i; j < s; ++j) {
            const double v = kernel_estimate(centered[static_cast<std::size_t>(i)],
                                             centered[static_cast<std::size_t>(j)]);
            gram.values[static_cast<std::size_t>(i) * static_cast<std::size_t>(s) +
                        static_cast<std::size_t>(j)] = v;
            gram.values[static_cast<std::size_t>(j) * static_cast<std::size_t>(s) +
                        static_cast<std::size_t>(i)] = v;
        }
    }
    return gram;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double min_eigenvalue(const std::vector<double>& symmetric, int n) {
    if (n < 1 || symmetric.size() != static_cast<std::size_t>(n) * static_cast<std::size_t>(n)) {
        throw ValidationError("min_eigenvalue: matrix shape mismatch");
    }
    std::vector<double> a = symmetric;
    const std::size_t un = static_cast<std::size_t>(n);
    auto at = [&](int i, int j) -> double& {
        return a[static_cast<std::size_t>(i) * un + static_cast<std::size_t>(j)];
    };
    double scale = 0.0;
    for (double v : a) scale = std::max(scale, std::fabs(v));
    if (scale == 0.0) return 0.0;

    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) off += std::fabs(at(i, j));
        }
        if (off <= 1e-15 * scale * n) break;
        for (int p = 0; p < n; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = at(p, q);
                if (std::fabs(apq) <= 1e-18 * scale) continue;
                // Classic Jacobi rotation annihilating a[p][q].
                const double theta = (at(q, q) - at(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < n; ++i) {
                    const double aip = at(i, p);
                    const double aiq = at(i, q);
                    at(i, p) = c * aip - s * aiq;
                    at(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < n; ++i) {
                    const double api = at(p, i);
                    const double aqi = at(q, i);
                    at(p, i) = c * api - s * aqi;
                    at(q, i) = s * api + c * aqi;
                }
            }
        }
    }
    double mn = at(0, 0);
    for (int i = 1; i < n; ++i) mn = std::min(mn, at(i, i));
    return mn;
}

std::int64_t embedding_dim_for(double epsilon, double delta, DimKind kind) {
    if (!(epsilon > 0.0) || !std::isfinite(epsilon)) {
        throw ValidationError("embedding_dim_for: epsilon must be positive and finite");
    }
    if (!(delta > 0.0) || !(delta < 1.0)) {
        throw ValidationError("embedding_dim_for: delta must lie in (0,1)");
    }
    const double numerator = (kind == DimKind::distance) ? 16.0 : 1.0;
    const double r = numerator / (delta * epsilon * epsilon);
    // Bounds like 16/(0.1 * 0.1^2) are integers in exact arithmetic but land a
    // few ulp off in doubles; snap near-integers instead of ceiling past them.
    const double snapped = std::nearbyint(r);
    if (std::fabs(r - snapped) <= 1e-6 * std::max(1.0, std::fabs(r))) {
        return static_cast<std::int64_t>(snapped);
    }
    return static_cast<std::int64_t>(std::ceil(r));
}

DeltaBounds delta_bounds(int M, double epsilon, std::optional<double> sigma_hat) {
    if (M < 1) throw ValidationError("delta_bounds: M must be at least 1");
    if (!(epsilon > 0.0)) throw ValidationError("delta_bounds: epsilon must be positive");
    const double me2 = static_cast<double>(M) * epsilon * epsilon;
    DeltaBounds b;
    b.delta_M = std::clamp(128.0 / me2, 0.0, 1.0);
    b.delta_star = std::clamp(16.0 / me2, 0.0, 1.0);
    if (sigma_hat) {
        if (!(*sigma_hat > 0.0)) {
            throw ValidationError("delta_bounds: sigma_hat must be positive");
        }
        const double z = std::sqrt(static_cast<double>(M)) * epsilon / *sigma_hat;
        b.delta_clt = std::clamp(2.0 * normal_cdf(-z), 0.0, 1.0);
    }
    return b;
}

std::vector<ConvergenceRow> convergence_diagnostics(const Graph& g1, const Graph& g2,
                                                    const std::vector<int>& M_grid,
                                                    int reference_M, int trials,
                                                    std::uint64_t seed,
                                                    const DistributionConfig& config,
                                                    int threads) {
    if (trials < 0) throw ValidationError("convergence_diagnostics: trials must be >= 0");
    if (trials == 0 || M_grid.empty()) return {};
    if (reference_M < 2) {
        throw ValidationError("convergence_diagnostics: reference_M must be at least 2");
    }
    for (int m : M_grid) {
        if (m < 2) throw ValidationError("convergence_diagnostics: grid dimensions must be >= 2");
    }

    // Reference map: Delta_star stands in for the exact squared distance, and
    // its per-feature discrepancies give the CLT sigma_hat.
    const GrnfMap ref = build_grnf(reference_M, config, derive_seed(seed, 0));
    const std::vector<double> psi1 = feature_values(ref, g1);
    const std::vector<double> psi2 = feature_values(ref, g2);
    double delta_star_ref = 0.0;
    for (std::size_t m = 0; m < psi1.size(); ++m) {
        const double d = psi1[m] - psi2[m];
        delta_star_ref += d * d;
    }
    delta_star_ref /= static_cast<double>(reference_M);
    double mean_y = delta_star_ref;  // mean of Y_m = (psi1_m - psi2_m)^2
    double var_y = 0.0;
    for (std::size_t m = 0; m < psi1.size(); ++m) {
        const double d = psi1[m] - psi2[m];
        const double y = d * d - mean_y;
        var_y += y * y;
    }
    var_y /= static_cast<double>(reference_M - 1);
    const double sigma_hat = std::sqrt(var_y);
    const double epsilon = 0.25 * delta_star_ref;

    // One cell per (M, trial); each builds two independent maps from seeds
    // derived only from (seed, M, trial), so scheduling cannot leak in.
    const std::size_t grid = M_grid.size();
    std::vector<char> exceed_m(grid * static_cast<std::size_t>(trials), 0);
    std::vector<char> exceed_star(grid * static_cast<std::size_t>(trials), 0);
    detail::parallel_for(grid * static_cast<std::size_t>(trials), threads, [&](std::size_t cell) {
        const std::size_t gi = cell / static_cast<std::size_t>(trials);
        const int trial = static_cast<int>(cell % static_cast<std::size_t>(trials));
        const int M = M_grid[gi];
        const auto sq = [&](std::uint64_t which) {
            const GrnfMap map = build_grnf(
                M, config,
                derive_seed(seed, static_cast<std::uint64_t>(M), static_cast<std::uint64_t>(trial),
                            which));
            return distance_estimate(embed(map, g1), embed(map, g2)).squared;
        };
        const double d1 = sq(1);
        const double d2 = sq(2);
        exceed_m[cell] = std::fabs(d1 - d2) >= epsilon ? 1 : 0;
        exceed_star[cell] = std::fabs(d1 - delta_star_ref) >= epsilon ? 1 : 0;
    });

    std::vector<ConvergenceRow> rows;
    rows.reserve(grid);
    for (std::size_t gi = 0; gi < grid; ++gi) {
        ConvergenceRow row;
        row.M = M_grid[gi];
        row.epsilon = epsilon;
        int count_m = 0, count_star = 0;
        for (int t = 0; t < trials; ++t) {
            count_m += exceed_m[gi * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)];
            count_star +=
                exceed_star[gi * static_cast<std::size_t>(trials) + static_cast<std::size_t>(t)];
        }
        row.delta_hat_M = static_cast<double>(count_m) / static_cast<double>(trials);
        row.delta_hat_star = static_cast<double>(count_star) / static_cast<double>(trials);
        const DeltaBounds bounds = delta_bounds(row.M, epsilon, sigma_hat);
        row.delta_M = bounds.delta_M;
        row.delta_star = bounds.delta_star;
        row.delta_clt = *bounds.delta_clt;
        rows.push_back(row);
    }
    return rows;
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows) {
    std::string out = "M,delta_hat_M,delta_M,delta_hat_star,delta_star,delta_clt,epsilon\n";
    for (const auto& r : rows) {
        out += std::to_string(r.M);
        out += ',';
        out += detail::format_double(r.delta_hat_M);
        out += ',';
        out += detail::format_double(r.delta_M);
        out += ',';
        out += detail::format_double(r.delta_hat_star);
        out += ',';
        out += detail::format_double(r.delta_star);
        out += ',';
        out += detail::format_double(r.delta_clt);
        out += ',';
        out += detail::format_double(r.epsilon);
        out += '\n';
    }
    return out;
}

}  // namespace grnf
