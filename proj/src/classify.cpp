#include "grnf/classify.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "grnf/errors.hpp"
#include "grnf/kernels.hpp"

namespace grnf {

namespace {

void check_matrix(const std::vector<std::vector<double>>& rows, std::size_t dim,
                  const char* what) {
    for (const auto& row : rows) {
        if (row.size() != dim) {
            throw ValidationError(std::string(what) + ": rows have inconsistent dimensions");
        }
    }
}

// Solves A X = B for symmetric positive-definite A (n x n, row-major) by
// in-place Cholesky factorization; B holds ncols right-hand sides and is
// overwritten with the solution.
void spd_solve(std::vector<double>& A, int n, std::vector<double>& B, int ncols) {
    for (int j = 0; j < n; ++j) {
        double diag = A[static_cast<std::size_t>(j) * n + j];
        for (int k = 0; k < j; ++k) {
            const double v = A[static_cast<std::size_t>(j) * n + k];
            diag -= v * v;
        }
        if (!(diag > 0.0)) throw ValidationError("ridge: normal matrix is not positive definite");
        const double root = std::sqrt(diag);
        A[static_cast<std::size_t>(j) * n + j] = root;
        for (int i = j + 1; i < n; ++i) {
            double v = A[static_cast<std::size_t>(i) * n + j];
            for (int k = 0; k < j; ++k) {
                v -= A[static_cast<std::size_t>(i) * n + k] * A[static_cast<std::size_t>(j) * n + k];
            }
            A[static_cast<std::size_t>(i) * n + j] = v / root;
        }
    }
    for (int c = 0; c < ncols; ++c) {
        // Forward substitution L y = b, then back substitution L' x = y.
        for (int i = 0; i < n; ++i) {
            double v = B[static_cast<std::size_t>(i) * ncols + c];
            for (int k = 0; k < i; ++k) {
                v -= A[static_cast<std::size_t>(i) * n + k] * B[static_cast<std::size_t>(k) * ncols + c];
            }
            B[static_cast<std::size_t>(i) * ncols + c] = v / A[static_cast<std::size_t>(i) * n + i];
        }
        for (int i = n - 1; i >= 0; --i) {
            double v = B[static_cast<std::size_t>(i) * ncols + c];
            for (int k = i + 1; k < n; ++k) {
                v -= A[static_cast<std::size_t>(k) * n + i] * B[static_cast<std::size_t>(k) * ncols + c];
            }
            B[static_cast<std::size_t>(i) * ncols + c] = v / A[static_cast<std::size_t>(i) * n + i];
        }
    }
}

}  // namespace

std::vector<int> knn_classify(const std::vector<std::vector<double>>& train,
                              const std::vector<int>& train_labels,
                              const std::vector<std::vector<double>>& test, int k) {
    if (train.empty()) throw ValidationError("knn: training set is empty");
    if (train.size() != train_labels.size()) {
        throw ValidationError("knn: training labels do not match the training set");
    }
    if (k < 1) throw ValidationError("knn: k must be at least 1");
    const std::size_t dim = train[0].size();
    check_matrix(train, dim, "knn");
    check_matrix(test, dim, "knn");
    const int kk = std::min<int>(k, static_cast<int>(train.size()));
    const kern::Ops& ops = kern::active_ops();

    std::vector<int> out;
    out.reserve(test.size());
    std::vector<std::pair<double, int>> dist(train.size());
    for (const auto& query : test) {
        for (std::size_t i = 0; i < train.size(); ++i) {
            dist[i] = {ops.sumsq_diff(query.data(), train[i].data(), dim), static_cast<int>(i)};
        }
        // Neighbours ordered by (distance, training index) so equidistant
        // rows resolve the same way on every platform.
        std::partial_sort(dist.begin(), dist.begin() + kk, dist.end());
        std::map<int, std::pair<int, double>> votes;  // label -> (count, summed distance)
        for (int i = 0; i < kk; ++i) {
            auto& v = votes[train_labels[static_cast<std::size_t>(dist[i].second)]];
            v.first += 1;
            v.second += std::sqrt(dist[i].first);
        }
        int best_label = votes.begin()->first;
        std::pair<int, double> best = votes.begin()->second;
        for (const auto& [label, v] : votes) {
            if (v.first > best.first || (v.first == best.first && v.second < best.second)) {
                best_label = label;
                best = v;
            }
        }
        out.push_back(best_label);
    }
    return out;
}

double classification_accuracy(const std::vector<int>& predicted, const std::vector<int>& truth) {
    if (predicted.size() != truth.size()) {
        throw ValidationError("accuracy: label sequences differ in length");
    }
    if (predicted.empty()) throw ValidationError("accuracy: no labels");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predicted.size(); ++i) hits += predicted[i] == truth[i];
    return static_cast<double>(hits) / static_cast<double>(predicted.size());
}

RidgeModel ridge_readout(const std::vector<std::vector<double>>& train,
                         const std::vector<int>& train_labels, double lambda) {
    if (train.empty()) throw ValidationError("ridge: training set is empty");
    if (train.size() != train_labels.size()) {
        throw ValidationError("ridge: training labels do not match the training set");
    }
    if (!(lambda > 0.0)) throw ValidationError("ridge: lambda must be positive");
    const int n = static_cast<int>(train.size());
    const int raw_dim = static_cast<int>(train[0].size());
    check_matrix(train, static_cast<std::size_t>(raw_dim), "ridge");

    // Append the constant channel; everything below solves in d = raw_dim + 1.
    std::vector<std::vector<double>> aug;
    aug.reserve(train.size());
    for (const auto& row : train) {
        std::vector<double> r = row;
        r.push_back(1.0);
        aug.push_back(std::move(r));
    }
    const int d = raw_dim + 1;

    RidgeModel model;
    model.dim = raw_dim;
    const std::set<int> distinct(train_labels.begin(), train_labels.end());
    model.classes.assign(distinct.begin(), distinct.end());
    const int c = static_cast<int>(model.classes.size());
    std::vector<int> column_of(train_labels.size());
    for (std::size_t i = 0; i < train_labels.size(); ++i) {
        column_of[i] = static_cast<int>(
            std::lower_bound(model.classes.begin(), model.classes.end(), train_labels[i]) -
            model.classes.begin());
    }

    const kern::Ops& ops = kern::active_ops();
    model.weights.assign(static_cast<std::size_t>(d) * c, 0.0);
    if (d <= n) {
        // Primal normal equations: (X'X + lambda I) W = X'Y.
        std::vector<double> gram(static_cast<std::size_t>(d) * d, 0.0);
        for (int i = 0; i < n; ++i) {
            const double* row = aug[static_cast<std::size_t>(i)].data();
            for (int a = 0; a < d; ++a) {
                for (int b = a; b < d; ++b) gram[static_cast<std::size_t>(a) * d + b] += row[a] * row[b];
            }
        }
        for (int a = 0; a < d; ++a) {
            gram[static_cast<std::size_t>(a) * d + a] += lambda;
            for (int b = 0; b < a; ++b) {
                gram[static_cast<std::size_t>(a) * d + b] = gram[static_cast<std::size_t>(b) * d + a];
            }
        }
        std::vector<double> rhs(static_cast<std::size_t>(d) * c, 0.0);
        for (int i = 0; i < n; ++i) {
            const double* row = aug[static_cast<std::size_t>(i)].data();
            for (int a = 0; a < d; ++a) rhs[static_cast<std::size_t>(a) * c + column_of[static_cast<std::size_t>(i)]] += row[a];
        }
        spd_solve(gram, d, rhs, c);
        model.weights = std::move(rhs);
    } else {
        // Wide data: the push-through identity gives the identical solution
        // from the n x n system (XX' + lambda I) A = Y, W = X'A.
        std::vector<double> gram(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n; ++i) {
            for (int j = i; j < n; ++j) {
                const double v = ops.dot(aug[static_cast<std::size_t>(i)].data(),
                                         aug[static_cast<std::size_t>(j)].data(),
                                         static_cast<std::size_t>(d));
                gram[static_cast<std::size_t>(i) * n + j] = v;
                gram[static_cast<std::size_t>(j) * n + i] = v;
            }
            gram[static_cast<std::size_t>(i) * n + i] += lambda;
        }
        std::vector<double> alpha(static_cast<std::size_t>(n) * c, 0.0);
        for (int i = 0; i < n; ++i) alpha[static_cast<std::size_t>(i) * c + column_of[static_cast<std::size_t>(i)]] = 1.0;
        spd_solve(gram, n, alpha, c);
        for (int i = 0; i < n; ++i) {
            const double* row = aug[static_cast<std::size_t>(i)].data();
            for (int a = 0; a < d; ++a) {
                for (int j = 0; j < c; ++j) {
                    model.weights[static_cast<std::size_t>(a) * c + j] +=
                        row[a] * alpha[static_cast<std::size_t>(i) * c + j];
                }
            }
        }
    }
    return model;
}

std::vector<int> ridge_predict(const RidgeModel& model,
                               const std::vector<std::vector<double>>& data) {
    if (model.dim <= 0 || model.classes.empty()) throw ValidationError("ridge: model is empty");
    const int c = static_cast<int>(model.classes.size());
    if (model.weights.size() != static_cast<std::size_t>(model.dim + 1) * static_cast<std::size_t>(c)) {
        throw ValidationError("ridge: model weights have the wrong shape");
    }
    check_matrix(data, static_cast<std::size_t>(model.dim), "ridge");
    std::vector<int> out;
    out.reserve(data.size());
    std::vector<double> scores(static_cast<std::size_t>(c));
    for (const auto& row : data) {
        // Start from the intercept row, then accumulate the data channels.
        for (int j = 0; j < c; ++j) {
            scores[static_cast<std::size_t>(j)] =
                model.weights[static_cast<std::size_t>(model.dim) * c + j];
        }
        for (int a = 0; a < model.dim; ++a) {
            const double x = row[static_cast<std::size_t>(a)];
            for (int j = 0; j < c; ++j) scores[static_cast<std::size_t>(j)] += x * model.weights[static_cast<std::size_t>(a) * c + j];
        }
        // Strict improvement keeps the lowest label on tied scores because
        // classes are stored in ascending order.
        int best = 0;
        for (int j = 1; j < c; ++j) {
            if (scores[static_cast<std::size_t>(j)] > scores[static_cast<std::size_t>(best)]) best = j;
        }
        out.push_back(model.classes[static_cast<std::size_t>(best)]);
    }
    return out;
}

}  // namespace grnf
