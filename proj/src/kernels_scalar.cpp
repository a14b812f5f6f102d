#include <bit>
#include <cmath>
#include <cstdint>

#include "grnf/kernels.hpp"
#include "kernels_internal.hpp"

namespace grnf::kern {

namespace {

using namespace detail;

// e^{-a} for a in [0, 45]; mirrors the vector lane step for step.
inline double exp_neg(double a) {
    const double u = -a;
    const double n = std::nearbyint(u * kLog2E);
    double r = std::fma(n, -kLn2Hi, u);
    r = std::fma(n, -kLn2Lo, r);
    double p = kExpPoly[13];
    for (int i = 12; i >= 0; --i) p = std::fma(p, r, kExpPoly[i]);
    // n is integral in [-65, 0]; build 2^n directly in the exponent bits.
    const std::int64_t biased = static_cast<std::int64_t>(n) + 1023;
    const double scale = std::bit_cast<double>(static_cast<std::uint64_t>(biased) << 52);
    return p * scale;
}

inline double sigmoid_one(double x) {
    const double a = std::fmin(std::fabs(x), kSigmoidClamp);
    const double t = exp_neg(a);
    const double num = std::signbit(x) ? t : 1.0;
    return num / (1.0 + t);
}

void axpy_scalar(double* y, const double* x, double a, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void sigmoid_scalar_k(double* x, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) x[i] = sigmoid_one(x[i]);
}

void tanh_scalar_k(double* x, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) x[i] = std::fma(2.0, sigmoid_one(2.0 * x[i]), -1.0);
}

void relu_scalar_k(double* x, std::size_t len) {
    for (std::size_t i = 0; i < len; ++i) x[i] = std::fmax(x[i], 0.0);
}

// Reductions keep four independent accumulators over stride-4 blocks and fold
// them as (acc0+acc2) + (acc1+acc3), matching the vector lane's extract/hadd
// order; the remainder folds into the combined value one element at a time.
double dot_scalar(const double* a, const double* b, std::size_t len) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t main = len - len % 4;
    for (std::size_t i = 0; i < main; i += 4) {
        for (int j = 0; j < 4; ++j) {
            acc[j] = std::fma(a[i + static_cast<std::size_t>(j)],
                              b[i + static_cast<std::size_t>(j)], acc[j]);
        }
    }
    double res = (acc[0] + acc[2]) + (acc[1] + acc[3]);
    for (std::size_t i = main; i < len; ++i) res = std::fma(a[i], b[i], res);
    return res;
}

double sumsq_diff_scalar(const double* a, const double* b, std::size_t len) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    const std::size_t main = len - len % 4;
    for (std::size_t i = 0; i < main; i += 4) {
        for (int j = 0; j < 4; ++j) {
            const double d = a[i + static_cast<std::size_t>(j)] - b[i + static_cast<std::size_t>(j)];
            acc[j] = std::fma(d, d, acc[j]);
        }
    }
    double res = (acc[0] + acc[2]) + (acc[1] + acc[3]);
    for (std::size_t i = main; i < len; ++i) {
        const double d = a[i] - b[i];
        res = std::fma(d, d, res);
    }
    return res;
}

double max_abs_scalar(const double* x, std::size_t len) {
    double m = 0.0;
    for (std::size_t i = 0; i < len; ++i) m = std::fmax(m, std::fabs(x[i]));
    return m;
}

}  // namespace

const Ops& scalar_ops() {
    static const Ops ops = {
        "scalar",       axpy_scalar, sigmoid_scalar_k, tanh_scalar_k,
        relu_scalar_k,  dot_scalar,  sumsq_diff_scalar, max_abs_scalar,
    };
    return ops;
}

double sigmoid_scalar(double x) { return sigmoid_one(x); }

}  // namespace grnf::kern
