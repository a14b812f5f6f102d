#pragma once

#include <cstddef>

namespace grnf::kern {

// Inner-loop kernels used by the feature evaluation pipeline. Every kernel has
// a scalar reference implementation and (on x86-64) an AVX2+FMA variant picked
// at runtime. The scalar lane mirrors the vector arithmetic operation for
// operation (explicit fma, same reduction tree, same polynomial), so the two
// lanes produce bit-identical results; the unit tests assert exactly that.
struct Ops {
    const char* name;
    // y[i] += a * x[i]
    void (*axpy)(double* y, const double* x, double a, std::size_t len);
    // x[i] = 1 / (1 + exp(-x[i]))
    void (*sigmoid)(double* x, std::size_t len);
    // x[i] = tanh(x[i]), evaluated as 2*sigmoid(2x) - 1
    void (*tanh_act)(double* x, std::size_t len);
    // x[i] = max(x[i], 0)
    void (*relu)(double* x, std::size_t len);
    double (*dot)(const double* a, const double* b, std::size_t len);
    double (*sumsq_diff)(const double* a, const double* b, std::size_t len);
    double (*max_abs)(const double* x, std::size_t len);
};

enum class Lane { scalar, avx2 };

const Ops& scalar_ops();
const Ops* avx2_ops();    // nullptr if the binary or the host lacks AVX2+FMA

// Runtime-selected lane. Defaults to the widest supported one; the
// GRNF_SIMD environment variable ("scalar" or "avx2") overrides.
const Ops& active_ops();
void force_lane(Lane lane);  // test hook; throws if the lane is unavailable

// Lane-independent scalar sigmoid (same algorithm as the lane kernels); used
// for the scalar readout activation so results never depend on lane choice.
double sigmoid_scalar(double x);

}  // namespace grnf::kern
