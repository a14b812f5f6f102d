// AVX2+FMA kernel lane. Compiled with -mavx2 -mfma and selected at runtime;
// arithmetic mirrors the scalar lane exactly (see kernels_internal.hpp).

#include <cmath>
#include <cstdint>
#include <immintrin.h>

#include "grnf/kernels.hpp"
#include "kernels_internal.hpp"

namespace grnf::kern {

namespace {

using namespace detail;

inline __m256d abs_pd(__m256d v) {
    const __m256d mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    return _mm256_and_pd(v, mask);
}

// Four sigmoids at once; the remainder of each array is delegated to the
// shared scalar element function, which computes the identical sequence.
inline __m256d sigmoid_pd(__m256d x) {
    const __m256d clamp = _mm256_set1_pd(kSigmoidClamp);
    const __m256d one = _mm256_set1_pd(1.0);
    const __m256d a = _mm256_min_pd(abs_pd(x), clamp);
    // e^{-a}: range reduction against ln2 with a split constant.
    const __m256d u = _mm256_sub_pd(_mm256_setzero_pd(), a);
    const __m256d n = _mm256_round_pd(_mm256_mul_pd(u, _mm256_set1_pd(kLog2E)),
                                      _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC);
    __m256d r = _mm256_fmadd_pd(n, _mm256_set1_pd(-kLn2Hi), u);
    r = _mm256_fmadd_pd(n, _mm256_set1_pd(-kLn2Lo), r);
    __m256d p = _mm256_set1_pd(kExpPoly[13]);
    for (int i = 12; i >= 0; --i) p = _mm256_fmadd_pd(p, r, _mm256_set1_pd(kExpPoly[i]));
    // 2^n via exponent bits; n is integral in [-65, 0].
    const __m128i n32 = _mm256_cvtpd_epi32(n);
    const __m256i n64 = _mm256_cvtepi32_epi64(n32);
    const __m256i bits = _mm256_slli_epi64(_mm256_add_epi64(n64, _mm256_set1_epi64x(1023)), 52);
    const __m256d t = _mm256_mul_pd(p, _mm256_castsi256_pd(bits));
    // num/(1+t) with num = t for negative x (blendv keys on the sign bit).
    const __m256d num = _mm256_blendv_pd(one, t, x);
    return _mm256_div_pd(num, _mm256_add_pd(one, t));
}

void axpy_avx2(double* y, const double* x, double a, std::size_t len) {
    const __m256d va = _mm256_set1_pd(a);
    const std::size_t main = len - len % 4;
    for (std::size_t i = 0; i < main; i += 4) {
        const __m256d vy = _mm256_loadu_pd(y + i);
        const __m256d vx = _mm256_loadu_pd(x + i);
        _mm256_storeu_pd(y + i, _mm256_fmadd_pd(va, vx, vy));
    }
    for (std::size_t i = main; i < len; ++i) y[i] = std::fma(a, x[i], y[i]);
}

void sigmoid_avx2(double* x, std::size_t len) {
    const std::size_t main = len - len % 4;
    for (std::size_t i = 0; i < main; i += 4) {
        _mm256_storeu_pd(x + i, sigmoid_pd(_mm256_loadu_pd(x + i)));
    }
    for (std::size_t i = main; i < len; ++i) x[i] = sigmoid_scalar(x[i]);
}

void tanh_avx2(double* x, std::size_t len) {
    const __m256d two = _mm256_set1_pd(2.0);
    const __m256d neg_one = _mm256_set1_pd(-1.0);
    const std::size_t main = len - len % 4;
    for (std::size_t i = 0; i < main; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        const __m256d s = sigmoid_pd(_mm256_mul_pd(two, v));
        _mm256_storeu_pd(x + i, _mm256_fmadd_pd(two, s, neg_one));
    }
    for (std::size_t i = main; i < len; ++i) {
        x[i] = std::fma(2.0, sigmoid_scalar(2.0 * x[i]), -1.0);
    }
}

void relu_avx2(double* x, std::size_t len) {
    const __m256d zero = _mm256_setzero_pd();
    const std::size_t main = len - len % 4;
    for (std::size_t i = 0; i < main; i += 4) {
        _mm256_storeu_pd(x + i, _mm256_max_pd(_mm256_loadu_pd(x + i), zero));
    }
    for (std::size_t i = main; i < len; ++i) x[i] = std::fmax(x[i], 0.0);
}

// Lane j of the accumulator holds elements i+j; fold order (0+2)+(1+3) is what
// the scalar lane replicates.
inline double fold_sum(__m256d acc) {
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(s) + _mm_cvtsd_f64(_mm_unpackhi_pd(s, s));
}

double dot_avx2(const double* a, const double* b, std::size_t len) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t main = len - len % 4;
    for (std::size_t i = 0; i < main; i += 4) {
        acc = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc);
    }
    double res = fold_sum(acc);
    for (std::size_t i = main; i < len; ++i) res = std::fma(a[i], b[i], res);
    return res;
}

double sumsq_diff_avx2(const double* a, const double* b, std::size_t len) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t main = len - len % 4;
    for (std::size_t i = 0; i < main; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i));
        acc = _mm256_fmadd_pd(d, d, acc);
    }
    double res = fold_sum(acc);
    for (std::size_t i = main; i < len; ++i) {
        const double d = a[i] - b[i];
        res = std::fma(d, d, res);
    }
    return res;
}

double max_abs_avx2(const double* x, std::size_t len) {
    __m256d acc = _mm256_setzero_pd();
    const std::size_t main = len - len % 4;
    for (std::size_t i = 0; i < main; i += 4) {
        acc = _mm256_max_pd(acc, abs_pd(_mm256_loadu_pd(x + i)));
    }
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d m = _mm_max_pd(lo, hi);
    double res = std::fmax(_mm_cvtsd_f64(m), _mm_cvtsd_f64(_mm_unpackhi_pd(m, m)));
    for (std::size_t i = main; i < len; ++i) res = std::fmax(res, std::fabs(x[i]));
    return res;
}

}  // namespace

const Ops* avx2_ops_impl() {
    static const Ops ops = {
        "avx2",     axpy_avx2, sigmoid_avx2, tanh_avx2,
        relu_avx2,  dot_avx2,  sumsq_diff_avx2, max_abs_avx2,
    };
    return &ops;
}

}  // namespace grnf::kern
