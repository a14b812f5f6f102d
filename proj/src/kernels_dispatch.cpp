#include <cstdlib>
#include <string>

#include "grnf/errors.hpp"
#include "grnf/kernels.hpp"

namespace grnf::kern {

#if defined(GRNF_HAVE_AVX2_LANE)
const Ops* avx2_ops_impl();  // defined in kernels_avx2.cpp
#endif

const Ops* avx2_ops() {
#if defined(GRNF_HAVE_AVX2_LANE)
    if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
        return avx2_ops_impl();
    }
#endif
    return nullptr;
}

namespace {

const Ops* select_default() {
    if (const char* env = std::getenv("GRNF_SIMD")) {
        const std::string want(env);
        if (want == "scalar") return &scalar_ops();
        if (want == "avx2") {
            if (const Ops* ops = avx2_ops()) return ops;
            throw Error("GRNF_SIMD=avx2 requested but the AVX2 lane is unavailable");
        }
        if (!want.empty() && want != "auto") {
            throw Error("GRNF_SIMD must be one of: auto, scalar, avx2");
        }
    }
    if (const Ops* ops = avx2_ops()) return ops;
    return &scalar_ops();
}

const Ops*& current() {
    static const Ops* ops = select_default();
    return ops;
}

}  // namespace

const Ops& active_ops() { return *current(); }

void force_lane(Lane lane) {
    if (lane == Lane::scalar) {
        current() = &scalar_ops();
        return;
    }
    if (const Ops* ops = avx2_ops()) {
        current() = ops;
        return;
    }
    throw Error("force_lane: AVX2 lane is unavailable on this host");
}

}  // namespace grnf::kern
