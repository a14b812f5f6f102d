#pragma once

// Internals shared by the invariant-map operators and the feature evaluator.
//
// Exactness design: every reduction whose summands get reordered by a node
// relabeling is computed in fixed-point integers. Values are quantized by
// llrint at a power-of-two scale derived from the (relabeling-invariant)
// maximum magnitude and accumulated in 128-bit integers; integer addition is
// associative, so results are bit-identical under any permutation, and the
// single final double conversion keeps ~1e-16 relative accuracy.

#include <cstdint>
#include <memory>
#include <vector>

#include "grnf/invariant_maps.hpp"
#include "grnf/partition.hpp"
#include "grnf/tensor.hpp"

namespace grnf::detail {

using int128 = __int128;

// Strict-pattern lookup for order-k tuples over n nodes: pid[t] is the index
// (in enumerate_partitions(k) order) of the equality pattern of tuple t, and
// count[p] is the number of tuples with pattern p (falling factorial, 0 when
// n has too few distinct values). Tables are cached per (n, k).
struct PatternTable {
    int n = 0;
    int k = 0;
    int pattern_count = 0;
    std::vector<std::int32_t> pid;       // n^k
    std::vector<std::int64_t> count;     // pattern_count
    std::vector<int> blocks;             // pattern_count

    static std::shared_ptr<const PatternTable> get(int n, int k);
};

// Per-channel fixed-point view of an order-2 tensor plus the pooled sums the
// equivariant fast path needs.
struct QuantizedMatrix {
    int n = 0;
    double inv_scale = 1.0;  // 2^-s; q * inv_scale recovers the value
    std::vector<std::int64_t> q;  // n*n entries
    std::vector<int128> row;      // per-row sums (diagonal included)
    std::vector<int128> col;      // per-column sums
    int128 diag = 0;
    int128 total = 0;
};

QuantizedMatrix quantize_matrix(const DenseTensor& A, int channel);

// Fills `out` (n^k doubles, pre-zeroed) with the strict equality-pattern
// expansion of qm under `gamma` (partition of {1..k+2}); normalization folded in.
void equivariant_strict_fill(const Partition& gamma, const QuantizedMatrix& qm, int k,
                             Normalization norm, double* out);

// Order-independent strict-pattern bucket sums: sums[p] = sum of values whose
// tuple pattern is p. `stride` walks multi-channel layouts.
void strict_bucket_sums(const double* values, std::size_t len, std::size_t stride,
                        const std::int32_t* pid, int nbuckets, double* sums);

}  // namespace grnf::detail
