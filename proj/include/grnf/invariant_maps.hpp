#pragma once

#include <vector>

#include "grnf/partition.hpp"
#include "grnf/tensor.hpp"

namespace grnf {

// How basis contractions are normalized: raw sums, or means over the number
// of index tuples contributing to each output (the default everywhere).
enum class Normalization { sum, mean };

// Parameters of the affine invariant readout H_k: one linear coefficient per
// (partition of {1..k}, input channel), partition-major, plus a scalar bias.
struct InvariantLayerParams {
    int k = 1;
    std::vector<double> theta;  // bell(k) * d_in
    double bias = 0.0;
};

// Parameters of the affine equivariant layer F_{2,k}: one linear coefficient
// per (partition of {1..k+2}, input channel), partition-major, plus one bias
// coefficient per partition of {1..k}.
struct EquivariantLayerParams {
    int k = 1;
    std::vector<double> theta_lin;   // bell(k+2) * d_in
    std::vector<double> theta_bias;  // bell(k)
};

// Strict equality-pattern contraction of an order-k tensor: the sum of T over
// all index tuples whose equality pattern is exactly `gamma` (indices equal
// iff positions share a block), one value per channel. Mean normalization
// divides by the matching tuple count n(n-1)...(n-b+1); outputs are 0 when no
// tuple matches. The reduction is order-independent bit for bit, so the
// result is exactly invariant under node relabeling.
std::vector<double> invariant_basis_apply(const Partition& gamma, const DenseTensor& T,
                                          Normalization norm);

// Strict equality-pattern expansion of an order-2 slice: positions 1..2 of
// `gamma` (a partition of {1..k+2}) are the summed input indices, positions
// 3..k+2 index the order-k output. Output entries whose indices violate the
// output-restricted pattern are 0; mean normalization divides by the count of
// summed input pairs per output. Computed by pooled row/column/diagonal/total
// statistics in O(n^max(2,k)) instead of O(n^{k+2}) enumeration, with exact
// integer accumulation (bitwise equivariant under relabeling).
DenseTensor equivariant_basis_apply(const Partition& gamma, const DenseTensor& A, int k,
                                    Normalization norm, int channel = 0);

// 0/1 indicator of the strict pattern `gamma` over order-k index tuples.
// Summing over all partitions of {1..k} tiles the index space exactly.
DenseTensor bias_basis_tensor(const Partition& gamma, int k, int n);

// H_k(T; theta) = sum_gamma sum_c theta[gamma*d+c] * I_gamma(T)[c] + bias.
double affine_invariant_apply(const InvariantLayerParams& params, const DenseTensor& T,
                              Normalization norm);

// F_{2,k}(A; theta) = sum_{gamma,c} theta_lin[gamma*d+c] * E_gamma(A[..,c])
//                   + sum_{gamma'} theta_bias[gamma'] * B_{gamma'}.
DenseTensor affine_equivariant_apply(const EquivariantLayerParams& params, const DenseTensor& A,
                                     Normalization norm);

}  // namespace grnf
