#include "grnf/invariant_maps.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include "grnf/errors.hpp"
#include "grnf/kernels.hpp"
#include "invariant_detail.hpp"

namespace grnf {

namespace detail {

// ===== Pattern tables =====

namespace {

std::shared_ptr<const PatternTable> build_pattern_table(int n, int k) {
    auto table = std::make_shared<PatternTable>();
    table->n = n;
    table->k = k;
    const auto partitions = enumerate_partitions(k);
    table->pattern_count = static_cast<int>(partitions.size());
    table->blocks.reserve(partitions.size());
    table->count.reserve(partitions.size());
    for (const auto& p : partitions) {
        const int b = p.block_count();
        table->blocks.push_back(b);
        std::int64_t cnt = 1;
        for (int t = 0; t < b; ++t) cnt *= std::max<std::int64_t>(0, n - t);
        table->count.push_back(cnt);
    }
    std::size_t tuples = 1;
    for (int i = 0; i < k; ++i) tuples *= static_cast<std::size_t>(n);
    if (tuples > kMaxTensorElements) {
        throw DimensionLimitError("PatternTable: n^k exceeds the element cap");
    }
    table->pid.resize(tuples);
    // Rank patterns without re-running partition_index per tuple: map each
    // canonical RGS to its enumeration position once.
    std::map<std::vector<int>, std::int32_t> rank;
    for (std::size_t i = 0; i < partitions.size(); ++i) {
        rank[partitions[i].rgs()] = static_cast<std::int32_t>(i);
    }
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    std::vector<int> pattern(static_cast<std::size_t>(k));
    std::vector<int> first_value(static_cast<std::size_t>(k));
    for (std::size_t t = 0; t < tuples; ++t) {
        int next = 0;
        for (int a = 0; a < k; ++a) {
            int id = -1;
            for (int j = 0; j < next; ++j) {
                if (first_value[static_cast<std::size_t>(j)] == idx[static_cast<std::size_t>(a)]) {
                    id = j;
                    break;
                }
            }
            if (id == -1) {
                id = next;
                first_value[static_cast<std::size_t>(next++)] = idx[static_cast<std::size_t>(a)];
            }
            pattern[static_cast<std::size_t>(a)] = id;
        }
        table->pid[t] = rank.at(pattern);
        for (int a = k - 1; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < n) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
    return table;
}

}  // namespace

std::shared_ptr<const PatternTable> PatternTable::get(int n, int k) {
    static std::mutex mu;
    static std::map<std::pair<int, int>, std::shared_ptr<const PatternTable>> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto& slot = cache[{n, k}];
    if (!slot) slot = build_pattern_table(n, k);
    return slot;
}

// ===== Fixed-point quantization =====

namespace {

// Power-of-two scale putting |v| <= m strictly below 2^62 after quantization.
inline int scale_exponent_for(double max_abs) {
    if (max_abs == 0.0) return 0;
    return 61 - std::ilogb(max_abs);
}

}  // namespace

QuantizedMatrix quantize_matrix(const DenseTensor& A, int channel) {
    if (A.order() != 2) throw ValidationError("quantize_matrix: tensor must have order 2");
    const int n = A.n();
    const std::size_t ch = static_cast<std::size_t>(A.channels());
    const std::size_t off = static_cast<std::size_t>(channel);
    const double* data = A.data();

    double max_abs = 0.0;
    const std::size_t cells = static_cast<std::size_t>(n) * static_cast<std::size_t>(n);
    if (ch == 1) {
        max_abs = kern::active_ops().max_abs(data, cells);
    } else {
        for (std::size_t i = 0; i < cells; ++i) max_abs = std::fmax(max_abs, std::fabs(data[i * ch + off]));
    }
    const int s = scale_exponent_for(max_abs);
    const double scale = std::ldexp(1.0, s);

    QuantizedMatrix qm;
    qm.n = n;
    qm.inv_scale = std::ldexp(1.0, -s);
    qm.q.resize(cells);
    qm.row.assign(static_cast<std::size_t>(n), 0);
    qm.col.assign(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const std::size_t cell = static_cast<std::size_t>(i) * static_cast<std::size_t>(n) +
                                     static_cast<std::size_t>(j);
            const std::int64_t qv = std::llrint(data[cell * ch + off] * scale);
            qm.q[cell] = qv;
            qm.row[static_cast<std::size_t>(i)] += qv;
            qm.col[static_cast<std::size_t>(j)] += qv;
            qm.total += qv;
            if (i == j) qm.diag += qv;
        }
    }
    return qm;
}

// ===== Strict equivariant expansion =====

namespace {

// How the two summed input positions of gamma relate to the output blocks.
struct EquivariantPlan {
    int k = 0;
    int b_out = 0;                    // blocks containing at least one output position
    std::vector<int> out_block_of;    // per output position: out-block index
    int in0_out = -1;                 // out-block input position 0 is tied to (-1 = free)
    int in1_out = -1;
    bool inputs_share_free_block = false;
    int free_blocks = 0;              // blocks made of input positions only
};

EquivariantPlan make_plan(const Partition& gamma, int k) {
    if (gamma.size() != k + 2) {
        throw ValidationError("equivariant basis: partition must cover k+2 positions");
    }
    EquivariantPlan plan;
    plan.k = k;
    plan.out_block_of.resize(static_cast<std::size_t>(k));
    std::vector<int> out_index_of_block(static_cast<std::size_t>(gamma.block_count()), -1);
    for (int p = 0; p < k; ++p) {
        const int blk = gamma.block_of(2 + p);
        if (out_index_of_block[static_cast<std::size_t>(blk)] == -1) {
            out_index_of_block[static_cast<std::size_t>(blk)] = plan.b_out++;
        }
        plan.out_block_of[static_cast<std::size_t>(p)] = out_index_of_block[static_cast<std::size_t>(blk)];
    }
    const int g0 = gamma.block_of(0);
    const int g1 = gamma.block_of(1);
    plan.in0_out = out_index_of_block[static_cast<std::size_t>(g0)];
    plan.in1_out = out_index_of_block[static_cast<std::size_t>(g1)];
    if (plan.in0_out == -1 && plan.in1_out == -1) {
        plan.inputs_share_free_block = (g0 == g1);
        plan.free_blocks = plan.inputs_share_free_block ? 1 : 2;
    } else if (plan.in0_out == -1 || plan.in1_out == -1) {
        plan.free_blocks = 1;
    }
    return plan;
}

}  // namespace

void equivariant_strict_fill(const Partition& gamma, const QuantizedMatrix& qm, int k,
                             Normalization norm, double* out) {
    const EquivariantPlan plan = make_plan(gamma, k);
    const int n = qm.n;
    const std::size_t un = static_cast<std::size_t>(n);

    // Count of summed input pairs per valid output tuple.
    std::int64_t pair_count = 1;
    if (plan.free_blocks >= 1) pair_count = n - plan.b_out;
    if (plan.free_blocks == 2) pair_count *= (n - plan.b_out - 1);
    if (pair_count <= 0) return;  // no matching tuples anywhere
    const double denom = (norm == Normalization::mean) ? static_cast<double>(pair_count) : 1.0;

    // Output strides per out-block: sum of n^(k-1-p) over positions in the block.
    std::vector<std::size_t> block_stride(static_cast<std::size_t>(plan.b_out), 0);
    {
        std::size_t stride = 1;
        for (int p = k - 1; p >= 0; --p) {
            block_stride[static_cast<std::size_t>(plan.out_block_of[static_cast<std::size_t>(p)])] += stride;
            stride *= un;
        }
    }

    const std::int64_t* q = qm.q.data();
    std::vector<int> values(static_cast<std::size_t>(plan.b_out), 0);
    std::vector<char> used(un, 0);

    auto emit = [&](std::size_t offset) {
        detail::int128 acc = 0;
        const int v0 = plan.in0_out >= 0 ? values[static_cast<std::size_t>(plan.in0_out)] : -1;
        const int v1 = plan.in1_out >= 0 ? values[static_cast<std::size_t>(plan.in1_out)] : -1;
        if (v0 >= 0 && v1 >= 0) {
            acc = q[static_cast<std::size_t>(v0) * un + static_cast<std::size_t>(v1)];
        } else if (v0 >= 0) {
            acc = qm.row[static_cast<std::size_t>(v0)];
            for (int u : values) acc -= q[static_cast<std::size_t>(v0) * un + static_cast<std::size_t>(u)];
        } else if (v1 >= 0) {
            acc = qm.col[static_cast<std::size_t>(v1)];
            for (int u : values) acc -= q[static_cast<std::size_t>(u) * un + static_cast<std::size_t>(v1)];
        } else if (plan.inputs_share_free_block) {
            acc = qm.diag;
            for (int u : values) acc -= q[static_cast<std::size_t>(u) * un + static_cast<std::size_t>(u)];
        } else {
            acc = qm.total - qm.diag;
            for (int u : values) {
                acc -= qm.row[static_cast<std::size_t>(u)];
                acc -= qm.col[static_cast<std::size_t>(u)];
                // q[u][u] sits in diag, row[u] and col[u]: subtracted three
                // times in total, so one restore here and one in the block
                // below bring its net contribution to zero.
                acc += q[static_cast<std::size_t>(u) * un + static_cast<std::size_t>(u)];
            }
            for (int u : values) {
                for (int w : values) {
                    acc += q[static_cast<std::size_t>(u) * un + static_cast<std::size_t>(w)];
                }
            }
        }
        out[offset] = static_cast<double>(acc) * qm.inv_scale / denom;
    };

    // Injective assignment of node values to output blocks.
    auto assign = [&](auto&& self, int blk, std::size_t offset) -> void {
        if (blk == plan.b_out) {
            emit(offset);
            return;
        }
        for (int v = 0; v < n; ++v) {
            if (used[static_cast<std::size_t>(v)]) continue;
            used[static_cast<std::size_t>(v)] = 1;
            values[static_cast<std::size_t>(blk)] = v;
            self(self, blk + 1,
                 offset + static_cast<std::size_t>(v) * block_stride[static_cast<std::size_t>(blk)]);
            used[static_cast<std::size_t>(v)] = 0;
        }
    };
    assign(assign, 0, 0);
}

// ===== Order-independent bucket sums =====

void strict_bucket_sums(const double* values, std::size_t len, std::size_t stride,
                        const std::int32_t* pid, int nbuckets, double* sums) {
    double max_abs = 0.0;
    if (stride == 1) {
        max_abs = kern::active_ops().max_abs(values, len);
    } else {
        for (std::size_t i = 0; i < len; ++i) max_abs = std::fmax(max_abs, std::fabs(values[i * stride]));
    }
    std::fill(sums, sums + nbuckets, 0.0);
    if (max_abs == 0.0) return;
    const int s = 61 - std::ilogb(max_abs);
    const double scale = std::ldexp(1.0, s);
    const double inv_scale = std::ldexp(1.0, -s);
    std::vector<int128> acc(static_cast<std::size_t>(nbuckets), 0);
    for (std::size_t i = 0; i < len; ++i) {
        acc[static_cast<std::size_t>(pid[i])] += std::llrint(values[i * stride] * scale);
    }
    for (int b = 0; b < nbuckets; ++b) {
        sums[b] = static_cast<double>(acc[static_cast<std::size_t>(b)]) * inv_scale;
    }
}

}  // namespace detail

// ===== Public operators =====

std::vector<double> invariant_basis_apply(const Partition& gamma, const DenseTensor& T,
                                          Normalization norm) {
    const int k = T.order();
    if (gamma.size() != k) {
        throw ValidationError("invariant_basis_apply: partition size must equal tensor order");
    }
    if (k == 0) throw ValidationError("invariant_basis_apply: order must be positive");
    const auto table = detail::PatternTable::get(T.n(), k);
    const int idx = partition_index(gamma);
    const std::int64_t count = table->count[static_cast<std::size_t>(idx)];
    std::vector<double> out(static_cast<std::size_t>(T.channels()), 0.0);
    if (count == 0) return out;
    std::vector<double> sums(static_cast<std::size_t>(table->pattern_count));
    for (int c = 0; c < T.channels(); ++c) {
        detail::strict_bucket_sums(T.data() + c, T.tuple_count(),
                                   static_cast<std::size_t>(T.channels()), table->pid.data(),
                                   table->pattern_count, sums.data());
        double v = sums[static_cast<std::size_t>(idx)];
        if (norm == Normalization::mean) v /= static_cast<double>(count);
        out[static_cast<std::size_t>(c)] = v;
    }
    return out;
}

DenseTensor equivariant_basis_apply(const Partition& gamma, const DenseTensor& A, int k,
                                    Normalization norm, int channel) {
    if (A.order() != 2) throw ValidationError("equivariant_basis_apply: input must have order 2");
    if (k < 1) throw ValidationError("equivariant_basis_apply: k must be positive");
    if (channel < 0 || channel >= A.channels()) {
        throw ValidationError("equivariant_basis_apply: channel out of range");
    }
    DenseTensor out(k, A.n(), 1);
    const detail::QuantizedMatrix qm = detail::quantize_matrix(A, channel);
    detail::equivariant_strict_fill(gamma, qm, k, norm, out.data());
    return out;
}

DenseTensor bias_basis_tensor(const Partition& gamma, int k, int n) {
    if (gamma.size() != k) {
        throw ValidationError("bias_basis_tensor: partition size must equal k");
    }
    if (k < 1) throw ValidationError("bias_basis_tensor: k must be positive");
    DenseTensor out(k, n, 1);
    const auto table = detail::PatternTable::get(n, k);
    const std::int32_t idx = static_cast<std::int32_t>(partition_index(gamma));
    double* data = out.data();
    for (std::size_t t = 0; t < out.tuple_count(); ++t) {
        data[t] = (table->pid[t] == idx) ? 1.0 : 0.0;
    }
    return out;
}

double affine_invariant_apply(const InvariantLayerParams& params, const DenseTensor& T,
                              Normalization norm) {
    const int k = T.order();
    if (params.k != k) throw ValidationError("affine_invariant_apply: order mismatch");
    const int d = T.channels();
    const auto table = detail::PatternTable::get(T.n(), k);
    const std::size_t bell_k = static_cast<std::size_t>(table->pattern_count);
    if (params.theta.size() != bell_k * static_cast<std::size_t>(d)) {
        throw ValidationError("affine_invariant_apply: theta must have bell(k)*channels entries");
    }
    // Normalized bucket values per channel, then one fixed-order weighted sum.
    std::vector<double> sums(bell_k);
    std::vector<double> pooled(bell_k * static_cast<std::size_t>(d), 0.0);
    for (int c = 0; c < d; ++c) {
        detail::strict_bucket_sums(T.data() + c, T.tuple_count(), static_cast<std::size_t>(d),
                                   table->pid.data(), table->pattern_count, sums.data());
        for (std::size_t g = 0; g < bell_k; ++g) {
            double v = sums[g];
            if (norm == Normalization::mean) {
                const std::int64_t count = table->count[g];
                v = (count > 0) ? v / static_cast<double>(count) : 0.0;
            }
            pooled[g * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)] = v;
        }
    }
    double h = params.bias;
    for (std::size_t i = 0; i < pooled.size(); ++i) h += params.theta[i] * pooled[i];
    return h;
}

DenseTensor affine_equivariant_apply(const EquivariantLayerParams& params, const DenseTensor& A,
                                     Normalization norm) {
    if (A.order() != 2) throw ValidationError("affine_equivariant_apply: input must have order 2");
    const int k = params.k;
    if (k < 1) throw ValidationError("affine_equivariant_apply: k must be positive");
    const int d = A.channels();
    const auto lin_partitions = enumerate_partitions(k + 2);
    const auto bias_partitions = enumerate_partitions(k);
    if (params.theta_lin.size() != lin_partitions.size() * static_cast<std::size_t>(d)) {
        throw ValidationError("affine_equivariant_apply: theta_lin must have bell(k+2)*channels entries");
    }
    if (params.theta_bias.size() != bias_partitions.size()) {
        throw ValidationError("affine_equivariant_apply: theta_bias must have bell(k) entries");
    }
    const int n = A.n();
    DenseTensor out(k, n, 1);
    const auto table = detail::PatternTable::get(n, k);

    // Bias first: a per-entry lookup because the strict patterns tile the space.
    double* data = out.data();
    for (std::size_t t = 0; t < out.tuple_count(); ++t) {
        data[t] = params.theta_bias[static_cast<std::size_t>(table->pid[t])];
    }
    // Linear part: one strict expansion per (partition, channel), accumulated
    // in the fixed partition-major coefficient order.
    std::vector<detail::QuantizedMatrix> qms;
    qms.reserve(static_cast<std::size_t>(d));
    for (int c = 0; c < d; ++c) qms.push_back(detail::quantize_matrix(A, c));
    std::vector<double> column(out.tuple_count());
    const auto& ops = kern::active_ops();
    for (std::size_t g = 0; g < lin_partitions.size(); ++g) {
        for (int c = 0; c < d; ++c) {
            const double coeff = params.theta_lin[g * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)];
            std::fill(column.begin(), column.end(), 0.0);
            detail::equivariant_strict_fill(lin_partitions[g], qms[static_cast<std::size_t>(c)], k, norm,
                                            column.data());
            ops.axpy(data, column.data(), coeff, out.tuple_count());
        }
    }
    return out;
}

}  // namespace grnf
