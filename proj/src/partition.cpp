#include "grnf/partition.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "grnf/errors.hpp"

namespace grnf {

// ===== Partition =====

Partition Partition::from_rgs(std::vector<int> rgs) {
    int max_seen = -1;
    for (std::size_t i = 0; i < rgs.size(); ++i) {
        const int v = rgs[i];
        if (v < 0 || v > max_seen + 1) {
            throw ValidationError("Partition: not a canonical restricted growth string");
        }
        max_seen = std::max(max_seen, v);
    }
    Partition p;
    p.rgs_ = std::move(rgs);
    p.blocks_ = max_seen + 1;
    return p;
}

Partition Partition::from_blocks(const std::vector<std::vector<int>>& blocks, int m) {
    std::vector<int> owner(static_cast<std::size_t>(m), -1);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        for (int pos : blocks[b]) {
            if (pos < 1 || pos > m || owner[pos - 1] != -1) {
                throw ValidationError("Partition: blocks must partition {1..m}");
            }
            owner[pos - 1] = static_cast<int>(b);
        }
    }
    // Relabel blocks in order of first appearance to get the canonical RGS.
    std::vector<int> relabel(blocks.size(), -1);
    std::vector<int> rgs(static_cast<std::size_t>(m));
    int next = 0;
    for (int i = 0; i < m; ++i) {
        if (owner[i] == -1) {
            throw ValidationError("Partition: blocks must cover {1..m}");
        }
        if (relabel[owner[i]] == -1) relabel[owner[i]] = next++;
        rgs[i] = relabel[owner[i]];
    }
    return from_rgs(std::move(rgs));
}

std::string Partition::to_string() const {
    std::string out = "{";
    for (int b = 0; b < blocks_; ++b) {
        if (b > 0) out += "|";
        bool first = true;
        for (int i = 0; i < size(); ++i) {
            if (rgs_[i] != b) continue;
            if (!first) out += ",";
            out += std::to_string(i + 1);
            first = false;
        }
    }
    out += "}";
    return out;
}

// ===== Bell numbers / enumeration =====

std::uint64_t bell(int m) {
    if (m < 0 || m > kMaxBellArgument) {
        throw DimensionLimitError("bell: argument must be in [0, 12]");
    }
    // Bell triangle.
    std::vector<std::uint64_t> row = {1};
    for (int i = 0; i < m; ++i) {
        std::vector<std::uint64_t> next;
        next.reserve(row.size() + 1);
        next.push_back(row.back());
        for (std::size_t j = 0; j < row.size(); ++j) {
            next.push_back(next.back() + row[j]);
        }
        row = std::move(next);
    }
    return row.front();
}

std::vector<Partition> enumerate_partitions(int m) {
    if (m < 0 || m > kMaxEnumeratePartitions) {
        throw DimensionLimitError("enumerate_partitions: argument must be in [0, 8]");
    }
    std::vector<Partition> out;
    if (m == 0) {
        out.push_back(Partition::from_rgs({}));
        return out;
    }
    // Depth-first in lexicographic order: position i may take 0..max_prev+1.
    std::vector<int> rgs(static_cast<std::size_t>(m), 0);
    auto recurse = [&](auto&& self, int pos, int max_prev) -> void {
        if (pos == m) {
            out.push_back(Partition::from_rgs(rgs));
            return;
        }
        for (int v = 0; v <= max_prev + 1; ++v) {
            rgs[static_cast<std::size_t>(pos)] = v;
            self(self, pos + 1, std::max(max_prev, v));
        }
    };
    recurse(recurse, 1, 0);  // rgs[0] is fixed to 0
    return out;
}

int partition_index(const Partition& p) {
    // Lexicographic rank of the RGS among all canonical strings of length m.
    // Counting via mixed-radix walk: at each position, strings below branch off
    // with a smaller digit; the subtree count for a prefix with b blocks used
    // and r remaining positions follows the Bell-triangle recurrence.
    const int m = p.size();
    if (m == 0) return 0;
    // d[r][b]: number of canonical completions of r remaining positions when b
    // block ids are already in use. d[0][b] = 1; d[r][b] = b*d[r-1][b] + d[r-1][b+1].
    std::vector<std::vector<std::uint64_t>> d(static_cast<std::size_t>(m) + 1,
                                              std::vector<std::uint64_t>(static_cast<std::size_t>(m) + 2, 0));
    for (std::size_t b = 0; b < d[0].size(); ++b) d[0][b] = 1;
    for (int r = 1; r <= m; ++r) {
        for (int b = 0; b + 1 <= m; ++b) {
            d[static_cast<std::size_t>(r)][static_cast<std::size_t>(b)] =
                static_cast<std::uint64_t>(b) * d[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(b)] +
                d[static_cast<std::size_t>(r - 1)][static_cast<std::size_t>(b) + 1];
        }
    }
    std::uint64_t rank = 0;
    int used = 1;  // block 0 in use after position 0
    for (int i = 1; i < m; ++i) {
        const int v = p.block_of(i);
        const int remaining = m - 1 - i;
        for (int w = 0; w < v; ++w) {
            const int used_after = std::max(used, w + 1);
            rank += d[static_cast<std::size_t>(remaining)][static_cast<std::size_t>(used_after)];
        }
        used = std::max(used, v + 1);
    }
    return static_cast<int>(rank);
}

std::vector<int> pattern_of(const int* tuple, int m) {
    std::vector<int> rgs(static_cast<std::size_t>(m));
    std::vector<int> values;
    values.reserve(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        int id = -1;
        for (std::size_t j = 0; j < values.size(); ++j) {
            if (values[j] == tuple[i]) {
                id = static_cast<int>(j);
                break;
            }
        }
        if (id == -1) {
            id = static_cast<int>(values.size());
            values.push_back(tuple[i]);
        }
        rgs[static_cast<std::size_t>(i)] = id;
    }
    return rgs;
}

}  // namespace grnf
