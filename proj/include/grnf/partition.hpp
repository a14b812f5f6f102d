#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace grnf {

// Hard caps keeping partition enumeration and Bell-number arithmetic desk-sized.
inline constexpr int kMaxEnumeratePartitions = 8;
inline constexpr int kMaxBellArgument = 12;

// Set partition of {1..m} in canonical restricted-growth-string form:
// rgs[0] == 0 and rgs[i] <= 1 + max(rgs[0..i-1]). Block ids are assigned in
// order of first appearance, so equal strings mean equal partitions.
class Partition {
public:
    Partition() = default;

    // Builds from a restricted growth string; throws std::invalid_argument
    // if the string is not canonical.
    static Partition from_rgs(std::vector<int> rgs);

    // Builds from 1-based blocks, e.g. {{1,3},{2}} for m=3. Blocks must
    // partition {1..m} exactly; the canonical RGS is derived internally.
    static Partition from_blocks(const std::vector<std::vector<int>>& blocks, int m);

    int size() const { return static_cast<int>(rgs_.size()); }
    int block_count() const { return blocks_; }
    int block_of(int position) const { return rgs_[position]; }  // 0-based position
    const std::vector<int>& rgs() const { return rgs_; }

    // 1-based block notation matching common write-ups, e.g. "{1,3|2}".
    std::string to_string() const;

    bool operator==(const Partition& other) const { return rgs_ == other.rgs_; }
    bool operator!=(const Partition& other) const { return !(*this == other); }

private:
    std::vector<int> rgs_;
    int blocks_ = 0;
};

// Bell number B(m) for 0 <= m <= 12; throws std::out_of_range beyond the cap.
std::uint64_t bell(int m);

// All partitions of {1..m} in lexicographic RGS order (the canonical ordering
// used for coefficient indexing everywhere in this library). m == 0 yields the
// single empty partition; m > 8 throws std::out_of_range.
std::vector<Partition> enumerate_partitions(int m);

// Position of `p` in enumerate_partitions(p.size()) order.
int partition_index(const Partition& p);

// Equality pattern of an index tuple as a canonical RGS: positions get the
// same block id iff their indices are equal.
std::vector<int> pattern_of(const int* tuple, int m);

}  // namespace grnf
