#pragma once

#include <cstddef>
#include <cstdint>
#include <random>
#include <vector>

namespace grnf {

// Refuse to materialize tensors above this many doubles (n^order * channels).
inline constexpr std::size_t kMaxTensorElements = std::size_t(1) << 28;

// Dense order-k tensor with every mode of size n plus a trailing channel axis.
// Layout is row-major with channels fastest: element (i_1..i_k, c) lives at
// ((((i_1*n + i_2)*n + ...)*n + i_k) * channels + c.
class DenseTensor {
public:
    DenseTensor() = default;
    DenseTensor(int order, int n, int channels);

    static DenseTensor zeros(int order, int n, int channels) {
        return DenseTensor(order, n, channels);
    }

    int order() const { return order_; }
    int n() const { return n_; }
    int channels() const { return channels_; }

    // Number of index tuples, i.e. n^order (channels not included).
    std::size_t tuple_count() const { return tuples_; }
    std::size_t size() const { return data_.size(); }

    double* data() { return data_.data(); }
    const double* data() const { return data_.data(); }

    double& at(const std::vector<int>& idx, int c = 0);
    double at(const std::vector<int>& idx, int c = 0) const;

    // Linear tuple index for (i_1..i_k); multiply by channels and add c for
    // the flat data offset.
    std::size_t tuple_offset(const int* idx) const;

    bool same_shape(const DenseTensor& other) const {
        return order_ == other.order_ && n_ == other.n_ && channels_ == other.channels_;
    }

    bool operator==(const DenseTensor& other) const {
        return same_shape(other) && data_ == other.data_;
    }

private:
    int order_ = 0;
    int n_ = 0;
    int channels_ = 0;
    std::size_t tuples_ = 0;
    std::vector<double> data_;
};

// Bijection on {0..n-1}; image[i] is where index i is read from when the
// permutation acts on a tensor.
class Permutation {
public:
    Permutation() = default;
    explicit Permutation(std::vector<int> image);

    static Permutation identity(int n);
    static Permutation random(int n, std::mt19937_64& rng);

    int n() const { return static_cast<int>(image_.size()); }
    int operator()(int i) const { return image_[static_cast<std::size_t>(i)]; }
    const std::vector<int>& image() const { return image_; }

    Permutation inverse() const;

    // compose(a, b)(i) == a(b(i)).
    static Permutation compose(const Permutation& a, const Permutation& b);

    bool operator==(const Permutation& other) const { return image_ == other.image_; }

private:
    std::vector<int> image_;
};

// Relabeled tensor: out(j_1..j_k, c) = in(pi(j_1)..pi(j_k), c).
DenseTensor apply_permutation(const DenseTensor& t, const Permutation& pi);

}  // namespace grnf
