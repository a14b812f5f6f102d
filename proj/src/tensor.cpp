#include "grnf/tensor.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "grnf/errors.hpp"

namespace grnf {

// ===== DenseTensor =====

DenseTensor::DenseTensor(int order, int n, int channels)
    : order_(order), n_(n), channels_(channels) {
    if (order < 0 || n <= 0 || channels <= 0) {
        throw ValidationError("DenseTensor: order must be >= 0, n and channels positive");
    }
    std::size_t tuples = 1;
    for (int i = 0; i < order; ++i) {
        if (tuples > kMaxTensorElements / static_cast<std::size_t>(n)) {
            throw DimensionLimitError("DenseTensor: n^order exceeds the element cap");
        }
        tuples *= static_cast<std::size_t>(n);
    }
    if (tuples > kMaxTensorElements / static_cast<std::size_t>(channels)) {
        throw DimensionLimitError("DenseTensor: n^order * channels exceeds the element cap");
    }
    tuples_ = tuples;
    data_.assign(tuples * static_cast<std::size_t>(channels), 0.0);
}

std::size_t DenseTensor::tuple_offset(const int* idx) const {
    std::size_t off = 0;
    for (int a = 0; a < order_; ++a) {
        off = off * static_cast<std::size_t>(n_) + static_cast<std::size_t>(idx[a]);
    }
    return off;
}

double& DenseTensor::at(const std::vector<int>& idx, int c) {
    if (static_cast<int>(idx.size()) != order_ || c < 0 || c >= channels_) {
        throw std::out_of_range("DenseTensor::at: bad index arity or channel");
    }
    for (int v : idx) {
        if (v < 0 || v >= n_) throw std::out_of_range("DenseTensor::at: index out of range");
    }
    return data_[tuple_offset(idx.data()) * static_cast<std::size_t>(channels_) +
                 static_cast<std::size_t>(c)];
}

double DenseTensor::at(const std::vector<int>& idx, int c) const {
    return const_cast<DenseTensor*>(this)->at(idx, c);
}

// ===== Permutation =====

Permutation::Permutation(std::vector<int> image) : image_(std::move(image)) {
    std::vector<char> seen(image_.size(), 0);
    for (int v : image_) {
        if (v < 0 || v >= static_cast<int>(image_.size()) || seen[static_cast<std::size_t>(v)]) {
            throw ValidationError("Permutation: image is not a bijection on {0..n-1}");
        }
        seen[static_cast<std::size_t>(v)] = 1;
    }
}

Permutation Permutation::identity(int n) {
    std::vector<int> image(static_cast<std::size_t>(n));
    std::iota(image.begin(), image.end(), 0);
    return Permutation(std::move(image));
}

Permutation Permutation::random(int n, std::mt19937_64& rng) {
    std::vector<int> image(static_cast<std::size_t>(n));
    std::iota(image.begin(), image.end(), 0);
    // Fisher-Yates with explicit bounded draws so the stream layout is fixed.
    for (int i = n - 1; i > 0; --i) {
        const std::uint64_t j = rng() % static_cast<std::uint64_t>(i + 1);
        std::swap(image[static_cast<std::size_t>(i)], image[static_cast<std::size_t>(j)]);
    }
    return Permutation(std::move(image));
}

Permutation Permutation::inverse() const {
    std::vector<int> inv(image_.size());
    for (std::size_t i = 0; i < image_.size(); ++i) {
        inv[static_cast<std::size_t>(image_[i])] = static_cast<int>(i);
    }
    return Permutation(std::move(inv));
}

Permutation Permutation::compose(const Permutation& a, const Permutation& b) {
    if (a.n() != b.n()) throw ValidationError("Permutation::compose: size mismatch");
    std::vector<int> image(static_cast<std::size_t>(a.n()));
    for (int i = 0; i < a.n(); ++i) image[static_cast<std::size_t>(i)] = a(b(i));
    return Permutation(std::move(image));
}

DenseTensor apply_permutation(const DenseTensor& t, const Permutation& pi) {
    if (pi.n() != t.n()) {
        throw ValidationError("apply_permutation: permutation size must match tensor n");
    }
    DenseTensor out(t.order(), t.n(), t.channels());
    const int k = t.order();
    const int n = t.n();
    const std::size_t ch = static_cast<std::size_t>(t.channels());
    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    const double* src = t.data();
    double* dst = out.data();
    for (std::size_t tup = 0; tup < t.tuple_count(); ++tup) {
        // Source tuple is the image of the current output tuple.
        std::size_t src_off = 0;
        for (int a = 0; a < k; ++a) {
            src_off = src_off * static_cast<std::size_t>(n) +
                      static_cast<std::size_t>(pi(idx[static_cast<std::size_t>(a)]));
        }
        for (std::size_t c = 0; c < ch; ++c) {
            dst[tup * ch + c] = src[src_off * ch + c];
        }
        // Odometer increment over the output tuple.
        for (int a = k - 1; a >= 0; --a) {
            if (++idx[static_cast<std::size_t>(a)] < n) break;
            idx[static_cast<std::size_t>(a)] = 0;
        }
    }
    return out;
}

}  // namespace grnf
