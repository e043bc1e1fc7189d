#pragma once

// Dense and symmetric tensor storage.
//
// A DenseTensor of order m and dimension n stores n^m reals in row-major
// multi-index order: index (i1,...,im) (0-based) lives at
// sum_k i_k * n^(m-1-k). Order 1 tensors are vectors, order 2 are matrices.

#include "vtcp/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <string>
#include <vector>

namespace vtcp {

using Vector = std::vector<double>;
using MultiIndex = std::vector<std::size_t>;

namespace detail {

inline std::size_t checked_pow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t k = 0; k < exp; ++k) {
        if (base != 0 && r > static_cast<std::size_t>(-1) / base)
            throw DimensionError("tensor size overflows size_t");
        r *= base;
    }
    return r;
}

inline void require_finite(std::span<const double> values, const char* what) {
    for (double v : values)
        if (!std::isfinite(v))
            throw DomainError(std::string(what) + ": non-finite entry");
}

/// Advance a row-major multi-index over [0,n)^len; returns false after the last one.
inline bool next_index(MultiIndex& idx, std::size_t n) {
    for (std::size_t k = idx.size(); k-- > 0;) {
        if (++idx[k] < n)
            return true;
        idx[k] = 0;
    }
    return false;
}

/// Advance a non-decreasing multi-index over [0,n)^len in lexicographic order.
inline bool next_sorted_index(MultiIndex& idx, std::size_t n) {
    for (std::size_t k = idx.size(); k-- > 0;) {
        if (idx[k] + 1 < n) {
            ++idx[k];
            for (std::size_t j = k + 1; j < idx.size(); ++j)
                idx[j] = idx[k];
            return true;
        }
    }
    return false;
}

inline std::size_t binomial(std::size_t n, std::size_t k) {
    if (k > n)
        return 0;
    k = std::min(k, n - k);
    std::size_t r = 1;
    for (std::size_t i = 1; i <= k; ++i)
        r = r * (n - k + i) / i;
    return r;
}

} // namespace detail

class DenseTensor {
public:
    DenseTensor() = default;

    /// Zero tensor.
    DenseTensor(std::size_t order, std::size_t dim)
        : order_(order), dim_(dim), entries_(checked_size(order, dim), 0.0) {}

    DenseTensor(std::size_t order, std::size_t dim, std::vector<double> entries)
        : order_(order), dim_(dim), entries_(std::move(entries)) {
        std::size_t expected = checked_size(order, dim);
        if (entries_.size() != expected)
            throw DimensionError("tensor of order " + std::to_string(order) + " and dimension " +
                                 std::to_string(dim) + " needs " + std::to_string(expected) +
                                 " entries, got " + std::to_string(entries_.size()));
        detail::require_finite(entries_, "DenseTensor");
    }

    static DenseTensor from_vector(std::span<const double> x) {
        return DenseTensor(1, x.size(), Vector(x.begin(), x.end()));
    }

    [[nodiscard]] std::size_t order() const noexcept { return order_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::size_t size() const noexcept { return entries_.size(); }
    [[nodiscard]] std::span<const double> entries() const noexcept { return entries_; }

    [[nodiscard]] std::size_t flat_index(std::span<const std::size_t> idx) const {
        if (idx.size() != order_)
            throw DimensionError("multi-index length does not match tensor order");
        std::size_t f = 0;
        for (std::size_t k : idx) {
            if (k >= dim_)
                throw DimensionError("multi-index component out of range");
            f = f * dim_ + k;
        }
        return f;
    }

    [[nodiscard]] MultiIndex multi_index(std::size_t flat) const {
        MultiIndex idx(order_);
        for (std::size_t k = order_; k-- > 0;) {
            idx[k] = flat % dim_;
            flat /= dim_;
        }
        return idx;
    }

    [[nodiscard]] double operator[](std::size_t flat) const { return entries_[flat]; }
    [[nodiscard]] double at(std::span<const std::size_t> idx) const { return entries_[flat_index(idx)]; }
    [[nodiscard]] double at(std::initializer_list<std::size_t> idx) const {
        return at(std::span<const std::size_t>(idx.begin(), idx.size()));
    }

    void set(std::span<const std::size_t> idx, double value) { set_flat(flat_index(idx), value); }
    void set(std::initializer_list<std::size_t> idx, double value) {
        set(std::span<const std::size_t>(idx.begin(), idx.size()), value);
    }
    void set_flat(std::size_t flat, double value) {
        if (!std::isfinite(value))
            throw DomainError("DenseTensor: non-finite entry");
        entries_.at(flat) = value;
    }

    /// Entry sits on the principal diagonal (all indices equal).
    [[nodiscard]] bool is_diagonal_position(std::size_t flat) const {
        if (order_ <= 1)
            return true;
        std::size_t first = flat % dim_;
        for (std::size_t k = 1; k < order_; ++k) {
            flat /= dim_;
            if (flat % dim_ != first)
                return false;
        }
        return true;
    }

    /// Flat index of a_{i...i}.
    [[nodiscard]] std::size_t diagonal_position(std::size_t i) const {
        std::size_t f = 0;
        for (std::size_t k = 0; k < order_; ++k)
            f = f * dim_ + i;
        return f;
    }

    [[nodiscard]] Vector diagonal() const {
        Vector d(dim_);
        for (std::size_t i = 0; i < dim_; ++i)
            d[i] = entries_[diagonal_position(i)];
        return d;
    }

    DenseTensor& operator+=(const DenseTensor& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < entries_.size(); ++k)
            entries_[k] += o.entries_[k];
        return *this;
    }
    DenseTensor& operator-=(const DenseTensor& o) {
        require_same_shape(o);
        for (std::size_t k = 0; k < entries_.size(); ++k)
            entries_[k] -= o.entries_[k];
        return *this;
    }
    DenseTensor& operator*=(double s) {
        for (double& e : entries_)
            e *= s;
        detail::require_finite(entries_, "DenseTensor scaling");
        return *this;
    }

    friend DenseTensor operator+(DenseTensor a, const DenseTensor& b) { return a += b; }
    friend DenseTensor operator-(DenseTensor a, const DenseTensor& b) { return a -= b; }
    friend DenseTensor operator*(double s, DenseTensor a) { return a *= s; }
    friend DenseTensor operator-(DenseTensor a) { return a *= -1.0; }

    friend bool operator==(const DenseTensor&, const DenseTensor&) = default;

    [[nodiscard]] bool same_shape(const DenseTensor& o) const noexcept {
        return order_ == o.order_ && dim_ == o.dim_;
    }

private:
    static std::size_t checked_size(std::size_t order, std::size_t dim) {
        if (order < 1)
            throw DimensionError("tensor order must be at least 1");
        if (dim < 1)
            throw DimensionError("tensor dimension must be at least 1");
        return detail::checked_pow(dim, order);
    }

    void require_same_shape(const DenseTensor& o) const {
        if (!same_shape(o))
            throw DimensionError("tensor shapes differ");
    }

    std::size_t order_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> entries_;
};

/// Symmetric tensor stored by its distinct entries, one per non-decreasing
/// multi-index in lexicographic order; C(n+p-1, p) values.
class SymTensor {
public:
    SymTensor() = default;

    SymTensor(std::size_t order, std::size_t dim)
        : order_(order), dim_(dim), values_(distinct_count(order, dim), 0.0) {}

    SymTensor(std::size_t order, std::size_t dim, std::vector<double> distinct)
        : order_(order), dim_(dim), values_(std::move(distinct)) {
        if (values_.size() != distinct_count(order, dim))
            throw DimensionError("symmetric tensor needs " + std::to_string(distinct_count(order, dim)) +
                                 " distinct entries, got " + std::to_string(values_.size()));
        detail::require_finite(values_, "SymTensor");
    }

    static std::size_t distinct_count(std::size_t order, std::size_t dim) {
        if (order < 1 || dim < 1)
            throw DimensionError("symmetric tensor needs order and dimension >= 1");
        return detail::binomial(dim + order - 1, order);
    }

    /// All non-decreasing multi-indices in storage order.
    static std::vector<MultiIndex> sorted_indices(std::size_t order, std::size_t dim) {
        std::vector<MultiIndex> out;
        MultiIndex idx(order, 0);
        do {
            out.push_back(idx);
        } while (detail::next_sorted_index(idx, dim));
        return out;
    }

    /// Average of all entries sharing a sorted index; the identity on symmetric input.
    static SymTensor symmetrize(const DenseTensor& a) {
        SymTensor s(a.order(), a.dim());
        std::vector<std::size_t> counts(s.values_.size(), 0);
        MultiIndex idx(a.order(), 0);
        std::size_t flat = 0;
        do {
            std::size_t pos = s.position(idx);
            s.values_[pos] += a[flat];
            ++counts[pos];
            ++flat;
        } while (detail::next_index(idx, a.dim()));
        for (std::size_t k = 0; k < counts.size(); ++k)
            s.values_[k] /= static_cast<double>(counts[k]);
        return s;
    }

    /// x ⊗ x ⊗ ... ⊗ x (p factors).
    static SymTensor outer_power(std::span<const double> x, std::size_t p) {
        SymTensor s(p, x.size());
        auto indices = sorted_indices(p, x.size());
        for (std::size_t k = 0; k < indices.size(); ++k) {
            double v = 1.0;
            for (std::size_t i : indices[k])
                v *= x[i];
            s.values_[k] = v;
        }
        detail::require_finite(s.values_, "SymTensor::outer_power");
        return s;
    }

    [[nodiscard]] std::size_t order() const noexcept { return order_; }
    [[nodiscard]] std::size_t dim() const noexcept { return dim_; }
    [[nodiscard]] std::span<const double> distinct_entries() const noexcept { return values_; }

    /// Storage position of the (any-order) multi-index.
    [[nodiscard]] std::size_t position(std::span<const std::size_t> idx) const {
        if (idx.size() != order_)
            throw DimensionError("multi-index length does not match tensor order");
        MultiIndex sorted(idx.begin(), idx.end());
        std::sort(sorted.begin(), sorted.end());
        // Rank of a sorted multi-index among all sorted multi-indices.
        std::size_t pos = 0;
        std::size_t lo = 0;
        for (std::size_t k = 0; k < order_; ++k) {
            if (sorted[k] >= dim_)
                throw DimensionError("multi-index component out of range");
            std::size_t remaining = order_ - k - 1;
            for (std::size_t v = lo; v < sorted[k]; ++v)
                pos += detail::binomial(dim_ - v + remaining - 1, remaining);
            lo = sorted[k];
        }
        return pos;
    }

    [[nodiscard]] double at(std::span<const std::size_t> idx) const { return values_[position(idx)]; }

    [[nodiscard]] Vector diagonal() const {
        Vector d(dim_);
        for (std::size_t i = 0; i < dim_; ++i) {
            MultiIndex idx(order_, i);
            d[i] = values_[position(idx)];
        }
        return d;
    }

    [[nodiscard]] DenseTensor expand() const {
        DenseTensor a(order_, dim_);
        MultiIndex idx(order_, 0);
        std::size_t flat = 0;
        do {
            a.set_flat(flat++, values_[position(idx)]);
        } while (detail::next_index(idx, dim_));
        return a;
    }

    friend bool operator==(const SymTensor&, const SymTensor&) = default;

private:
    std::size_t order_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> values_;
};

} // namespace vtcp
