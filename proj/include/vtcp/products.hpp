#pragma once

// Contractions, generalized products and elementwise helpers on dense tensors.

#include "vtcp/tensor.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <numeric>
#include <span>

namespace vtcp {

using Matrix = Eigen::MatrixXd;

namespace detail {

inline void require_dim(const DenseTensor& a, std::size_t n, const char* what) {
    if (a.dim() != n)
        throw DimensionError(std::string(what) + ": tensor dimension " + std::to_string(a.dim()) +
                             " does not match vector dimension " + std::to_string(n));
}

inline void require_same_dim(std::span<const double> x, std::span<const double> y, const char* what) {
    if (x.size() != y.size())
        throw DimensionError(std::string(what) + ": vector dimensions differ");
}

} // namespace detail

/// (A x^{m-1})_i = sum over i2..im of a_{i i2...im} x_{i2} ... x_{im}.
/// Computed by contracting the last mode m-1 times.
inline Vector power_apply(const DenseTensor& a, std::span<const double> x) {
    if (a.order() < 2)
        throw DimensionError("power_apply: tensor order must be at least 2");
    const std::size_t n = a.dim();
    detail::require_dim(a, x.size(), "power_apply");
    Vector buf(a.entries().begin(), a.entries().end());
    std::size_t len = buf.size();
    for (std::size_t mode = 1; mode < a.order(); ++mode) {
        len /= n;
        for (std::size_t j = 0; j < len; ++j) {
            double s = 0.0;
            const double* row = buf.data() + j * n;
            for (std::size_t l = 0; l < n; ++l)
                s += row[l] * x[l];
            buf[j] = s;
        }
    }
    buf.resize(n);
    return buf;
}

/// Exact Jacobian of x -> A x^{m-1}: entry (i,j) sums, over every trailing slot
/// k fixed to j, a_{i i2..im} times the product of the other trailing x's.
inline Matrix power_jacobian(const DenseTensor& a, std::span<const double> x) {
    if (a.order() < 2)
        throw DimensionError("power_jacobian: tensor order must be at least 2");
    const std::size_t n = a.dim();
    detail::require_dim(a, x.size(), "power_jacobian");
    const std::size_t tail = a.order() - 1;
    Matrix jac = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    MultiIndex idx(a.order(), 0);
    Vector prefix(tail + 1), suffix(tail + 1);
    std::size_t flat = 0;
    do {
        const double v = a[flat++];
        if (v == 0.0)
            continue;
        prefix[0] = 1.0;
        for (std::size_t k = 0; k < tail; ++k)
            prefix[k + 1] = prefix[k] * x[idx[k + 1]];
        suffix[tail] = 1.0;
        for (std::size_t k = tail; k-- > 0;)
            suffix[k] = suffix[k + 1] * x[idx[k + 1]];
        const auto i = static_cast<Eigen::Index>(idx[0]);
        for (std::size_t k = 0; k < tail; ++k)
            jac(i, static_cast<Eigen::Index>(idx[k + 1])) += v * prefix[k] * suffix[k + 1];
    } while (detail::next_index(idx, n));
    return jac;
}

/// Generalized product A·B of an order-m tensor with an order-k tensor; the
/// result has order (m-1)(k-1)+1 and entries
///   C[i, α1..α_{m-1}] = Σ a_{i i2..im} b_{i2 α1} ... b_{im α_{m-1}},
/// each αj a (k-1)-multi-index. For k = 1 this is A x^{m-1}.
inline DenseTensor shao_product(const DenseTensor& a, const DenseTensor& b) {
    if (a.order() < 2)
        throw DimensionError("shao_product: left operand order must be at least 2");
    if (a.dim() != b.dim())
        throw DimensionError("shao_product: dimensions differ");
    const std::size_t n = a.dim();
    const std::size_t m = a.order();
    const std::size_t k = b.order();
    const std::size_t block = detail::checked_pow(n, k - 1); // entries per b row
    const std::size_t out_order = (m - 1) * (k - 1) + 1;
    (void)detail::checked_pow(block, m - 1); // overflow guard on the result size

    // Contract mode by mode: after processing the last r trailing modes the
    // work array has shape [n^{m-r}] x [block^r].
    std::vector<double> work(a.entries().begin(), a.entries().end());
    std::size_t left = a.size();    // n^{m-r}
    std::size_t right = 1;          // block^r
    for (std::size_t r = 0; r + 1 < m; ++r) {
        const std::size_t new_left = left / n;
        std::vector<double> next(new_left * block * right, 0.0);
        for (std::size_t p = 0; p < new_left; ++p)
            for (std::size_t l = 0; l < n; ++l) {
                const double* src = work.data() + (p * n + l) * right;
                const double* brow = b.entries().data() + l * block;
                double* dst = next.data() + p * block * right;
                for (std::size_t beta = 0; beta < block; ++beta) {
                    const double bv = brow[beta];
                    if (bv == 0.0)
                        continue;
                    double* d = dst + beta * right;
                    for (std::size_t q = 0; q < right; ++q)
                        d[q] += bv * src[q];
                }
            }
        work = std::move(next);
        left = new_left;
        right *= block;
    }
    return DenseTensor(out_order, n, std::move(work));
}

/// (A Z)_i = Σ a_{i i2..im} z_{i2..im} for a symmetric Z of order m-1.
inline Vector sym_apply(const DenseTensor& a, const SymTensor& z) {
    if (a.order() < 2 || z.order() + 1 != a.order())
        throw DimensionError("sym_apply: symmetric tensor order must be tensor order - 1");
    if (z.dim() != a.dim())
        throw DimensionError("sym_apply: dimensions differ");
    const DenseTensor dense = z.expand();
    const std::size_t n = a.dim();
    const std::size_t cols = dense.size();
    Vector out(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t c = 0; c < cols; ++c)
            s += a[i * cols + c] * dense[c];
        out[i] = s;
    }
    return out;
}

/// Delta tensor: 1 where all indices agree, else 0. Order 2 is the identity
/// matrix; order 1 is the all-ones vector.
inline DenseTensor unit_tensor(std::size_t order, std::size_t dim) {
    DenseTensor u(order, dim);
    for (std::size_t i = 0; i < dim; ++i)
        u.set_flat(u.diagonal_position(i), 1.0);
    return u;
}

inline DenseTensor zero_tensor(std::size_t order, std::size_t dim) { return DenseTensor(order, dim); }

/// Rational exponent num/den, den > 0, kept in lowest terms.
struct Rational {
    std::int64_t num = 1;
    std::int64_t den = 1;

    constexpr Rational(std::int64_t n = 1, std::int64_t d = 1) : num(n), den(d) {
        if (den == 0)
            throw DomainError("Rational: zero denominator");
        if (den < 0) {
            num = -num;
            den = -den;
        }
        auto g = std::gcd(num < 0 ? -num : num, den);
        if (g > 1) {
            num /= g;
            den /= g;
        }
    }
};

/// Real r-th power per component: (x_i^{1/den})^{num}, with odd roots of
/// negatives taken as negative reals.
inline Vector entrywise_power(std::span<const double> x, Rational r) {
    Vector out(x.size());
    const bool even_root = r.den % 2 == 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double v = x[i];
        if (v < 0.0 && even_root)
            throw DomainError("entrywise_power: even root of negative entry " + std::to_string(v));
        if (v == 0.0 && r.num < 0)
            throw DomainError("entrywise_power: negative power of zero");
        double root = 0.0;
        if (r.den == 1)
            root = v;
        else if (r.den == 2)
            root = std::sqrt(v);
        else if (r.den == 3)
            root = std::cbrt(v);
        else
            root = std::copysign(std::pow(std::abs(v), 1.0 / static_cast<double>(r.den)), v);
        out[i] = std::pow(root, static_cast<double>(r.num));
    }
    return out;
}

inline Vector vmin(std::span<const double> x, std::span<const double> y) {
    detail::require_same_dim(x, y, "vmin");
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = std::min(x[i], y[i]);
    return out;
}

inline Vector vmax(std::span<const double> x, std::span<const double> y) {
    detail::require_same_dim(x, y, "vmax");
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = std::max(x[i], y[i]);
    return out;
}

inline Vector pos_part(std::span<const double> x) {
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = std::max(x[i], 0.0);
    return out;
}

inline Vector neg_part(std::span<const double> x) {
    Vector out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] = std::max(-x[i], 0.0);
    return out;
}

inline bool is_symmetric(const DenseTensor& a, double tol = 0.0) {
    if (a.order() <= 1)
        return true;
    MultiIndex idx(a.order(), 0);
    std::size_t flat = 0;
    do {
        MultiIndex sorted = idx;
        std::sort(sorted.begin(), sorted.end());
        if (std::abs(a[flat] - a.at(sorted)) > tol)
            return false;
        ++flat;
    } while (detail::next_index(idx, a.dim()));
    return true;
}

// Small vector helpers used throughout.

inline double inf_norm(std::span<const double> x) {
    double m = 0.0;
    for (double v : x)
        m = std::max(m, std::abs(v));
    return m;
}

inline double two_norm(std::span<const double> x) {
    double s = 0.0;
    for (double v : x)
        s += v * v;
    return std::sqrt(s);
}

inline Vector axpy(double alpha, std::span<const double> x, std::span<const double> y) {
    detail::require_same_dim(x, y, "axpy");
    Vector out(y.begin(), y.end());
    for (std::size_t i = 0; i < x.size(); ++i)
        out[i] += alpha * x[i];
    return out;
}

inline Vector scaled(double alpha, std::span<const double> x) {
    Vector out(x.begin(), x.end());
    for (double& v : out)
        v *= alpha;
    return out;
}

inline double dist_inf(std::span<const double> x, std::span<const double> y) {
    detail::require_same_dim(x, y, "dist_inf");
    double m = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        m = std::max(m, std::abs(x[i] - y[i]));
    return m;
}

} // namespace vtcp
