#pragma once

// Independent reference computations for the tests: direct multi-index
// enumeration instead of the library's mode-by-mode contractions, and
// central finite differences for derivatives.

#include "vtcp/vtcp.hpp"

#include <random>

namespace vtcp::test {

inline DenseTensor random_tensor(std::mt19937_64& rng, std::size_t order, std::size_t dim, double lo = -1.0,
                                 double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    std::vector<double> e(detail::checked_pow(dim, order));
    for (double& v : e)
        v = u(rng);
    return DenseTensor(order, dim, std::move(e));
}

inline Vector random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
    std::uniform_real_distribution<double> u(lo, hi);
    Vector v(n);
    for (double& x : v)
        x = u(rng);
    return v;
}

/// Σ a_{i i2..im} x_{i2}..x_{im} by enumerating every multi-index.
inline Vector naive_power(const DenseTensor& a, const Vector& x) {
    Vector out(a.dim(), 0.0);
    for (std::size_t f = 0; f < a.size(); ++f) {
        MultiIndex idx = a.multi_index(f);
        double p = a[f];
        for (std::size_t k = 1; k < idx.size(); ++k)
            p *= x[idx[k]];
        out[idx[0]] += p;
    }
    return out;
}

/// Shao product by the defining sum over (i2..im) for every output index.
inline DenseTensor naive_shao(const DenseTensor& a, const DenseTensor& b) {
    const std::size_t n = a.dim(), m = a.order(), k = b.order();
    const std::size_t out_order = (m - 1) * (k - 1) + 1;
    DenseTensor c(out_order, n);
    for (std::size_t f = 0; f < c.size(); ++f) {
        MultiIndex out = c.multi_index(f);
        double sum = 0.0;
        MultiIndex inner(m - 1, 0);
        do {
            MultiIndex ai{out[0]};
            ai.insert(ai.end(), inner.begin(), inner.end());
            double term = a.at(ai);
            for (std::size_t j = 0; j + 1 < m && term != 0.0; ++j) {
                MultiIndex bi{inner[j]};
                for (std::size_t s = 0; s + 1 < k; ++s)
                    bi.push_back(out[1 + j * (k - 1) + s]);
                term *= b.at(bi);
            }
            sum += term;
        } while (detail::next_index(inner, n));
        c.set_flat(f, sum);
    }
    return c;
}

template <class F>
Matrix central_difference(F&& f, const Vector& x, double h = 1e-5) {
    const std::size_t n = x.size();
    Matrix j(static_cast<Eigen::Index>(f(x).size()), static_cast<Eigen::Index>(n));
    for (std::size_t c = 0; c < n; ++c) {
        Vector xp = x, xm = x;
        xp[c] += h;
        xm[c] -= h;
        const Vector fp = f(xp), fm = f(xm);
        for (std::size_t r = 0; r < fp.size(); ++r)
            j(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = (fp[r] - fm[r]) / (2.0 * h);
    }
    return j;
}

/// max |J - Jfd| / max(1, max |Jfd|)
inline double relative_error(const Matrix& j, const Matrix& ref) {
    return (j - ref).cwiseAbs().maxCoeff() / std::max(1.0, ref.cwiseAbs().maxCoeff());
}

inline TensorPair example_pair(std::string_view id) { return find_example(id).pair; }

} // namespace vtcp::test
