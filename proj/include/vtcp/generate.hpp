#pragma once

// Seeded instance generators.

#include "vtcp/registry.hpp"
#include "vtcp/search.hpp"
#include "vtcp/solvers.hpp"

#include <string>
#include <string_view>

namespace vtcp {

enum class GenerateKind { ZSemipositivePair, RandomDensePair, PaperExample };

inline GenerateKind parse_generate_kind(std::string_view s) {
    if (s == "z-semipositive-pair" || s == "z-semipositive")
        return GenerateKind::ZSemipositivePair;
    if (s == "random-dense-pair" || s == "random-dense")
        return GenerateKind::RandomDensePair;
    if (s == "paper-example")
        return GenerateKind::PaperExample;
    throw InvalidArgument("unknown generator kind '" + std::string(s) + "'");
}

namespace detail {

/// s·I minus nonnegative off-diagonal mass β·s per row, s in [1,2],
/// β in [0.1, 0.8]; then (A 1)_i = (1 - β_i) s_i > 0.
inline DenseTensor z_semipositive_tensor(std::size_t order, std::size_t dim, std::mt19937_64& rng) {
    DenseTensor a(order, dim);
    const std::size_t row = a.size() / dim;
    std::uniform_real_distribution<double> scale(1.0, 2.0), mass(0.1, 0.8), weight(0.0, 1.0);
    for (std::size_t i = 0; i < dim; ++i) {
        const double s = scale(rng);
        const double beta = mass(rng);
        const std::size_t diag = a.diagonal_position(i);
        std::vector<double> w(row, 0.0);
        double total = 0.0;
        for (std::size_t c = 0; c < row; ++c) {
            if (i * row + c == diag)
                continue;
            w[c] = weight(rng);
            total += w[c];
        }
        for (std::size_t c = 0; c < row; ++c) {
            const std::size_t f = i * row + c;
            if (f == diag)
                a.set_flat(f, s);
            else if (total > 0.0)
                a.set_flat(f, -beta * s * w[c] / total);
        }
    }
    return a;
}

} // namespace detail

/// Deterministic per (kind, order, dim, seed). paper-example ignores order,
/// dim and seed and looks `id` up in the registry.
inline VtcpInstance generate(GenerateKind kind, std::size_t order, std::size_t dim, std::uint64_t seed,
                             std::string_view id = {}) {
    if (kind == GenerateKind::PaperExample)
        return find_example(id).instance();
    if (order < 2 || dim < 1)
        throw InvalidArgument("generate: need order >= 2 and dim >= 1");
    auto rng = substream(seed, 0);
    if (kind == GenerateKind::ZSemipositivePair) {
        DenseTensor a1 = detail::z_semipositive_tensor(order, dim, rng);
        DenseTensor a2 = detail::z_semipositive_tensor(order, dim, rng);
        Vector q1 = uniform_vector(rng, dim, -2.0, -0.1);
        Vector q2 = uniform_vector(rng, dim, -2.0, -0.1);
        return VtcpInstance(TensorPair(std::move(a1), std::move(a2)), std::move(q1), std::move(q2));
    }
    const std::size_t size = detail::checked_pow(dim, order);
    DenseTensor a1(order, dim, uniform_vector(rng, size, -1.0, 1.0));
    DenseTensor a2(order, dim, uniform_vector(rng, size, -1.0, 1.0));
    Vector q1 = uniform_vector(rng, dim, -1.0, 1.0);
    Vector q2 = uniform_vector(rng, dim, -1.0, 1.0);
    return VtcpInstance(TensorPair(std::move(a1), std::move(a2)), std::move(q1), std::move(q2));
}

inline VtcpInstance generate(std::string_view kind, std::size_t order, std::size_t dim, std::uint64_t seed,
                             std::string_view id = {}) {
    return generate(parse_generate_kind(kind), order, dim, seed, id);
}

} // namespace vtcp
