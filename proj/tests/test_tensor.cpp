#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace vtcp;
using namespace vtcp::test;

namespace {

void expect_vec(const Vector& got, const Vector& want, double tol = 1e-12) {
    ASSERT_EQ(got.size(), want.size());
    for (std::size_t i = 0; i < got.size(); ++i)
        EXPECT_NEAR(got[i], want[i], tol) << "component " << i;
}

} // namespace

// --- storage ---------------------------------------------------------------

TEST(DenseTensor, RowMajorLayout) {
    DenseTensor a(3, 2);
    a.set({1, 0, 1}, 5.0);
    EXPECT_EQ(a.flat_index(std::vector<std::size_t>{1, 0, 1}), 5u);
    EXPECT_EQ(a[5], 5.0);
    EXPECT_EQ(a.multi_index(5), (MultiIndex{1, 0, 1}));
    EXPECT_EQ(a.size(), 8u);
}

TEST(DenseTensor, RejectsWrongLengthAndNonFinite) {
    EXPECT_THROW(DenseTensor(3, 2, std::vector<double>(7, 0.0)), DimensionError);
    EXPECT_THROW(DenseTensor(2, 2, {1.0, NAN, 0.0, 0.0}), DomainError);
    EXPECT_THROW(DenseTensor(2, 2, {1.0, INFINITY, 0.0, 0.0}), DomainError);
    EXPECT_THROW(DenseTensor(0, 2), DimensionError);
    EXPECT_THROW(DenseTensor(2, 0), DimensionError);
    DenseTensor a(2, 2);
    EXPECT_THROW(a.set_flat(0, NAN), DomainError);
}

TEST(DenseTensor, MultiIndexOutOfRange) {
    DenseTensor a(2, 2);
    EXPECT_THROW((void)a.at({2, 0}), DimensionError);
    EXPECT_THROW((void)a.at({0}), DimensionError);
}

TEST(DenseTensor, Arithmetic) {
    std::mt19937_64 rng(1);
    const DenseTensor a = random_tensor(rng, 3, 2), b = random_tensor(rng, 3, 2);
    const DenseTensor c = a + b - a;
    for (std::size_t f = 0; f < c.size(); ++f)
        EXPECT_NEAR(c[f], b[f], 1e-15);
    EXPECT_THROW(a + DenseTensor(3, 3), DimensionError);
    EXPECT_EQ((-a)[3], -a[3]);
}

TEST(SymTensor, DistinctCountAndRoundTrip) {
    EXPECT_EQ(SymTensor::distinct_count(3, 2), 4u);
    EXPECT_EQ(SymTensor::distinct_count(2, 3), 6u);
    EXPECT_EQ(SymTensor::distinct_count(3, 3), 10u);
    std::mt19937_64 rng(2);
    for (std::size_t p : {1u, 2u, 3u})
        for (std::size_t n : {1u, 2u, 3u}) {
            const SymTensor z(p, n, random_vector(rng, SymTensor::distinct_count(p, n)));
            const DenseTensor d = z.expand();
            EXPECT_TRUE(is_symmetric(d));
            const SymTensor back = SymTensor::symmetrize(d);
            ASSERT_EQ(back.order(), p);
            for (std::size_t k = 0; k < z.distinct_entries().size(); ++k)
                EXPECT_NEAR(back.distinct_entries()[k], z.distinct_entries()[k], 1e-15);
        }
}

TEST(SymTensor, PositionMatchesStorageOrder) {
    const auto idx = SymTensor::sorted_indices(3, 3);
    SymTensor z(3, 3);
    for (std::size_t k = 0; k < idx.size(); ++k)
        EXPECT_EQ(z.position(idx[k]), k);
    EXPECT_EQ(z.position(std::vector<std::size_t>{2, 0, 1}), z.position(std::vector<std::size_t>{0, 1, 2}));
}

TEST(SymTensor, OuterPower) {
    const SymTensor z = SymTensor::outer_power(Vector{2.0, 3.0}, 2);
    EXPECT_EQ(Vector(z.distinct_entries().begin(), z.distinct_entries().end()), (Vector{4.0, 6.0, 9.0}));
}

// --- power_apply -------------------------------------------------------------

TEST(PowerApply, Example32PrintedValues) {
    const TensorPair p = example_pair("3.2");
    expect_vec(power_apply(p.a1(), Vector{-1, -1}), {-1, -2}, 0.0);
    expect_vec(power_apply(p.a2(), Vector{-1, -1}), {-5, -3}, 0.0);
}

TEST(PowerApply, Example42PrintedValues) {
    const TensorPair p = example_pair("4.2");
    expect_vec(power_apply(p.a1(), Vector{1, 2}), {1, 3}, 0.0);
    expect_vec(power_apply(p.a2(), Vector{1, 2}), {1, 1}, 0.0);
}

TEST(PowerApply, ZeroVectorGivesZero) {
    std::mt19937_64 rng(3);
    const DenseTensor a = random_tensor(rng, 4, 3);
    expect_vec(power_apply(a, Vector(3, 0.0)), Vector(3, 0.0), 0.0);
}

TEST(PowerApply, MatchesClosedFormsOfTheExamples) {
    // Closed forms printed alongside each entry table, evaluated by hand.
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector x = random_vector(rng, 2, -2, 2);
        const double a = x[0], b = x[1];
        const TensorPair p31 = example_pair("3.1");
        expect_vec(power_apply(p31.a1(), x), {-a * a + 3 * a * b, a * a - 3 * a * b + b * b});
        expect_vec(power_apply(p31.a2(), x), {3 * a * b, 2 * a * a - 3 * a * b + b * b});
        const TensorPair p32 = example_pair("3.2");
        expect_vec(power_apply(p32.a1(), x), {a * a * a, a * a * b + b * b * b});
        expect_vec(power_apply(p32.a2(), x), {a * a * a + 4 * a * b * b, b * b * b + 2 * a * a * b});
        const TensorPair p33 = example_pair("3.3");
        expect_vec(power_apply(p33.a1(), x), {b * b, a * a + b * b});
        expect_vec(power_apply(p33.a2(), x), {b * b - a * b, -a * a - 2 * a * b - b * b});
        const TensorPair p35 = example_pair("3.5");
        // Entry table: row 1 of A1 is [[1,0],[0,0]], so the first entry is x1^2.
        expect_vec(power_apply(p35.a1(), x), {a * a, a * a + b * b});
        expect_vec(power_apply(p35.a2(), x), {a * b, a * a + 3 * a * b + b * b});
        const TensorPair p36 = example_pair("3.6");
        expect_vec(power_apply(p36.a1(), x), {a * a * a, a * a * b + b * b * b});
        expect_vec(power_apply(p36.a2(), x), {a * a * a, b * b * b});
        const TensorPair p37 = example_pair("3.7");
        expect_vec(power_apply(p37.a1(), x), {a * a * b, a * a * a + b * b * b});
        expect_vec(power_apply(p37.a2(), x), {a * a * b, a * a * a + b * b * b});
        const TensorPair p42 = example_pair("4.2");
        expect_vec(power_apply(p42.a1(), x), {a * a, -a * a + b * b});
        expect_vec(power_apply(p42.a2(), x), {a * a, -a * a - a * b + b * b});
    }
}

TEST(PowerApply, AgreesWithDirectEnumeration) {
    std::mt19937_64 rng(5);
    for (std::size_t m : {2u, 3u, 4u, 5u})
        for (std::size_t n : {1u, 2u, 3u, 4u}) {
            const DenseTensor a = random_tensor(rng, m, n);
            const Vector x = random_vector(rng, n);
            expect_vec(power_apply(a, x), naive_power(a, x), 1e-12);
        }
}

TEST(PowerApply, Errors) {
    EXPECT_THROW(power_apply(DenseTensor(3, 2), Vector{1, 2, 3}), DimensionError);
    EXPECT_THROW(power_apply(DenseTensor(1, 2), Vector{1, 2}), DimensionError);
}

TEST(PowerApply, Homogeneity) {
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t m = 2 + trial % 3, n = 1 + trial % 3;
        const DenseTensor a = random_tensor(rng, m, n);
        const Vector x = random_vector(rng, n);
        const double t = std::uniform_real_distribution<double>(-3, 3)(rng);
        const Vector lhs = power_apply(a, scaled(t, x));
        const Vector rhs = scaled(std::pow(t, static_cast<double>(m - 1)), power_apply(a, x));
        expect_vec(lhs, rhs, 1e-11);
    }
}

TEST(PowerApply, LeftDistributivity) {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const DenseTensor a1 = random_tensor(rng, 3, 3), a2 = random_tensor(rng, 3, 3);
        const Vector x = random_vector(rng, 3);
        expect_vec(power_apply(a1 + a2, x), axpy(1.0, power_apply(a1, x), power_apply(a2, x)), 1e-12);
    }
}

// --- power_jacobian ------------------------------------------------------------

TEST(PowerJacobian, UnitTensorIsDiagonal) {
    const Vector x{1.5, -2.0, 0.5};
    for (std::size_t m : {2u, 3u, 4u}) {
        const Matrix j = power_jacobian(unit_tensor(m, 3), x);
        for (Eigen::Index r = 0; r < 3; ++r)
            for (Eigen::Index c = 0; c < 3; ++c) {
                const double want =
                    r == c ? static_cast<double>(m - 1) * std::pow(x[static_cast<std::size_t>(r)], static_cast<double>(m - 2))
                           : 0.0;
                EXPECT_NEAR(j(r, c), want, 1e-14);
            }
    }
}

TEST(PowerJacobian, Example31AtOnes) {
    // d/dx of (-x1^2 + 3x1x2, x1^2 - 3x1x2 + x2^2) at (1,1).
    const Matrix j = power_jacobian(example_pair("3.1").a1(), Vector{1, 1});
    EXPECT_DOUBLE_EQ(j(0, 0), 1.0);
    EXPECT_DOUBLE_EQ(j(0, 1), 3.0);
    EXPECT_DOUBLE_EQ(j(1, 0), -1.0);
    EXPECT_DOUBLE_EQ(j(1, 1), -1.0);
}

TEST(PowerJacobian, ZeroTensor) {
    EXPECT_EQ(power_jacobian(zero_tensor(4, 2), Vector{1, 2}).cwiseAbs().maxCoeff(), 0.0);
}

TEST(PowerJacobian, MatchesCentralDifferences) {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t m = 3 + trial % 2, n = 2 + (trial / 2) % 2;
        const DenseTensor a = random_tensor(rng, m, n);
        const Vector x = random_vector(rng, n);
        const Matrix ref = central_difference([&](const Vector& v) { return power_apply(a, v); }, x);
        EXPECT_LE(relative_error(power_jacobian(a, x), ref), 1e-6);
    }
}

// --- shao_product --------------------------------------------------------------

TEST(ShaoProduct, VectorOperandIsPowerApply) {
    std::mt19937_64 rng(9);
    const DenseTensor a = random_tensor(rng, 4, 3);
    const Vector x = random_vector(rng, 3);
    const DenseTensor c = shao_product(a, DenseTensor::from_vector(x));
    EXPECT_EQ(c.order(), 1u);
    expect_vec(Vector(c.entries().begin(), c.entries().end()), power_apply(a, x));
}

TEST(ShaoProduct, IdentityMatrixIsRightNeutral) {
    std::mt19937_64 rng(10);
    const DenseTensor a = random_tensor(rng, 3, 2);
    const DenseTensor c = shao_product(a, unit_tensor(2, 2));
    EXPECT_EQ(c.order(), 3u);
    EXPECT_EQ(c, a);
}

TEST(ShaoProduct, OutputOrder) {
    EXPECT_EQ(shao_product(DenseTensor(3, 2), DenseTensor(2, 2)).order(), 3u);
    EXPECT_EQ(shao_product(DenseTensor(3, 2), DenseTensor(3, 2)).order(), 5u);
    EXPECT_EQ(shao_product(DenseTensor(4, 2), DenseTensor(3, 2)).order(), 7u);
    EXPECT_THROW(shao_product(DenseTensor(3, 2), DenseTensor(2, 3)), DimensionError);
}

TEST(ShaoProduct, AgreesWithDefiningSum) {
    std::mt19937_64 rng(11);
    for (std::size_t m : {2u, 3u, 4u})
        for (std::size_t k : {1u, 2u, 3u}) {
            const DenseTensor a = random_tensor(rng, m, 2), b = random_tensor(rng, k, 2);
            const DenseTensor c = shao_product(a, b), ref = naive_shao(a, b);
            ASSERT_EQ(c.order(), ref.order());
            for (std::size_t f = 0; f < c.size(); ++f)
                EXPECT_NEAR(c[f], ref[f], 1e-12);
        }
}

TEST(ShaoProduct, AssociativityOnVectors) {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 100; ++trial) {
        const DenseTensor a = random_tensor(rng, 2 + trial % 3, 2), b = random_tensor(rng, 2 + (trial / 3) % 2, 2);
        const DenseTensor x = DenseTensor::from_vector(random_vector(rng, 2));
        const DenseTensor lhs = shao_product(shao_product(a, b), x);
        const DenseTensor rhs = shao_product(a, shao_product(b, x));
        for (std::size_t f = 0; f < lhs.size(); ++f)
            EXPECT_NEAR(lhs[f], rhs[f], 1e-12);
    }
}

TEST(ShaoProduct, AssociativityOnTensors) {
    std::mt19937_64 rng(13);
    const DenseTensor a = random_tensor(rng, 3, 2), b = random_tensor(rng, 2, 2), c = random_tensor(rng, 3, 2);
    const DenseTensor lhs = shao_product(shao_product(a, b), c);
    const DenseTensor rhs = shao_product(a, shao_product(b, c));
    ASSERT_EQ(lhs.order(), rhs.order());
    for (std::size_t f = 0; f < lhs.size(); ++f)
        EXPECT_NEAR(lhs[f], rhs[f], 1e-12);
}

// --- sym_apply -----------------------------------------------------------------

TEST(SymApply, Example32StatedZ) {
    const TensorPair p = example_pair("3.2");
    const SymTensor z(3, 2, {0, -1, 0, 1});
    const Vector g = sym_apply(p.a1(), z), f = sym_apply(p.a2(), z);
    for (std::size_t i = 0; i < 2; ++i)
        EXPECT_EQ(g[i] * f[i], 0.0);
}

TEST(SymApply, Example34ClosedForm) {
    // (x1 + x3, x1) and (x1 + x3, -x3) for Z = [[x1, x2], [x2, x3]].
    const TensorPair p = example_pair("3.4");
    std::mt19937_64 rng(14);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector v = random_vector(rng, 3);
        const SymTensor z(2, 2, v);
        expect_vec(sym_apply(p.a1(), z), {v[0] + v[2], v[0]});
        expect_vec(sym_apply(p.a2(), z), {v[0] + v[2], -v[2]});
    }
    const SymTensor z(2, 2, {1, 0, 1});
    expect_vec(sym_apply(p.a1(), z), {2, 1}, 0.0);
    expect_vec(sym_apply(p.a2(), z), {2, -1}, 0.0);
}

TEST(SymApply, ZeroAndErrors) {
    std::mt19937_64 rng(15);
    const DenseTensor a = random_tensor(rng, 3, 2);
    expect_vec(sym_apply(a, SymTensor(2, 2)), {0, 0}, 0.0);
    EXPECT_THROW(sym_apply(a, SymTensor(3, 2)), DimensionError);
    EXPECT_THROW(sym_apply(a, SymTensor(2, 3)), DimensionError);
}

TEST(SymApply, EqualsDenseContraction) {
    std::mt19937_64 rng(16);
    for (std::size_t m : {2u, 3u, 4u}) {
        const DenseTensor a = random_tensor(rng, m, 3);
        const SymTensor z(m - 1, 3, random_vector(rng, SymTensor::distinct_count(m - 1, 3)));
        const DenseTensor d = z.expand();
        Vector ref(3, 0.0);
        for (std::size_t f = 0; f < a.size(); ++f)
            ref[f / d.size()] += a[f] * d[f % d.size()];
        expect_vec(sym_apply(a, z), ref);
    }
}

TEST(SymApply, OuterPowerRecoversPowerApply) {
    std::mt19937_64 rng(17);
    const DenseTensor a = random_tensor(rng, 4, 2);
    const Vector x = random_vector(rng, 2);
    expect_vec(sym_apply(a, SymTensor::outer_power(x, 3)), power_apply(a, x));
}

// --- unit tensor, entrywise power, lattice, symmetry ----------------------------

TEST(UnitTensor, Basics) {
    const DenseTensor i3 = unit_tensor(2, 3);
    for (std::size_t r = 0; r < 3; ++r)
        for (std::size_t c = 0; c < 3; ++c)
            EXPECT_EQ(i3.at({r, c}), r == c ? 1.0 : 0.0);
    expect_vec(power_apply(unit_tensor(3, 2), Vector{2, 3}), {4, 9}, 0.0);
    for (std::size_t m : {1u, 2u, 3u, 4u}) {
        const DenseTensor u = unit_tensor(m, 3);
        EXPECT_EQ(std::count_if(u.entries().begin(), u.entries().end(), [](double v) { return v != 0.0; }), 3);
    }
    const DenseTensor ones = unit_tensor(1, 3);
    expect_vec(Vector(ones.entries().begin(), ones.entries().end()), {1, 1, 1}, 0.0);
}

TEST(EntrywisePower, Roots) {
    expect_vec(entrywise_power(Vector{8, 27}, Rational(1, 3)), {2, 3}, 1e-15);
    expect_vec(entrywise_power(Vector{-8, 1}, Rational(1, 3)), {-2, 1}, 1e-15);
    EXPECT_THROW(entrywise_power(Vector{-1, 1}, Rational(1, 2)), DomainError);
    expect_vec(entrywise_power(Vector{4, 9}, Rational(3, 2)), {8, 27}, 1e-12);
    expect_vec(entrywise_power(Vector{-32}, Rational(2, 10)), {-2}, 1e-14); // 1/5 after reduction
    EXPECT_THROW(entrywise_power(Vector{0.0}, Rational(-1, 1)), DomainError);
    EXPECT_THROW(Rational(1, 0), DomainError);
}

TEST(LatticeOps, Basics) {
    expect_vec(vmin(Vector{1, 2}, Vector{2, 1}), {1, 1}, 0.0);
    expect_vec(vmax(Vector{1, 2}, Vector{2, 1}), {2, 2}, 0.0);
    const Vector x{-3, 5};
    expect_vec(axpy(-1.0, neg_part(x), pos_part(x)), x, 0.0);
    EXPECT_THROW(vmin(Vector{1}, Vector{1, 2}), DimensionError);
    std::mt19937_64 rng(18);
    for (int trial = 0; trial < 20; ++trial) {
        const Vector a = random_vector(rng, 4), b = random_vector(rng, 4);
        expect_vec(vmin(a, b), scaled(-1.0, vmax(scaled(-1.0, a), scaled(-1.0, b))), 0.0);
    }
}

TEST(IsSymmetric, Cases) {
    EXPECT_TRUE(is_symmetric(unit_tensor(3, 2)));
    const DenseTensor a1 = example_pair("3.1").a1();
    EXPECT_EQ(a1.at({0, 0, 1}), 3.0);
    EXPECT_EQ(a1.at({0, 1, 0}), 0.0);
    EXPECT_FALSE(is_symmetric(a1));
    EXPECT_TRUE(is_symmetric(DenseTensor::from_vector(Vector{1, -2, 3})));
}
