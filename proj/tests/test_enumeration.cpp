#include <gtest/gtest.h>

#include "cdq/enumeration.hpp"

using namespace cdq;

namespace {

std::uint64_t choose(int n, int k) {
    std::uint64_t r = 1;
    for (int i = 0; i < k; ++i) r = r * static_cast<std::uint64_t>(n - i) / static_cast<std::uint64_t>(i + 1);
    return k > n ? 0 : r;
}

std::uint64_t ipow(std::uint64_t b, std::uint64_t e) {
    std::uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// Product forms: diagonal forms 8 * 8^C(n,1) * 4^C(n,2) * 2^C(n,3), affine forms 2^n * |GL(n,2)|.
std::uint64_t gl(int n) {
    std::uint64_t r = 1;
    for (int i = 1; i <= n; ++i) r *= (std::uint64_t{1} << n) - (std::uint64_t{1} << (i - 1));
    return r;
}
std::uint64_t diag(int n) { return 8 * ipow(8, choose(n, 1)) * ipow(4, choose(n, 2)) * ipow(2, choose(n, 3)); }
std::uint64_t affine(int n) { return (std::uint64_t{1} << n) * gl(n); }

} // namespace

TEST(OrderFormula, Examples) {
    EXPECT_EQ(order_formula(1, Mode::Dihedral), 128);
    EXPECT_EQ(order_formula(2, Mode::Dihedral), 49152);
    EXPECT_EQ(order_formula(1, Mode::CnotT), 8);
    EXPECT_EQ(order_formula(2, Mode::CnotT), 1536);
    EXPECT_EQ(order_formula(3, CountKind::DiagonalOnly), 524288);
    EXPECT_EQ(order_formula(3, CountKind::AffineOnly), 1344);
}

TEST(OrderFormula, AgreesWithProductForms) {
    for (int n = 1; n <= 4; ++n) {
        EXPECT_EQ(order_formula(n, CountKind::DiagonalOnly), diag(n));
        EXPECT_EQ(order_formula(n, CountKind::AffineOnly), affine(n));
        EXPECT_EQ(order_formula(n, CountKind::Dihedral), diag(n) * affine(n));
        // Scalar-free diagonal part, linear affine part.
        EXPECT_EQ(order_formula(n, CountKind::CnotT), diag(n) / 8 * gl(n));
    }
}

TEST(OrderFormula, LargeValuesAreExact) {
    const BigInt v = order_formula(20, Mode::Dihedral);
    EXPECT_GT(v, BigInt(std::numeric_limits<std::uint64_t>::max()));
    EXPECT_EQ(v % order_formula(20, CountKind::AffineOnly), 0);
    EXPECT_THROW(order_formula(0, Mode::Dihedral), ValidationError);
}

TEST(EnumerateClosure, SmallGroups) {
    EXPECT_EQ(enumerate_closure(1, Mode::Dihedral), 128u);
    EXPECT_EQ(enumerate_closure(1, Mode::CnotT), 8u);
    EXPECT_EQ(enumerate_closure(2, Mode::CnotT), 1536u);
    EXPECT_EQ(enumerate_closure(2, Mode::Dihedral), 49152u);
}

TEST(EnumerateClosure, CapIsEnforced) {
    EXPECT_THROW(enumerate_closure(3, Mode::Dihedral), CapExceeded);
    EXPECT_THROW(enumerate_closure(2, Mode::Dihedral, 1000), CapExceeded);
}

TEST(EnumerateDiagonal, MatchesFormula) {
    EXPECT_EQ(enumerate_diagonal(1), 64u);
    EXPECT_EQ(enumerate_diagonal(2), 2048u);
    EXPECT_EQ(enumerate_diagonal(3), 524288u);
}

TEST(EnumerateAffine, MatchesFormula) {
    EXPECT_EQ(enumerate_affine(1), 2u);
    EXPECT_EQ(enumerate_affine(2), 24u);
    EXPECT_EQ(enumerate_affine(3), 1344u);
    EXPECT_EQ(enumerate_affine(4), affine(4));
    EXPECT_THROW(enumerate_affine(5), ValidationError);
}

TEST(CountReport, Json) {
    const auto j = to_json(count(2, CountKind::Dihedral, true));
    EXPECT_EQ(j.at("formula"), 49152);
    EXPECT_EQ(j.at("enumerated"), 49152);
    EXPECT_EQ(j.at("match"), true);
    EXPECT_EQ(j.at("mode"), "dihedral");
    const auto k = to_json(count(30, CountKind::Dihedral, false));
    EXPECT_TRUE(k.at("formula").is_string());
    EXPECT_TRUE(k.at("enumerated").is_null());
    EXPECT_TRUE(k.at("match").is_null());
}
