#include <gtest/gtest.h>

#include <set>

#include "cdq/normal_form.hpp"
#include "support/oracle.hpp"
#include "support/random_circuits.hpp"

using namespace cdq;

namespace {

std::vector<Gate> repeat(const Gate& g, int k) { return std::vector<Gate>(static_cast<std::size_t>(k), g); }

/// Every invertible linear map on n qubits.
std::vector<AffineMap> all_linear_maps(int n) {
    std::vector<AffineMap> out;
    const unsigned cells = static_cast<unsigned>(n * n);
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cells); ++bits) {
        std::vector<QubitMask> rows(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = static_cast<QubitMask>((bits >> (i * n)) & full_mask(n));
        if (AffineMap::rank(rows, n) == n) out.emplace_back(n, rows, 0);
    }
    return out;
}

} // namespace

TEST(SynthDiagonal, Zero) { EXPECT_TRUE(synth_diagonal(CanonicalDiagonal::zero(3), Mode::Dihedral).gates.empty()); }

TEST(SynthDiagonal, Ccz) {
    PhaseTable ccz = PhaseTable::zero(3);
    ccz.values[7] = 4;
    const Circuit c = synth_diagonal(canonicalize(ccz), Mode::Dihedral);
    std::vector<Gate> expect{Gate::t(0), Gate::t(1), Gate::t(2)};
    for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
        auto b = repeat(Gate::u(i, j), 3);
        expect.insert(expect.end(), b.begin(), b.end());
    }
    expect.push_back(Gate::v(0, 1, 2));
    EXPECT_EQ(c.gates, expect);
    EXPECT_EQ(evaluate(c).phase, ccz);
}

TEST(SynthDiagonal, ScalarFirst) {
    CanonicalDiagonal d = CanonicalDiagonal::zero(1);
    d.a0 = 2;
    d.a = {1};
    EXPECT_EQ(synth_diagonal(d, Mode::Dihedral).gates, (std::vector<Gate>{Gate::omega(2), Gate::t(0)}));
    EXPECT_THROW(synth_diagonal(d, Mode::CnotT), ValidationError);
}

TEST(SynthAffine, Identity) { EXPECT_TRUE(synth_affine(AffineMap::identity(4), Mode::Dihedral).gates.empty()); }

TEST(SynthAffine, Complement) {
    EXPECT_EQ(synth_affine(AffineMap(1, {1}, 1), Mode::Dihedral).gates, std::vector<Gate>{Gate::x(0)});
    EXPECT_THROW(synth_affine(AffineMap(1, {1}, 1), Mode::CnotT), ValidationError);
}

TEST(SynthAffine, WorkedExample) {
    // x1 x2 x3 -> (not(x2 ^ x3)) x1 (x1 ^ x2)
    const AffineMap f(3, {0b011, 0b100, 0b110}, 0b100);
    const Circuit c = synth_affine(f, Mode::Dihedral);
    const ExactOperator op = evaluate(c);
    EXPECT_EQ(op.affine, f);
    EXPECT_TRUE(op.phase.is_zero());
    EXPECT_TRUE(shape_violations(c, Mode::Dihedral).empty());
    for (BasisState x = 0; x < 8; ++x) {
        const int x1 = (x >> 2) & 1, x2 = (x >> 1) & 1, x3 = x & 1;
        const BasisState y = static_cast<BasisState>(((1 ^ x2 ^ x3) << 2) | (x1 << 1) | (x1 ^ x2));
        EXPECT_EQ(op.affine.apply(x), y);
    }
}

TEST(SynthAffine, BijectiveOntoShapedCircuits) {
    const std::size_t expected[] = {0, 1, 6, 168, 20160};
    for (int n = 1; n <= 4; ++n) {
        std::set<std::vector<Gate>> seen;
        for (const AffineMap& f : all_linear_maps(n)) {
            const Circuit c = synth_affine(f, Mode::CnotT);
            ASSERT_EQ(evaluate(c).affine, f);
            ASSERT_TRUE(shape_violations(c, Mode::CnotT).empty()) << print(c);
            seen.insert(c.gates);
        }
        EXPECT_EQ(seen.size(), expected[n]) << "n = " << n;
    }
}

TEST(SynthAffine, WithOffsetsOnThreeQubits) {
    std::set<std::vector<Gate>> seen;
    for (const AffineMap& lin : all_linear_maps(3)) {
        for (QubitMask off = 0; off < 8; ++off) {
            const AffineMap f(3, lin.rows(), off);
            const Circuit c = synth_affine(f, Mode::Dihedral);
            ASSERT_EQ(evaluate(c).affine, f);
            seen.insert(c.gates);
        }
    }
    EXPECT_EQ(seen.size(), 1344u);
}

TEST(SynthAffine, LadderCount) {
    // The ladder peeling qubit k takes 2^k (2^(k+1) - 1) forms.
    for (int k = 1; k <= 3; ++k) {
        std::set<std::vector<Gate>> ladders;
        for (const AffineMap& f : all_linear_maps(k + 1)) ladders.insert(detail::peel_ladder(f, k));
        EXPECT_EQ(ladders.size(), (std::size_t{1} << k) * ((std::size_t{1} << (k + 1)) - 1));
    }
}

TEST(Normalize, NineTs) {
    EXPECT_EQ(normalize(Circuit{1, repeat(Gate::t(0), 9)}, Mode::Dihedral), (Circuit{1, {Gate::t(0)}}));
}

TEST(Normalize, CnotSquared) {
    EXPECT_TRUE(normalize(Circuit{2, {Gate::cnot(0, 1), Gate::cnot(0, 1)}}, Mode::Dihedral).gates.empty());
}

TEST(Normalize, XTX) {
    // The two X gates cancel, leaving omega T^7.
    std::vector<Gate> expect{Gate::omega(1)};
    auto ts = repeat(Gate::t(0), 7);
    expect.insert(expect.end(), ts.begin(), ts.end());
    EXPECT_EQ(normalize(Circuit{1, {Gate::x(0), Gate::t(0), Gate::x(0)}}, Mode::Dihedral).gates, expect);
    // With a single X the affine part survives.
    expect.push_back(Gate::x(0));
    EXPECT_EQ(normalize(Circuit{1, {Gate::x(0), Gate::t(0)}}, Mode::Dihedral).gates, expect);
}

TEST(Normalize, RejectsInvalidInput) {
    EXPECT_THROW(normalize(Circuit{1, {Gate::x(0)}}, Mode::CnotT), ValidationError);
}

class NormalizeProperties : public ::testing::TestWithParam<Mode> {};

TEST_P(NormalizeProperties, PreservesSemanticsAndShape) {
    const Mode mode = GetParam();
    gen::Rng rng(31);
    for (int i = 0; i < 400; ++i) {
        const Circuit c = gen::random_circuit(rng, 4, 40, mode);
        const Circuit nf = normalize(c, mode);
        ASSERT_EQ(evaluate(nf), evaluate(c)) << print(c);
        ASSERT_TRUE(oracle::close(oracle::unitary(nf), oracle::unitary(c)));
        ASSERT_TRUE(shape_violations(nf, mode).empty()) << print(nf);
        ASSERT_EQ(normalize(nf, mode), nf);
        ASSERT_TRUE(validate(nf, mode).empty());
    }
}

TEST_P(NormalizeProperties, EquivalentCircuitsShareANormalForm) {
    const Mode mode = GetParam();
    gen::Rng rng(32);
    for (int i = 0; i < 200; ++i) {
        const Circuit c = gen::random_circuit(rng, 4, 25, mode);
        const Circuit v = gen::equivalent_variant(rng, c, mode);
        ASSERT_TRUE(equivalent(c, v));
        ASSERT_EQ(normalize(c, mode), normalize(v, mode)) << print(c) << print(v);
    }
}

INSTANTIATE_TEST_SUITE_P(Modes, NormalizeProperties, ::testing::Values(Mode::Dihedral, Mode::CnotT),
                         [](const auto& info) { return std::string(mode_name(info.param)); });

TEST(Equivalent, Examples) {
    EXPECT_FALSE(equivalent(Circuit{2, {Gate::t(0)}}, Circuit{2, {Gate::t(1)}}));
    EXPECT_THROW(equivalent(Circuit{1, {}}, Circuit{2, {}}), DimensionMismatch);
}

TEST(ShapeViolations, FlagsMalformedCircuits) {
    EXPECT_FALSE(shape_violations(Circuit{2, {Gate::t(1), Gate::t(0)}}, Mode::Dihedral).empty());
    EXPECT_FALSE(shape_violations(Circuit{1, repeat(Gate::t(0), 8)}, Mode::Dihedral).empty());
    EXPECT_FALSE(shape_violations(Circuit{2, repeat(Gate::u(0, 1), 4)}, Mode::Dihedral).empty());
    EXPECT_FALSE(shape_violations(Circuit{2, {Gate::x(0), Gate::t(0)}}, Mode::Dihedral).empty());
    EXPECT_FALSE(shape_violations(Circuit{2, {Gate::cnot(0, 1), Gate::cnot(0, 1)}}, Mode::Dihedral).empty());
    EXPECT_FALSE(shape_violations(Circuit{1, {Gate::omega(1)}}, Mode::CnotT).empty());
    EXPECT_FALSE(shape_violations(Circuit{2, {Gate::swap(0, 1)}}, Mode::Dihedral).empty());
    EXPECT_TRUE(shape_violations(Circuit{2, {Gate::omega(3), Gate::t(0), Gate::u(0, 1), Gate::cnot(1, 0), Gate::x(1)}},
                                 Mode::Dihedral)
                    .empty());
}
