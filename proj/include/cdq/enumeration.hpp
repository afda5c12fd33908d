#pragma once

#include <cstdint>
#include <deque>
#include <limits>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <nlohmann/json.hpp>

#include "cdq/circuit.hpp"
#include "cdq/error.hpp"
#include "cdq/phase_poly.hpp"
#include "cdq/semantics.hpp"

namespace cdq {

using BigInt = boost::multiprecision::cpp_int;

/// Which set is being counted.
enum class CountKind : std::uint8_t { Dihedral, CnotT, DiagonalOnly, AffineOnly };

inline const char* count_kind_name(CountKind k) noexcept {
    switch (k) {
    case CountKind::Dihedral: return "dihedral";
    case CountKind::CnotT: return "cnott";
    case CountKind::DiagonalOnly: return "diagonal";
    case CountKind::AffineOnly: return "affine";
    }
    return "?";
}

inline CountKind count_kind(Mode mode) noexcept { return mode == Mode::Dihedral ? CountKind::Dihedral : CountKind::CnotT; }

inline constexpr std::uint64_t kDefaultClosureCap = 100'000'000;

namespace detail {

inline BigInt choose(int n, int k) {
    if (k < 0 || k > n) return 0;
    BigInt r = 1;
    for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
    return r;
}

inline BigInt pow2(const BigInt& e) { return BigInt(1) << static_cast<unsigned>(e); }

/// |GL(n, 2)| = prod_{i=1..n} (2^n - 2^{i-1}).
inline BigInt general_linear_order(int n) {
    BigInt r = 1;
    const BigInt full = BigInt(1) << n;
    for (int i = 1; i <= n; ++i) r *= full - (BigInt(1) << (i - 1));
    return r;
}

} // namespace detail

/// Closed-form size of the selected set of operators on n qubits.
inline BigInt order_formula(int n, CountKind kind) {
    if (n < 1) throw ValidationError("qubit count must be at least 1");
    using detail::choose;
    const BigInt gl = detail::general_linear_order(n);
    switch (kind) {
    case CountKind::Dihedral:
        return detail::pow2(3 + 4 * choose(n, 1) + 2 * choose(n, 2) + choose(n, 3)) * gl;
    case CountKind::CnotT:
        return detail::pow2(3 * choose(n, 1) + 2 * choose(n, 2) + choose(n, 3)) * gl;
    case CountKind::DiagonalOnly:
        return detail::pow2(3 + 3 * choose(n, 1) + 2 * choose(n, 2) + choose(n, 3));
    case CountKind::AffineOnly:
        return (BigInt(1) << n) * gl;
    }
    return 0;
}

inline BigInt order_formula(int n, Mode mode) { return order_formula(n, count_kind(mode)); }

/// Byte string that identifies an operator: phase table, matrix rows, offset.
inline std::string encode(const ExactOperator& op) {
    std::string key(op.phase.values.begin(), op.phase.values.end());
    auto put = [&](QubitMask m) {
        for (int b = 0; b < 4; ++b) key.push_back(static_cast<char>((m >> (8 * b)) & 0xff));
    };
    for (QubitMask r : op.affine.rows()) put(r);
    put(op.affine.offset());
    return key;
}

/// Size of the group generated by every gate the mode permits on n wires,
/// by breadth-first closure.
inline std::uint64_t enumerate_closure(int n, Mode mode, std::uint64_t cap = kDefaultClosureCap) {
    if (n < 1) throw ValidationError("qubit count must be at least 1");
    const BigInt expected = order_formula(n, mode);
    if (expected > cap) {
        throw CapExceeded("closure on " + std::to_string(n) + " qubits would hold " + expected.str() +
                          " operators, above the cap of " + std::to_string(cap));
    }
    ExactOperator::check_table_size(n);

    std::vector<ExactOperator> generators;
    auto add = [&](const Gate& g) {
        if (allowed_in(g.kind(), mode)) generators.push_back(gate_semantics(g, n));
    };
    add(Gate::omega(1));
    for (int a = 0; a < n; ++a) {
        add(Gate::x(a));
        add(Gate::t(a));
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            add(Gate::cnot(a, b));
            if (a < b) add(Gate::swap(a, b));
        }
    }

    std::unordered_set<std::string> seen;
    std::deque<ExactOperator> frontier;
    const ExactOperator id = ExactOperator::identity(n);
    seen.insert(encode(id));
    frontier.push_back(id);
    while (!frontier.empty()) {
        const ExactOperator cur = std::move(frontier.front());
        frontier.pop_front();
        for (const auto& g : generators) {
            ExactOperator next = compose(g, cur);
            if (seen.insert(encode(next)).second) {
                if (seen.size() > cap) throw CapExceeded("closure exceeded the cap of " + std::to_string(cap));
                frontier.push_back(std::move(next));
            }
        }
    }
    return seen.size();
}

/// Distinct phase tables over the whole canonical coefficient space.
inline std::uint64_t enumerate_diagonal(int n, std::uint64_t cap = kDefaultClosureCap) {
    if (n < 1) throw ValidationError("qubit count must be at least 1");
    const BigInt space = order_formula(n, CountKind::DiagonalOnly);
    if (space > cap) throw CapExceeded("diagonal coefficient space " + space.str() + " exceeds the cap");
    ExactOperator::check_table_size(n);

    CanonicalDiagonal d = CanonicalDiagonal::zero(n);
    // Mixed-radix odometer over (a0, a, b, c) with radices 8, 8, 4, 2.
    std::vector<std::uint8_t*> digits;
    std::vector<std::uint8_t> radix;
    digits.push_back(&d.a0);
    radix.push_back(8);
    for (auto& v : d.a) digits.push_back(&v), radix.push_back(8);
    for (auto& v : d.b) digits.push_back(&v), radix.push_back(4);
    for (auto& v : d.c) digits.push_back(&v), radix.push_back(2);

    std::unordered_set<std::string> seen;
    while (true) {
        const PhaseTable t = canonical_to_table(d);
        seen.emplace(t.values.begin(), t.values.end());
        std::size_t i = 0;
        while (i < digits.size() && ++*digits[i] == radix[i]) *digits[i++] = 0;
        if (i == digits.size()) break;
    }
    return seen.size();
}

/// Invertible (matrix, offset) pairs over Z2, by direct enumeration.
inline std::uint64_t enumerate_affine(int n) {
    if (n < 1 || n > 4) throw ValidationError("affine enumeration supports 1 to 4 qubits");
    const std::uint64_t cells = static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n);
    const QubitMask row_mask = full_mask(n);
    std::uint64_t count = 0;
    for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << cells); ++bits) {
        std::vector<QubitMask> rows(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = static_cast<QubitMask>((bits >> (i * n)) & row_mask);
        if (AffineMap::rank(rows, n) != n) continue;
        for (QubitMask off = 0; off <= row_mask; ++off) ++count;
    }
    return count;
}

struct CountReport {
    int n = 0;
    CountKind kind = CountKind::Dihedral;
    BigInt formula;
    std::optional<BigInt> enumerated;

    std::optional<bool> match() const {
        if (!enumerated) return std::nullopt;
        return *enumerated == formula;
    }
};

inline CountReport count(int n, CountKind kind, bool enumerate, std::uint64_t cap = kDefaultClosureCap) {
    CountReport r{n, kind, order_formula(n, kind), std::nullopt};
    if (!enumerate) return r;
    switch (kind) {
    case CountKind::Dihedral: r.enumerated = enumerate_closure(n, Mode::Dihedral, cap); break;
    case CountKind::CnotT: r.enumerated = enumerate_closure(n, Mode::CnotT, cap); break;
    case CountKind::DiagonalOnly: r.enumerated = enumerate_diagonal(n, cap); break;
    case CountKind::AffineOnly: r.enumerated = enumerate_affine(n); break;
    }
    return r;
}

/// Integers that fit in 64 bits are JSON numbers; larger ones are strings.
inline nlohmann::json big_to_json(const BigInt& v) {
    if (v >= 0 && v <= std::numeric_limits<std::uint64_t>::max()) return v.convert_to<std::uint64_t>();
    return v.str();
}

inline nlohmann::json to_json(const CountReport& r) {
    nlohmann::json j;
    j["n"] = r.n;
    j["mode"] = count_kind_name(r.kind);
    j["formula"] = big_to_json(r.formula);
    j["enumerated"] = r.enumerated ? big_to_json(*r.enumerated) : nlohmann::json();
    j["match"] = r.match() ? nlohmann::json(*r.match()) : nlohmann::json();
    return j;
}

} // namespace cdq
