#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cdq/bits.hpp"
#include "cdq/circuit.hpp"
#include "cdq/error.hpp"

namespace cdq {

using Z8 = std::uint8_t;

/// x -> Mx + b over Z2 with M invertible.
///
/// Row i of M is stored as a mask over input qubits (bit n-1-j is M[i][j]),
/// the offset as a mask over output qubits. Both use the basis-state
/// encoding from bits.hpp, so apply() works directly on state indices.
class AffineMap {
public:
    AffineMap() = default;

    /// Throws ValidationError if `rows` is singular or has stray bits.
    AffineMap(int n, std::vector<QubitMask> rows, QubitMask offset) : n_(n), rows_(std::move(rows)), offset_(offset) {
        if (n < 0 || n > kMaxMaskQubits) throw ValidationError("affine map dimension out of range");
        if (static_cast<int>(rows_.size()) != n) throw ValidationError("affine map needs exactly n rows");
        const QubitMask mask = full_mask(n);
        for (QubitMask r : rows_) {
            if (r & ~mask) throw ValidationError("affine row has bits beyond n");
        }
        if (offset_ & ~mask) throw ValidationError("affine offset has bits beyond n");
        if (rank(rows_, n) != n) throw ValidationError("affine matrix is not invertible over Z2");
    }

    static AffineMap identity(int n) {
        std::vector<QubitMask> rows(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) rows[static_cast<std::size_t>(i)] = qubit_bit(n, i);
        return unchecked(n, std::move(rows), 0);
    }

    int n() const noexcept { return n_; }
    const std::vector<QubitMask>& rows() const noexcept { return rows_; }
    QubitMask offset() const noexcept { return offset_; }
    bool entry(int i, int j) const noexcept { return test_qubit(rows_[static_cast<std::size_t>(i)], n_, j); }

    BasisState apply_linear(BasisState x) const noexcept {
        BasisState y = 0;
        for (int i = 0; i < n_; ++i) {
            if (parity(rows_[static_cast<std::size_t>(i)] & x)) y |= qubit_bit(n_, i);
        }
        return y;
    }

    BasisState apply(BasisState x) const noexcept { return apply_linear(x) ^ offset_; }

    bool is_identity() const noexcept { return *this == identity(n_); }
    bool is_linear() const noexcept { return offset_ == 0; }

    /// this ∘ first: apply `first`, then this map.
    AffineMap after(const AffineMap& first) const {
        if (first.n_ != n_) throw DimensionMismatch("composing affine maps of different dimension");
        std::vector<QubitMask> rows(static_cast<std::size_t>(n_), 0);
        for (int i = 0; i < n_; ++i) {
            for (int j = 0; j < n_; ++j) {
                if (entry(i, j)) rows[static_cast<std::size_t>(i)] ^= first.rows_[static_cast<std::size_t>(j)];
            }
        }
        return unchecked(n_, std::move(rows), apply(first.offset_));
    }

    AffineMap inverse() const {
        // Gauss-Jordan on [M | I].
        std::vector<QubitMask> a = rows_;
        std::vector<QubitMask> inv = identity(n_).rows_;
        for (int col = 0; col < n_; ++col) {
            int pivot = col;
            while (!test_qubit(a[static_cast<std::size_t>(pivot)], n_, col)) ++pivot;
            std::swap(a[static_cast<std::size_t>(pivot)], a[static_cast<std::size_t>(col)]);
            std::swap(inv[static_cast<std::size_t>(pivot)], inv[static_cast<std::size_t>(col)]);
            for (int r = 0; r < n_; ++r) {
                if (r != col && test_qubit(a[static_cast<std::size_t>(r)], n_, col)) {
                    a[static_cast<std::size_t>(r)] ^= a[static_cast<std::size_t>(col)];
                    inv[static_cast<std::size_t>(r)] ^= inv[static_cast<std::size_t>(col)];
                }
            }
        }
        AffineMap linear_inv = unchecked(n_, std::move(inv), 0);
        return unchecked(n_, linear_inv.rows_, linear_inv.apply_linear(offset_));
    }

    friend bool operator==(const AffineMap&, const AffineMap&) = default;

    static int rank(std::vector<QubitMask> rows, int n) {
        int r = 0;
        for (int col = 0; col < n && r < static_cast<int>(rows.size()); ++col) {
            auto it = std::find_if(rows.begin() + r, rows.end(), [&](QubitMask m) { return test_qubit(m, n, col); });
            if (it == rows.end()) continue;
            std::iter_swap(rows.begin() + r, it);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (static_cast<int>(i) != r && test_qubit(rows[i], n, col)) rows[i] ^= rows[static_cast<std::size_t>(r)];
            }
            ++r;
        }
        return r;
    }

private:
    static AffineMap unchecked(int n, std::vector<QubitMask> rows, QubitMask offset) {
        AffineMap m;
        m.n_ = n;
        m.rows_ = std::move(rows);
        m.offset_ = offset;
        return m;
    }

    int n_ = 0;
    std::vector<QubitMask> rows_;
    QubitMask offset_ = 0;
};

/// Z8 exponent of omega for every basis state, indexed by state.
struct PhaseTable {
    int n = 0;
    std::vector<Z8> values;

    static PhaseTable zero(int n) { return {n, std::vector<Z8>(std::size_t{1} << n, 0)}; }

    Z8 operator[](BasisState x) const { return values[x]; }
    bool is_zero() const {
        return std::all_of(values.begin(), values.end(), [](Z8 v) { return v == 0; });
    }

    friend bool operator==(const PhaseTable&, const PhaseTable&) = default;
};

/// W|x> = omega^{phase(x)} |affine(x)>.
struct ExactOperator {
    int n = 0;
    PhaseTable phase;
    AffineMap affine;

    static ExactOperator identity(int n) {
        check_table_size(n);
        return {n, PhaseTable::zero(n), AffineMap::identity(n)};
    }

    static void check_table_size(int n) {
        if (n < 0 || n > kMaxTableQubits) {
            throw ValidationError("exact semantics supports at most " + std::to_string(kMaxTableQubits) +
                                  " qubits, got " + std::to_string(n));
        }
    }

    friend bool operator==(const ExactOperator&, const ExactOperator&) = default;
};

// ---------------------------------------------------------------------------

namespace detail {

inline AffineMap cnot_map(int n, int control, int target) {
    auto rows = AffineMap::identity(n).rows();
    rows[static_cast<std::size_t>(target)] ^= qubit_bit(n, control);
    return AffineMap(n, std::move(rows), 0);
}

inline AffineMap swap_map(int n, int a, int b) {
    auto rows = AffineMap::identity(n).rows();
    std::swap(rows[static_cast<std::size_t>(a)], rows[static_cast<std::size_t>(b)]);
    return AffineMap(n, std::move(rows), 0);
}

/// Phase contributed by a diagonal gate on state x (0 for affine gates).
inline Z8 gate_phase(const Gate& g, int n, BasisState x) {
    switch (g.kind()) {
    case GateKind::Omega: return static_cast<Z8>(g.exponent() & 7);
    case GateKind::T:
    case GateKind::U:
    case GateKind::V: {
        QubitMask m = 0;
        for (int q : g.qubits()) m |= qubit_bit(n, q);
        return static_cast<Z8>(parity(m & x));
    }
    default: return 0;
    }
}

inline BasisState gate_action(const Gate& g, int n, BasisState x) {
    switch (g.kind()) {
    case GateKind::X: return x ^ qubit_bit(n, g.qubit(0));
    case GateKind::Cnot:
        return test_qubit(x, n, g.qubit(0)) ? x ^ qubit_bit(n, g.qubit(1)) : x;
    case GateKind::Swap: {
        const int a = g.qubit(0), b = g.qubit(1);
        if (test_qubit(x, n, a) != test_qubit(x, n, b)) x ^= qubit_bit(n, a) | qubit_bit(n, b);
        return x;
    }
    default: return x;
    }
}

inline void check_gate(const Gate& g, int n) {
    auto vs = validate(Circuit{n, {g}}, Mode::Dihedral);
    if (!vs.empty()) throw ValidationError(describe(vs));
}

} // namespace detail

inline ExactOperator gate_semantics(const Gate& g, int n) {
    ExactOperator::check_table_size(n);
    detail::check_gate(g, n);
    ExactOperator op = ExactOperator::identity(n);
    switch (g.kind()) {
    case GateKind::X: {
        op.affine = AffineMap(n, op.affine.rows(), qubit_bit(n, g.qubit(0)));
        break;
    }
    case GateKind::Cnot: op.affine = detail::cnot_map(n, g.qubit(0), g.qubit(1)); break;
    case GateKind::Swap: op.affine = detail::swap_map(n, g.qubit(0), g.qubit(1)); break;
    default:
        for (BasisState x = 0; x < op.phase.values.size(); ++x) op.phase.values[x] = detail::gate_phase(g, n, x);
        break;
    }
    return op;
}

/// second ∘ first.
inline ExactOperator compose(const ExactOperator& second, const ExactOperator& first) {
    if (second.n != first.n) throw DimensionMismatch("composing operators on different qubit counts");
    ExactOperator out{first.n, PhaseTable::zero(first.n), second.affine.after(first.affine)};
    for (BasisState x = 0; x < out.phase.values.size(); ++x) {
        out.phase.values[x] =
            static_cast<Z8>((first.phase[x] + second.phase[first.affine.apply(x)]) & 7);
    }
    return out;
}

/// Operator of a circuit. Tracks each basis state through the gates, which is
/// the left fold of compose() over gate_semantics() without materializing a
/// table per gate.
inline ExactOperator evaluate(const Circuit& c) {
    require_valid(c, Mode::Dihedral);
    ExactOperator::check_table_size(c.n);
    const int n = c.n;
    const std::size_t size = std::size_t{1} << n;
    std::vector<BasisState> image(size);
    PhaseTable phase = PhaseTable::zero(n);
    for (BasisState x = 0; x < size; ++x) image[x] = x;
    for (const Gate& g : c.gates) {
        if (g.is_diagonal()) {
            for (BasisState x = 0; x < size; ++x) {
                phase.values[x] = static_cast<Z8>((phase.values[x] + detail::gate_phase(g, n, image[x])) & 7);
            }
        } else {
            for (BasisState x = 0; x < size; ++x) image[x] = detail::gate_action(g, n, image[x]);
        }
    }
    // Read the affine map off the images of 0 and of each unit vector.
    const QubitMask offset = image[0];
    std::vector<QubitMask> rows(static_cast<std::size_t>(n), 0);
    for (int j = 0; j < n; ++j) {
        const QubitMask column = image[qubit_bit(n, j)] ^ offset;
        for (int i = 0; i < n; ++i) {
            if (test_qubit(column, n, i)) rows[static_cast<std::size_t>(i)] |= qubit_bit(n, j);
        }
    }
    return {n, std::move(phase), AffineMap(n, std::move(rows), offset)};
}

struct Action {
    Z8 phase;
    BasisState state;

    friend bool operator==(const Action&, const Action&) = default;
};

inline Action apply(const ExactOperator& op, BasisState x) { return {op.phase[x], op.affine.apply(x)}; }

inline ExactOperator dagger(const ExactOperator& op) {
    ExactOperator out{op.n, PhaseTable::zero(op.n), op.affine.inverse()};
    for (BasisState y = 0; y < out.phase.values.size(); ++y) {
        out.phase.values[y] = static_cast<Z8>((8 - op.phase[out.affine.apply(y)]) & 7);
    }
    return out;
}

inline bool equal(const ExactOperator& a, const ExactOperator& b) {
    if (a.n != b.n) throw DimensionMismatch("comparing operators on different qubit counts");
    return a == b;
}

inline bool is_diagonal(const ExactOperator& op) { return op.affine.is_identity(); }
inline bool is_affine(const ExactOperator& op) { return op.phase.is_zero(); }

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json affine_to_json(const AffineMap& f) {
    nlohmann::json rows = nlohmann::json::array();
    for (QubitMask r : f.rows()) rows.push_back(to_bitstring(r, f.n()));
    return {{"matrix", rows}, {"offset", to_bitstring(f.offset(), f.n())}};
}

inline nlohmann::json to_json(const ExactOperator& op) {
    nlohmann::json j;
    j["n"] = op.n;
    nlohmann::json phase = nlohmann::json::array();
    for (Z8 v : op.phase.values) phase.push_back(static_cast<int>(v));
    j["phase"] = std::move(phase);
    auto aff = affine_to_json(op.affine);
    j["matrix"] = aff["matrix"];
    j["offset"] = aff["offset"];
    return j;
}

inline ExactOperator operator_from_json(const nlohmann::json& j) {
    const int n = j.at("n").get<int>();
    ExactOperator::check_table_size(n);
    PhaseTable phase = PhaseTable::zero(n);
    const auto& values = j.at("phase");
    if (values.size() != phase.values.size()) throw ValidationError("phase table has the wrong length");
    for (std::size_t i = 0; i < values.size(); ++i) {
        const int v = values[i].get<int>();
        if (v < 0 || v > 7) throw ValidationError("phase entries must be in 0..7");
        phase.values[i] = static_cast<Z8>(v);
    }
    std::vector<QubitMask> rows;
    for (const auto& r : j.at("matrix")) {
        QubitMask m = 0;
        if (!from_bitstring(r.get<std::string>(), n, m)) throw ValidationError("bad matrix row");
        rows.push_back(m);
    }
    QubitMask offset = 0;
    if (!from_bitstring(j.at("offset").get<std::string>(), n, offset)) throw ValidationError("bad offset");
    return {n, std::move(phase), AffineMap(n, std::move(rows), offset)};
}

} // namespace cdq
