#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cdq/circuit.hpp"
#include "cdq/phase_poly.hpp"
#include "cdq/semantics.hpp"

namespace cdq {

/// The semantic normal form D·A of an operator; synthesized into a circuit
/// by to_circuit().
struct NormalForm {
    CanonicalDiagonal diagonal;
    AffineMap affine;
    Mode mode = Mode::Dihedral;

    friend bool operator==(const NormalForm&, const NormalForm&) = default;
};

/// omega^a0, then T blocks by qubit, U blocks by pair, V blocks by triple,
/// pairs and triples in lexicographic order.
inline Circuit synth_diagonal(const CanonicalDiagonal& d, Mode mode) {
    if (mode == Mode::CnotT && d.a0 != 0) throw ValidationError("cnott diagonal normal forms carry no scalar");
    const int n = d.n;
    Circuit out{n, {}};
    auto repeat = [&](const Gate& g, int times) { out.gates.insert(out.gates.end(), static_cast<std::size_t>(times), g); };
    if (d.a0 != 0) out.gates.push_back(Gate::omega(d.a0));
    for (int i = 0; i < n; ++i) repeat(Gate::t(i), d.a[static_cast<std::size_t>(i)]);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) repeat(Gate::u(i, j), d.pair(i, j));
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) repeat(Gate::v(i, j, k), d.triple(i, j, k));
        }
    }
    return out;
}

namespace detail {

inline AffineMap linear_part(const AffineMap& f) { return AffineMap(f.n(), f.rows(), 0); }

inline AffineMap map_of(const std::vector<Gate>& gates, int n) {
    AffineMap m = AffineMap::identity(n);
    for (const Gate& g : gates) {
        if (g.kind() == GateKind::Cnot) m = cnot_map(n, g.qubit(0), g.qubit(1)).after(m);
    }
    return m;
}

/// The ladder that peels qubit k off the linear map `m`, whose support is
/// qubits 0..k. With r = row k of m and c = column k of m^-1 (r·c = 1):
///   pivot:      CNOT(p, k) when c_k = 0, p the largest index with c_p = 1
///   ascending:  CNOT(k, j) for j = k-1 down to 0 wherever the pivoted c has a 1
///   descending: CNOT(j, k) for j = 0 up to k-1 wherever r·(pivot·asc)^-1 has a 1
/// The ladder L satisfies L c = e_k and row_k(L) = r, so m·L^-1 is the
/// identity on qubit k. (r, c) determines L, and every pair with r·c = 1
/// occurs, which is 2^k (2^{k+1} - 1) ladders on k+1 qubits.
inline std::vector<Gate> peel_ladder(const AffineMap& m, int k) {
    const int n = m.n();
    const AffineMap inv = m.inverse();
    std::vector<Gate> ladder;
    std::vector<int> c(static_cast<std::size_t>(k + 1));
    for (int j = 0; j <= k; ++j) c[static_cast<std::size_t>(j)] = inv.entry(j, k);

    if (!c[static_cast<std::size_t>(k)]) {
        int p = k - 1;
        while (!c[static_cast<std::size_t>(p)]) --p;
        ladder.push_back(Gate::cnot(p, k));
    }
    for (int j = k - 1; j >= 0; --j) {
        if (c[static_cast<std::size_t>(j)]) ladder.push_back(Gate::cnot(k, j));
    }
    const AffineMap residual = m.after(map_of(ladder, n).inverse());
    for (int j = 0; j < k; ++j) {
        if (residual.entry(k, j)) ladder.push_back(Gate::cnot(j, k));
    }
    return ladder;
}

} // namespace detail

/// Affine normal form: ladders on qubits {0..n-1}, {0..n-2}, ..., {0,1}, then
/// one X per complemented output qubit.
inline Circuit synth_affine(const AffineMap& f, Mode mode) {
    if (mode == Mode::CnotT && !f.is_linear()) throw ValidationError("cnott normal forms are linear");
    const int n = f.n();
    Circuit out{n, {}};
    AffineMap residual = detail::linear_part(f);
    for (int k = n - 1; k >= 1; --k) {
        auto ladder = detail::peel_ladder(residual, k);
        residual = residual.after(detail::map_of(ladder, n).inverse());
        out.gates.insert(out.gates.end(), ladder.begin(), ladder.end());
    }
    for (int q = 0; q < n; ++q) {
        if (test_qubit(f.offset(), n, q)) out.gates.push_back(Gate::x(q));
    }
    return out;
}

inline NormalForm normal_form_of(const ExactOperator& op, Mode mode) {
    return {canonicalize(op.phase), op.affine, mode};
}

inline Circuit to_circuit(const NormalForm& nf) {
    Circuit d = synth_diagonal(nf.diagonal, nf.mode);
    Circuit a = synth_affine(nf.affine, nf.mode);
    d.gates.insert(d.gates.end(), a.gates.begin(), a.gates.end());
    return d;
}

inline Circuit normalize(const Circuit& c, Mode mode) {
    require_valid(c, mode);
    const ExactOperator op = evaluate(c);
    NormalForm nf;
    try {
        nf = normal_form_of(op, mode);
    } catch (const NotDihedral& e) {
        throw std::logic_error(std::string("internal error: circuit phase is not dihedral: ") + e.what());
    }
    return to_circuit(nf);
}

inline bool equivalent(const Circuit& c1, const Circuit& c2) {
    if (c1.n != c2.n) throw DimensionMismatch("circuits have different qubit counts");
    return evaluate(c1) == evaluate(c2);
}

// ---------------------------------------------------------------------------
// Shape checker for synthesized normal forms.

/// Reasons `c` is not laid out as a normal form; empty when it is.
inline std::vector<std::string> shape_violations(const Circuit& c, Mode mode) {
    std::vector<std::string> out;
    const auto& g = c.gates;
    const int n = c.n;
    std::size_t i = 0;
    auto block = [&](const Gate& first) {
        std::size_t len = 0;
        while (i < g.size() && g[i] == first) {
            ++i;
            ++len;
        }
        return len;
    };

    if (i < g.size() && g[i].kind() == GateKind::Omega) {
        if (mode == Mode::CnotT) out.push_back("scalar in cnott normal form");
        if (g[i].exponent() == 0) out.push_back("omega^0 should be omitted");
        ++i;
    }
    struct Limit {
        GateKind kind;
        std::size_t max_degree;
    };
    for (Limit lim : {Limit{GateKind::T, 7}, Limit{GateKind::U, 3}, Limit{GateKind::V, 1}}) {
        std::optional<Gate> prev;
        while (i < g.size() && g[i].kind() == lim.kind) {
            const Gate head = g[i];
            if (prev && !(*prev < head)) out.push_back(to_string(head) + " block out of lexicographic order");
            if (block(head) > lim.max_degree) out.push_back(to_string(head) + " block degree too large");
            prev = head;
        }
    }

    // Ladders for k = n-1 down to 1; each may be empty.
    for (int k = n - 1; k >= 1 && i < g.size(); --k) {
        auto is_cnot = [&](std::size_t at) { return at < g.size() && g[at].kind() == GateKind::Cnot; };
        if (is_cnot(i) && g[i].qubit(1) == k && is_cnot(i + 1) && g[i + 1].qubit(0) == k) {
            const int p = g[i].qubit(0);
            ++i;
            if (g[i].qubit(1) != p) out.push_back("ladder pivot is not followed by its ascending gate");
        }
        int last = k;
        while (is_cnot(i) && g[i].qubit(0) == k && g[i].qubit(1) < last) last = g[i++].qubit(1);
        last = -1;
        while (is_cnot(i) && g[i].qubit(1) == k && g[i].qubit(0) > last && g[i].qubit(0) < k) last = g[i++].qubit(0);
    }

    int last_x = -1;
    while (i < g.size() && g[i].kind() == GateKind::X && g[i].qubit(0) > last_x) {
        if (mode == Mode::CnotT) out.push_back("X gate in cnott normal form");
        last_x = g[i++].qubit(0);
    }
    if (i != g.size()) out.push_back("unexpected " + to_string(g[i]) + " at position " + std::to_string(i));
    return out;
}

} // namespace cdq
