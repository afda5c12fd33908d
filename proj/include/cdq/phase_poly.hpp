#pragma once

#include <array>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "cdq/bits.hpp"
#include "cdq/circuit.hpp"
#include "cdq/semantics.hpp"

namespace cdq {

/// Sum of Z8 multiples of XOR terms plus a constant. A term is keyed by the
/// mask of qubits it XORs; zero coefficients are never stored.
struct XorPoly {
    int n = 0;
    Z8 constant = 0;
    std::map<QubitMask, Z8> terms;

    void add_constant(int k) { constant = static_cast<Z8>((constant + k) & 7); }

    void add_term(QubitMask subset, int k) {
        if (subset == 0) {
            add_constant(k);
            return;
        }
        const Z8 v = static_cast<Z8>((terms[subset] + k) & 7);
        if (v == 0) {
            terms.erase(subset);
        } else {
            terms[subset] = v;
        }
    }

    Z8 term(QubitMask subset) const {
        auto it = terms.find(subset);
        return it == terms.end() ? Z8{0} : it->second;
    }

    friend bool operator==(const XorPoly&, const XorPoly&) = default;
};

/// Polynomial over Z8 that is linear in each variable, stored densely:
/// coeffs[S] is the coefficient of the monomial prod_{q in S} x_q.
struct MultilinearPoly {
    int n = 0;
    std::vector<Z8> coeffs;

    Z8 operator[](QubitMask subset) const { return coeffs[subset]; }

    /// Nonzero monomials only.
    std::map<QubitMask, Z8> terms() const {
        std::map<QubitMask, Z8> out;
        for (QubitMask s = 0; s < coeffs.size(); ++s) {
            if (coeffs[s]) out.emplace(s, coeffs[s]);
        }
        return out;
    }

    friend bool operator==(const MultilinearPoly&, const MultilinearPoly&) = default;
};

/// Coefficients of the unique diagonal normal form
///   a0 + sum_i a_i x_i + sum_{i<j} b_ij (x_i ^ x_j) + sum_{i<j<k} c_ijk (x_i ^ x_j ^ x_k)
/// with a in Z8, b in Z4, c in Z2. Pairs and triples are stored in
/// lexicographic order of their sorted qubit tuples.
struct CanonicalDiagonal {
    int n = 0;
    Z8 a0 = 0;
    std::vector<Z8> a;
    std::vector<Z8> b;
    std::vector<Z8> c;

    static CanonicalDiagonal zero(int n) {
        const auto un = static_cast<std::size_t>(n);
        const std::size_t pairs = n >= 2 ? un * (un - 1) / 2 : 0;
        const std::size_t triples = n >= 3 ? un * (un - 1) * (un - 2) / 6 : 0;
        return {n, 0, std::vector<Z8>(un, 0), std::vector<Z8>(pairs, 0), std::vector<Z8>(triples, 0)};
    }

    static std::size_t pair_index(int n, int i, int j) {
        // Pairs (p, *) with p < i come first.
        return static_cast<std::size_t>(i * (2 * n - i - 1) / 2 + (j - i - 1));
    }

    static std::size_t triple_index(int n, int i, int j, int k) {
        std::size_t idx = 0;
        for (int p = 0; p < i; ++p) idx += static_cast<std::size_t>((n - 1 - p) * (n - 2 - p) / 2);
        for (int p = i + 1; p < j; ++p) idx += static_cast<std::size_t>(n - 1 - p);
        return idx + static_cast<std::size_t>(k - j - 1);
    }

    Z8& pair(int i, int j) { return b[pair_index(n, i, j)]; }
    Z8 pair(int i, int j) const { return b[pair_index(n, i, j)]; }
    Z8& triple(int i, int j, int k) { return c[triple_index(n, i, j, k)]; }
    Z8 triple(int i, int j, int k) const { return c[triple_index(n, i, j, k)]; }

    friend bool operator==(const CanonicalDiagonal&, const CanonicalDiagonal&) = default;
};

// ---------------------------------------------------------------------------

/// Symbolic execution of a circuit. Each wire carries an affine form
/// (parity mask over the inputs, complement bit); a diagonal gate adds its
/// coefficient to the XOR of the forms it touches, with complemented forms
/// folded through x̄ = 1 - x.
inline std::pair<XorPoly, AffineMap> extract(const Circuit& c) {
    require_valid(c, Mode::Dihedral);
    const int n = c.n;
    if (n > kMaxMaskQubits) throw ValidationError("too many qubits for symbolic extraction");
    std::vector<QubitMask> form(static_cast<std::size_t>(n));
    std::vector<int> flip(static_cast<std::size_t>(n), 0);
    for (int q = 0; q < n; ++q) form[static_cast<std::size_t>(q)] = qubit_bit(n, q);

    XorPoly poly{n, 0, {}};
    auto fire = [&](const Gate& g) {
        QubitMask mask = 0;
        int complement = 0;
        for (int q : g.qubits()) {
            mask ^= form[static_cast<std::size_t>(q)];
            complement ^= flip[static_cast<std::size_t>(q)];
        }
        if (complement) {
            poly.add_constant(1);
            poly.add_term(mask, 7);
        } else {
            poly.add_term(mask, 1);
        }
    };

    for (const Gate& g : c.gates) {
        switch (g.kind()) {
        case GateKind::Omega: poly.add_constant(g.exponent()); break;
        case GateKind::X: flip[static_cast<std::size_t>(g.qubit(0))] ^= 1; break;
        case GateKind::Cnot: {
            const auto ctl = static_cast<std::size_t>(g.qubit(0));
            const auto tgt = static_cast<std::size_t>(g.qubit(1));
            form[tgt] ^= form[ctl];
            flip[tgt] ^= flip[ctl];
            break;
        }
        case GateKind::Swap: {
            const auto a = static_cast<std::size_t>(g.qubit(0));
            const auto b = static_cast<std::size_t>(g.qubit(1));
            std::swap(form[a], form[b]);
            std::swap(flip[a], flip[b]);
            break;
        }
        case GateKind::T:
        case GateKind::U:
        case GateKind::V: fire(g); break;
        }
    }

    QubitMask offset = 0;
    for (int q = 0; q < n; ++q) {
        if (flip[static_cast<std::size_t>(q)]) offset |= qubit_bit(n, q);
    }
    return {std::move(poly), AffineMap(n, std::move(form), offset)};
}

inline PhaseTable to_phase_table(const XorPoly& p) {
    ExactOperator::check_table_size(p.n);
    PhaseTable t = PhaseTable::zero(p.n);
    for (BasisState x = 0; x < t.values.size(); ++x) {
        int v = p.constant;
        for (const auto& [mask, k] : p.terms) v += k * parity(mask & x);
        t.values[x] = static_cast<Z8>(v & 7);
    }
    return t;
}

/// Möbius inversion over the subset lattice: q(S) = sum_{T ⊆ S} (-1)^{|S|-|T|} t(1_T).
inline MultilinearPoly multilinear(const PhaseTable& t) {
    MultilinearPoly q{t.n, t.values};
    const std::size_t size = q.coeffs.size();
    for (std::size_t bit = 1; bit < size; bit <<= 1) {
        for (std::size_t s = 0; s < size; ++s) {
            if (s & bit) q.coeffs[s] = static_cast<Z8>((q.coeffs[s] - q.coeffs[s ^ bit]) & 7);
        }
    }
    return q;
}

/// Triangular solve from the cubic monomials down. Throws NotDihedral when the
/// table has a monomial of degree >= 4, a cubic coefficient not divisible by
/// 4, or an odd quadratic residual.
inline CanonicalDiagonal canonicalize(const PhaseTable& t) {
    const int n = t.n;
    if (t.values.size() != (std::size_t{1} << n)) throw ValidationError("phase table length is not 2^n");
    MultilinearPoly q = multilinear(t);
    auto& m = q.coeffs;
    auto sub = [&](QubitMask s, int k) { m[s] = static_cast<Z8>((m[s] - k) & 7); };
    auto bit = [n](int i) { return qubit_bit(n, i); };

    for (QubitMask s = 0; s < m.size(); ++s) {
        if (std::popcount(s) >= 4 && m[s] != 0) {
            throw NotDihedral("monomial of degree " + std::to_string(std::popcount(s)) + " has coefficient " +
                              std::to_string(m[s]));
        }
    }

    CanonicalDiagonal d = CanonicalDiagonal::zero(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            for (int k = j + 1; k < n; ++k) {
                const QubitMask s = bit(i) | bit(j) | bit(k);
                if (m[s] % 4 != 0) throw NotDihedral("cubic coefficient not divisible by 4");
                const int cijk = m[s] / 4;
                d.triple(i, j, k) = static_cast<Z8>(cijk);
                if (cijk) {
                    // x_i ^ x_j ^ x_k = Σx - 2Σx_ix_j + 4x_ix_jx_k
                    sub(bit(i), 1);
                    sub(bit(j), 1);
                    sub(bit(k), 1);
                    sub(bit(i) | bit(j), -2);
                    sub(bit(i) | bit(k), -2);
                    sub(bit(j) | bit(k), -2);
                    sub(s, 4);
                }
            }
        }
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const QubitMask s = bit(i) | bit(j);
            if (m[s] % 2 != 0) throw NotDihedral("quadratic coefficient is odd after removing cubic terms");
            const int bij = (4 - m[s] / 2) & 3;
            d.pair(i, j) = static_cast<Z8>(bij);
            if (bij) {
                // x_i ^ x_j = x_i + x_j - 2x_ix_j
                sub(bit(i), bij);
                sub(bit(j), bij);
                sub(s, -2 * bij);
            }
        }
    }
    for (int i = 0; i < n; ++i) d.a[static_cast<std::size_t>(i)] = m[bit(i)];
    d.a0 = m[0];
    return d;
}

inline PhaseTable canonical_to_table(const CanonicalDiagonal& d) {
    const int n = d.n;
    ExactOperator::check_table_size(n);
    PhaseTable t = PhaseTable::zero(n);
    for (BasisState x = 0; x < t.values.size(); ++x) {
        auto xb = [&](int q) { return static_cast<int>(test_qubit(x, n, q)); };
        int v = d.a0;
        std::size_t pi = 0, ti = 0;
        for (int i = 0; i < n; ++i) {
            v += d.a[static_cast<std::size_t>(i)] * xb(i);
            for (int j = i + 1; j < n; ++j) {
                v += d.b[pi++] * (xb(i) ^ xb(j));
            }
        }
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j) {
                for (int k = j + 1; k < n; ++k) v += d.c[ti++] * (xb(i) ^ xb(j) ^ xb(k));
            }
        }
        t.values[x] = static_cast<Z8>(v & 7);
    }
    return t;
}

// ---------------------------------------------------------------------------
// JSON

inline nlohmann::json to_json(const CanonicalDiagonal& d) {
    nlohmann::json a = nlohmann::json::array();
    for (Z8 v : d.a) a.push_back(static_cast<int>(v));
    nlohmann::json b = nlohmann::json::object();
    nlohmann::json c = nlohmann::json::object();
    for (int i = 0; i < d.n; ++i) {
        for (int j = i + 1; j < d.n; ++j) {
            b[std::to_string(i) + "," + std::to_string(j)] = static_cast<int>(d.pair(i, j));
            for (int k = j + 1; k < d.n; ++k) {
                c[std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k)] =
                    static_cast<int>(d.triple(i, j, k));
            }
        }
    }
    return {{"a0", static_cast<int>(d.a0)}, {"a", a}, {"b", b}, {"c", c}};
}

inline nlohmann::json to_json(const XorPoly& p) {
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [mask, k] : p.terms) {
        nlohmann::json qs = nlohmann::json::array();
        for (int q = 0; q < p.n; ++q) {
            if (test_qubit(mask, p.n, q)) qs.push_back(q);
        }
        terms.push_back({{"qubits", qs}, {"coeff", static_cast<int>(k)}});
    }
    return {{"constant", static_cast<int>(p.constant)}, {"terms", terms}};
}

} // namespace cdq
