#pragma once

#include <random>
#include <vector>

#include "cdq/circuit.hpp"
#include "cdq/rewrite.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Every gate `mode` allows on n wires, scalars included.
inline std::vector<cdq::Gate> alphabet(int n, cdq::Mode mode) {
    std::vector<cdq::Gate> out;
    for (const cdq::Gate& g : cdq::detail::all_gates(n)) {
        if (cdq::allowed_in(g.kind(), mode)) out.push_back(g);
    }
    return out;
}

/// Exactly `length` uniform gates on n wires.
inline cdq::Circuit circuit_on(Rng& rng, int n, int length, cdq::Mode mode) {
    const auto gates = alphabet(n, mode);
    cdq::Circuit c{n, {}};
    for (int i = 0; i < length; ++i) c.gates.push_back(gates[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(gates.size()) - 1))]);
    return c;
}

/// Random wire count in [min_n, max_n], random length up to max_length.
inline cdq::Circuit random_circuit(Rng& rng, int max_n, int max_length, cdq::Mode mode, int min_n = 1) {
    return circuit_on(rng, pick(rng, min_n, max_n), pick(rng, 0, max_length), mode);
}

inline std::vector<int> random_injection(Rng& rng, int arity, int n) {
    std::vector<int> wires(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) wires[static_cast<std::size_t>(i)] = i;
    std::shuffle(wires.begin(), wires.end(), rng);
    wires.resize(static_cast<std::size_t>(arity));
    return wires;
}

/// Inserts lhs · rhs^-1 of a random relation instance at a random position,
/// or rewrites an existing occurrence when one is found.
inline cdq::Circuit splice_relation(Rng& rng, const cdq::Circuit& c, cdq::Mode mode) {
    std::vector<const cdq::RewriteRule*> usable;
    for (const auto* r : cdq::rule_table(mode)) {
        if (r->kind == cdq::RuleKind::Pattern && r->arity <= c.n) usable.push_back(r);
    }
    const auto* rule = usable[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(usable.size()) - 1))];
    if (pick(rng, 0, 1) == 0) {
        auto matches = cdq::find_matches(c, *rule);
        if (!matches.empty()) return cdq::apply(c, matches[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(matches.size()) - 1))]);
    }
    const auto a = random_injection(rng, rule->arity, c.n);
    cdq::Circuit lhs{c.n, cdq::detail::instantiate(rule->lhs, a)};
    cdq::Circuit rhs{c.n, cdq::detail::instantiate(rule->rhs, a)};
    const cdq::Circuit undo = cdq::inverse(rhs);
    std::vector<cdq::Gate> piece = lhs.gates;
    piece.insert(piece.end(), undo.gates.begin(), undo.gates.end());
    cdq::Circuit out = c;
    const auto at = static_cast<std::ptrdiff_t>(pick(rng, 0, static_cast<int>(c.gates.size())));
    out.gates.insert(out.gates.begin() + at, piece.begin(), piece.end());
    return out;
}

/// Applies up to `k` random disjoint-support swaps.
inline cdq::Circuit shuffle_commuting(Rng& rng, cdq::Circuit c, int k) {
    const auto& comm = cdq::rule_by_id("STRUCT-COMM");
    for (int i = 0; i < k; ++i) {
        auto matches = cdq::find_matches(c, comm);
        if (matches.empty()) break;
        c = cdq::apply(c, matches[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(matches.size()) - 1))]);
    }
    return c;
}

/// c with 1-5 relation instances spliced in and some structural moves.
inline cdq::Circuit equivalent_variant(Rng& rng, const cdq::Circuit& c, cdq::Mode mode) {
    cdq::Circuit out = c;
    const int k = pick(rng, 1, 5);
    for (int i = 0; i < k; ++i) out = splice_relation(rng, out, mode);
    return shuffle_commuting(rng, out, pick(rng, 0, 10));
}

} // namespace gen
