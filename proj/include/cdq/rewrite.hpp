#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "cdq/circuit.hpp"
#include "cdq/normal_form.hpp"
#include "cdq/semantics.hpp"

namespace cdq {

enum class RuleKind : std::uint8_t {
    Pattern,         ///< lhs = rhs over abstract wire slots
    DisjointCommute, ///< adjacent gates on disjoint wires swap (scalars have no wires)
    DiagonalCommute, ///< adjacent diagonal gates sharing a wire swap
};

/// An equation between two gate lists over wire slots 0..arity-1. Any
/// injective assignment of slots to qubits gives an instance.
struct RewriteRule {
    std::string id;
    RuleKind kind = RuleKind::Pattern;
    int arity = 0;
    std::vector<Gate> lhs;
    std::vector<Gate> rhs;

    bool mentions_x_or_scalar() const {
        auto bad = [](const Gate& g) { return g.kind() == GateKind::X || g.kind() == GateKind::Omega; };
        return std::any_of(lhs.begin(), lhs.end(), bad) || std::any_of(rhs.begin(), rhs.end(), bad);
    }
};

enum class Direction : std::uint8_t { LeftToRight, RightToLeft };

inline const char* direction_name(Direction d) { return d == Direction::LeftToRight ? "ltr" : "rtl"; }

struct Match {
    const RewriteRule* rule = nullptr;
    std::size_t position = 0;
    std::vector<int> assignment; ///< slot -> qubit; empty for schema rules
    Direction direction = Direction::LeftToRight;

    friend bool operator==(const Match& a, const Match& b) {
        return a.rule == b.rule && a.position == b.position && a.assignment == b.assignment &&
               a.direction == b.direction;
    }
};

struct TraceStep {
    std::string rule_id;
    std::size_t position = 0;
    Direction direction = Direction::LeftToRight;
};

using Trace = std::vector<TraceStep>;

inline std::ostream& operator<<(std::ostream& os, const TraceStep& s) {
    return os << '(' << s.rule_id << ", " << s.position << ", " << direction_name(s.direction) << ')';
}

// ---------------------------------------------------------------------------
// Rule table

namespace detail {

inline std::vector<Gate> times(const Gate& g, int k) { return std::vector<Gate>(static_cast<std::size_t>(k), g); }

inline std::vector<Gate> cat(std::initializer_list<std::vector<Gate>> parts) {
    std::vector<Gate> out;
    for (const auto& p : parts) out.insert(out.end(), p.begin(), p.end());
    return out;
}

/// Right-hand side of R13 on slots 0..3: T^5 everywhere, U^3 on every pair,
/// V on every triple, each group in lexicographic order.
inline std::vector<Gate> parity4_expansion() {
    std::vector<Gate> out;
    for (int i = 0; i < 4; ++i) {
        auto b = times(Gate::t(i), 5);
        out.insert(out.end(), b.begin(), b.end());
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            auto b = times(Gate::u(i, j), 3);
            out.insert(out.end(), b.begin(), b.end());
        }
    }
    for (int i = 0; i < 4; ++i) {
        for (int j = i + 1; j < 4; ++j) {
            for (int k = j + 1; k < 4; ++k) out.push_back(Gate::v(i, j, k));
        }
    }
    return out;
}

inline std::vector<RewriteRule> build_rules() {
    using G = Gate;
    const G w = G::omega(1);
    std::vector<RewriteRule> r;
    auto add = [&](std::string id, int arity, std::vector<Gate> lhs, std::vector<Gate> rhs) {
        r.push_back({std::move(id), RuleKind::Pattern, arity, std::move(lhs), std::move(rhs)});
    };

    // Relations over wire slots 0, 1, ...
    add("R1", 1, {G::x(0), G::x(0)}, {});
    add("R2", 2, {G::cnot(0, 1), G::x(1), G::cnot(0, 1)}, {G::x(1)});
    add("R3", 2, {G::cnot(0, 1), G::x(0), G::cnot(0, 1)}, {G::x(0), G::x(1)});
    add("R4", 2, {G::cnot(0, 1), G::cnot(0, 1)}, {});
    add("R5", 2, {G::swap(0, 1)}, {G::cnot(0, 1), G::swap(0, 1), G::cnot(0, 1), G::swap(0, 1), G::cnot(0, 1)});
    add("R6", 3, {G::cnot(0, 2)}, {G::cnot(1, 2), G::cnot(0, 1), G::cnot(1, 2), G::cnot(0, 1)});
    add("R7", 1, times(G::t(0), 8), {});
    add("R8", 2, times(G::u(0, 1), 4), cat({times(G::t(0), 4), times(G::t(1), 4)}));
    add("R9", 3, times(G::v(0, 1, 2), 2),
        cat({times(G::t(0), 6), times(G::t(1), 6), times(G::t(2), 6), times(G::u(0, 1), 2), times(G::u(0, 2), 2),
             times(G::u(1, 2), 2)}));
    add("R10", 0, times(w, 8), {});
    add("R11", 1, {G::x(0), G::t(0), G::x(0)}, cat({{w}, times(G::t(0), 7)}));
    add("R12", 2, {G::cnot(0, 1), G::t(0), G::cnot(0, 1)}, {G::t(0)});
    add("R13", 4, {G::cnot(0, 1), G::v(1, 2, 3), G::cnot(0, 1)}, parity4_expansion());

    // Defining equations of the derived generators.
    add("DefU", 2, {G::u(0, 1)}, {G::cnot(0, 1), G::t(1), G::cnot(0, 1)});
    add("DefV", 3, {G::v(0, 1, 2)}, {G::cnot(0, 1), G::cnot(1, 2), G::t(2), G::cnot(1, 2), G::cnot(0, 1)});

    // Derived commutation rules: an affine gate followed by a diagonal gate
    // it shares a wire with, rewritten as diagonal gates then the same affine gate.
    add("FIG2-1", 1, {G::x(0), G::t(0)}, cat({{w}, times(G::t(0), 7), {G::x(0)}}));
    add("FIG2-2", 2, {G::x(0), G::u(0, 1)}, cat({{w}, times(G::u(0, 1), 7), {G::x(0)}}));
    add("FIG2-3", 2, {G::x(1), G::u(0, 1)}, cat({{w}, times(G::u(0, 1), 7), {G::x(1)}}));
    add("FIG2-4", 3, {G::x(0), G::v(0, 1, 2)}, cat({{w}, times(G::v(0, 1, 2), 7), {G::x(0)}}));
    add("FIG2-5", 3, {G::x(1), G::v(0, 1, 2)}, cat({{w}, times(G::v(0, 1, 2), 7), {G::x(1)}}));
    add("FIG2-6", 3, {G::x(2), G::v(0, 1, 2)}, cat({{w}, times(G::v(0, 1, 2), 7), {G::x(2)}}));
    add("FIG2-7", 2, {G::cnot(0, 1), G::t(0)}, {G::t(0), G::cnot(0, 1)});
    add("FIG2-8", 2, {G::cnot(0, 1), G::t(1)}, {G::u(0, 1), G::cnot(0, 1)});
    add("FIG2-9", 2, {G::cnot(0, 1), G::u(0, 1)}, {G::t(1), G::cnot(0, 1)});
    add("FIG2-10", 3, {G::cnot(0, 1), G::u(1, 2)}, {G::v(0, 1, 2), G::cnot(0, 1)});
    add("FIG2-11", 3, {G::cnot(1, 2), G::u(0, 1)}, {G::u(0, 1), G::cnot(1, 2)});
    add("FIG2-12", 3, {G::cnot(0, 1), G::v(0, 1, 2)}, {G::u(1, 2), G::cnot(0, 1)});
    add("FIG2-13", 3, {G::cnot(1, 2), G::v(0, 1, 2)}, {G::u(0, 2), G::cnot(1, 2)});
    add("FIG2-14", 4, {G::cnot(2, 3), G::v(0, 1, 2)}, {G::v(0, 1, 2), G::cnot(2, 3)});
    add("FIG2-15", 4, {G::cnot(0, 1), G::v(1, 2, 3)}, cat({parity4_expansion(), {G::cnot(0, 1)}}));
    add("FIG2-16", 2, {G::swap(0, 1), G::t(0)}, {G::t(1), G::swap(0, 1)});
    add("FIG2-17", 2, {G::swap(0, 1), G::t(1)}, {G::t(0), G::swap(0, 1)});
    add("FIG2-18", 2, {G::swap(0, 1), G::u(0, 1)}, {G::u(0, 1), G::swap(0, 1)});
    add("FIG2-19", 3, {G::swap(0, 1), G::u(1, 2)}, {G::u(0, 2), G::swap(0, 1)});
    add("FIG2-20", 3, {G::swap(1, 2), G::u(0, 1)}, {G::u(0, 2), G::swap(1, 2)});
    add("FIG2-21", 3, {G::swap(0, 1), G::v(0, 1, 2)}, {G::v(0, 1, 2), G::swap(0, 1)});
    add("FIG2-22", 3, {G::swap(1, 2), G::v(0, 1, 2)}, {G::v(0, 1, 2), G::swap(1, 2)});
    add("FIG2-23", 4, {G::swap(0, 1), G::v(1, 2, 3)}, {G::v(0, 2, 3), G::swap(0, 1)});
    add("FIG2-24", 4, {G::swap(2, 3), G::v(0, 1, 2)}, {G::v(0, 1, 3), G::swap(2, 3)});

    // Structure of the symmetric monoidal setting.
    r.push_back({"STRUCT-COMM", RuleKind::DisjointCommute, 0, {}, {}});
    add("STRUCT-COHERENCE", 2, {G::swap(0, 1), G::swap(0, 1)}, {});
    add("STRUCT-COHERENCE-YB", 3, {G::swap(0, 1), G::swap(1, 2), G::swap(0, 1)},
        {G::swap(1, 2), G::swap(0, 1), G::swap(1, 2)});
    // Diagonal gates commute (derived).
    r.push_back({"DIAG-COMM", RuleKind::DiagonalCommute, 0, {}, {}});
    return r;
}

} // namespace detail

/// Every rule, Dihedral presentation. Immutable after first use.
inline const std::vector<RewriteRule>& all_rules() {
    static const std::vector<RewriteRule> rules = detail::build_rules();
    return rules;
}

inline const RewriteRule& rule_by_id(const std::string& id) {
    for (const auto& r : all_rules()) {
        if (r.id == id) return r;
    }
    throw std::out_of_range("no rule " + id);
}

/// CnotT drops R1, R2, R3, R10, R11 and every rule that mentions X or a scalar.
inline std::vector<const RewriteRule*> rule_table(Mode mode) {
    std::vector<const RewriteRule*> out;
    for (const auto& r : all_rules()) {
        if (mode == Mode::CnotT &&
            (r.id == "R1" || r.id == "R2" || r.id == "R3" || r.id == "R10" || r.id == "R11" || r.mentions_x_or_scalar())) {
            continue;
        }
        out.push_back(&r);
    }
    return out;
}

// ---------------------------------------------------------------------------
// Matching

namespace detail {

inline bool schema_applies(RuleKind kind, const Gate& a, const Gate& b) {
    switch (kind) {
    case RuleKind::DisjointCommute: return !a.shares_qubit(b);
    case RuleKind::DiagonalCommute: return a.is_diagonal() && b.is_diagonal() && a.shares_qubit(b) && a != b;
    default: return false;
    }
}

inline std::vector<Gate> instantiate(const std::vector<Gate>& pattern, const std::vector<int>& assignment) {
    std::vector<Gate> out;
    out.reserve(pattern.size());
    for (const Gate& g : pattern) {
        out.push_back(g.relabeled([&](int slot) { return assignment[static_cast<std::size_t>(slot)]; }));
    }
    return out;
}

class PatternMatcher {
public:
    PatternMatcher(const std::vector<Gate>& pattern, int arity, int n) : pattern_(pattern), arity_(arity), n_(n) {}

    /// All slot assignments under which `pattern` equals gates[pos, pos + size).
    std::vector<std::vector<int>> run(const std::vector<Gate>& gates, std::size_t pos) {
        found_.clear();
        if (arity_ > n_ || pos + pattern_.size() > gates.size()) return {};
        std::vector<int> assignment(static_cast<std::size_t>(arity_), -1);
        window(gates, pos, 0, assignment);
        std::sort(found_.begin(), found_.end());
        found_.erase(std::unique(found_.begin(), found_.end()), found_.end());
        return found_;
    }

private:
    bool bind(std::vector<int>& a, int slot, int qubit, std::vector<int>& undo) {
        auto& cur = a[static_cast<std::size_t>(slot)];
        if (cur == qubit) return true;
        if (cur != -1) return false;
        if (std::find(a.begin(), a.end(), qubit) != a.end()) return false;
        cur = qubit;
        undo.push_back(slot);
        return true;
    }

    void window(const std::vector<Gate>& gates, std::size_t pos, std::size_t i, std::vector<int>& a) {
        if (i == pattern_.size()) {
            complete(a, 0);
            return;
        }
        const Gate& p = pattern_[i];
        const Gate& g = gates[pos + i];
        if (p.kind() != g.kind() || p.exponent() != g.exponent()) return;

        std::vector<int> order(static_cast<std::size_t>(g.arity()));
        std::iota(order.begin(), order.end(), 0);
        const bool symmetric = g.kind() == GateKind::Swap || g.kind() == GateKind::U || g.kind() == GateKind::V;
        do {
            std::vector<int> undo;
            bool ok = true;
            for (int k = 0; k < p.arity() && ok; ++k) ok = bind(a, p.qubit(k), g.qubit(order[static_cast<std::size_t>(k)]), undo);
            if (ok) window(gates, pos, i + 1, a);
            for (int s : undo) a[static_cast<std::size_t>(s)] = -1;
        } while (symmetric && std::next_permutation(order.begin(), order.end()));
    }

    /// Slots the window left unbound range over every unused qubit.
    void complete(std::vector<int>& a, std::size_t slot) {
        if (slot == a.size()) {
            found_.push_back(a);
            return;
        }
        if (a[slot] != -1) {
            complete(a, slot + 1);
            return;
        }
        for (int q = 0; q < n_; ++q) {
            if (std::find(a.begin(), a.end(), q) != a.end()) continue;
            a[slot] = q;
            complete(a, slot + 1);
            a[slot] = -1;
        }
    }

    const std::vector<Gate>& pattern_;
    int arity_;
    int n_;
    std::vector<std::vector<int>> found_;
};

} // namespace detail

/// Every place `rule` applies to `c`, ordered by position, then assignment,
/// then direction.
inline std::vector<Match> find_matches(const Circuit& c, const RewriteRule& rule) {
    std::vector<Match> out;
    const auto& g = c.gates;
    if (rule.kind != RuleKind::Pattern) {
        for (std::size_t p = 0; p + 1 < g.size(); ++p) {
            if (detail::schema_applies(rule.kind, g[p], g[p + 1])) out.push_back({&rule, p, {}, Direction::LeftToRight});
        }
        return out;
    }
    for (Direction dir : {Direction::LeftToRight, Direction::RightToLeft}) {
        const auto& side = dir == Direction::LeftToRight ? rule.lhs : rule.rhs;
        detail::PatternMatcher matcher(side, rule.arity, c.n);
        for (std::size_t p = 0; p + side.size() <= g.size(); ++p) {
            for (auto& a : matcher.run(g, p)) out.push_back({&rule, p, std::move(a), dir});
        }
    }
    std::sort(out.begin(), out.end(), [](const Match& x, const Match& y) {
        return std::tie(x.position, x.assignment, x.direction) < std::tie(y.position, y.assignment, y.direction);
    });
    return out;
}

/// Replaces the matched window with the instantiated other side.
inline Circuit apply(const Circuit& c, const Match& m) {
    if (!m.rule) throw StaleMatch("match has no rule");
    const RewriteRule& rule = *m.rule;
    Circuit out = c;
    auto& g = out.gates;
    if (rule.kind != RuleKind::Pattern) {
        if (m.position + 1 >= g.size() || !detail::schema_applies(rule.kind, g[m.position], g[m.position + 1])) {
            throw StaleMatch(rule.id + " no longer applies at position " + std::to_string(m.position));
        }
        std::swap(g[m.position], g[m.position + 1]);
        return out;
    }
    const bool ltr = m.direction == Direction::LeftToRight;
    if (static_cast<int>(m.assignment.size()) != rule.arity) throw StaleMatch("assignment has the wrong size");
    for (int q : m.assignment) {
        if (q < 0 || q >= c.n) throw StaleMatch("assignment leaves the circuit");
    }
    const auto from = detail::instantiate(ltr ? rule.lhs : rule.rhs, m.assignment);
    const auto to = detail::instantiate(ltr ? rule.rhs : rule.lhs, m.assignment);
    if (m.position + from.size() > g.size() ||
        !std::equal(from.begin(), from.end(), g.begin() + static_cast<std::ptrdiff_t>(m.position))) {
        throw StaleMatch(rule.id + " does not match at position " + std::to_string(m.position));
    }
    const auto at = g.begin() + static_cast<std::ptrdiff_t>(m.position);
    g.erase(at, at + static_cast<std::ptrdiff_t>(from.size()));
    g.insert(g.begin() + static_cast<std::ptrdiff_t>(m.position), to.begin(), to.end());
    return out;
}

// ---------------------------------------------------------------------------
// Soundness

namespace detail {

inline void for_each_injection(int arity, int n, const std::function<void(const std::vector<int>&)>& f) {
    std::vector<int> a;
    std::vector<bool> used(static_cast<std::size_t>(n), false);
    std::function<void()> rec = [&] {
        if (static_cast<int>(a.size()) == arity) {
            f(a);
            return;
        }
        for (int q = 0; q < n; ++q) {
            if (used[static_cast<std::size_t>(q)]) continue;
            used[static_cast<std::size_t>(q)] = true;
            a.push_back(q);
            rec();
            a.pop_back();
            used[static_cast<std::size_t>(q)] = false;
        }
    };
    rec();
}

/// Every gate of the full gate set on n wires.
inline std::vector<Gate> all_gates(int n) {
    std::vector<Gate> out;
    for (int k = 1; k < 8; ++k) out.push_back(Gate::omega(k));
    for (int a = 0; a < n; ++a) {
        out.push_back(Gate::x(a));
        out.push_back(Gate::t(a));
        for (int b = 0; b < n; ++b) {
            if (a == b) continue;
            out.push_back(Gate::cnot(a, b));
            if (a < b) {
                out.push_back(Gate::swap(a, b));
                out.push_back(Gate::u(a, b));
                for (int c = b + 1; c < n; ++c) out.push_back(Gate::v(a, b, c));
            }
        }
    }
    return out;
}

} // namespace detail

/// True iff both sides denote the same operator under every injective
/// placement on n wires (every qualifying gate pair, for schema rules).
inline bool verify_rule(const RewriteRule& rule, int n) {
    const int need = rule.kind == RuleKind::Pattern ? rule.arity : 1;
    if (n < need) throw ValidationError(rule.id + " needs at least " + std::to_string(need) + " wires");
    if (rule.kind != RuleKind::Pattern) {
        const auto gates = detail::all_gates(n);
        for (const Gate& a : gates) {
            for (const Gate& b : gates) {
                if (!detail::schema_applies(rule.kind, a, b)) continue;
                if (evaluate(Circuit{n, {a, b}}) != evaluate(Circuit{n, {b, a}})) return false;
            }
        }
        return true;
    }
    bool ok = true;
    detail::for_each_injection(rule.arity, n, [&](const std::vector<int>& a) {
        if (!ok) return;
        ok = evaluate(Circuit{n, detail::instantiate(rule.lhs, a)}) == evaluate(Circuit{n, detail::instantiate(rule.rhs, a)});
    });
    return ok;
}

/// Smallest wire count a rule can be verified at.
inline int min_arity(const RewriteRule& rule) {
    if (rule.kind == RuleKind::DisjointCommute) return 2;
    if (rule.kind == RuleKind::DiagonalCommute) return 3;
    return std::max(rule.arity, 1);
}

// ---------------------------------------------------------------------------
// Directed normalization

namespace detail {

/// A diagonal circuit up to reordering: total scalar exponent plus a
/// multiplicity per T/U/V gate. Iterating `blocks` yields T, then U, then V,
/// each in lexicographic wire order, which is normal-form order.
struct DiagonalBlocks {
    long long scalar = 0;
    std::map<Gate, long long> blocks;

    void add(const Gate& g, long long k = 1) {
        if (g.kind() == GateKind::Omega) {
            scalar += k * g.exponent();
        } else if (g.is_diagonal()) {
            blocks[g] += k;
        } else {
            throw ValidationError("non-diagonal gate " + to_string(g) + " in a diagonal circuit");
        }
    }

    std::vector<Gate> gates() const {
        std::vector<Gate> out;
        if (scalar % 8 != 0) out.push_back(Gate::omega(static_cast<int>(scalar % 8)));
        for (const auto& [g, k] : blocks) out.insert(out.end(), static_cast<std::size_t>(k), g);
        return out;
    }

    std::size_t offset_of(const Gate& g) const {
        std::size_t off = scalar % 8 != 0 ? 1 : 0;
        for (const auto& [h, k] : blocks) {
            if (!(h < g)) break;
            off += static_cast<std::size_t>(k);
        }
        return off;
    }
};

class Rewriter {
public:
    Rewriter(Mode mode, Trace* trace, std::size_t fuel) : rules_(rule_table(mode)), trace_(trace), fuel_(fuel) {}

    void log(const std::string& id, std::size_t position, std::size_t count = 1) {
        if (count > fuel_) throw Error("rewriting fuel exhausted");
        fuel_ -= count;
        if (!trace_) return;
        for (std::size_t i = 0; i < count; ++i) trace_->push_back({id, position, Direction::LeftToRight});
    }

    const RewriteRule& rule(const std::string& id) const {
        for (const RewriteRule* r : rules_) {
            if (r->id == id) return *r;
        }
        throw std::logic_error("rule " + id + " is not in this presentation");
    }

    /// Degree reduction in the order V (R9), U (R8), T (R7), scalar (R10).
    /// `base` is where the segment starts in the enclosing circuit.
    void reduce(DiagonalBlocks& d, std::size_t base) {
        reduce_kind(d, GateKind::V, 2, "R9", base);
        reduce_kind(d, GateKind::U, 4, "R8", base);
        reduce_kind(d, GateKind::T, 8, "R7", base);
        if (d.scalar >= 8) {
            log("R10", base, static_cast<std::size_t>(d.scalar / 8));
            d.scalar %= 8;
        }
    }

    /// The gates that replace `d` when affine gate `a` is moved past it.
    const std::vector<Gate>& commute(const Gate& a, const Gate& d, std::string& rule_id) {
        auto key = std::make_pair(a, d);
        auto it = cache_.find(key);
        if (it == cache_.end()) it = cache_.emplace(key, lookup(a, d)).first;
        rule_id = it->second.first;
        return it->second.second;
    }

private:
    void reduce_kind(DiagonalBlocks& d, GateKind kind, long long order, const std::string& id, std::size_t base) {
        const RewriteRule& r = rule(id);
        std::vector<Gate> heavy;
        for (const auto& [g, k] : d.blocks) {
            if (g.kind() == kind && k >= order) heavy.push_back(g);
        }
        for (const Gate& g : heavy) {
            const long long applications = d.blocks[g] / order;
            log(id, base + d.offset_of(g), static_cast<std::size_t>(applications));
            d.blocks[g] %= order;
            std::vector<int> slots(g.qubits().begin(), g.qubits().end());
            for (const Gate& h : instantiate(r.rhs, slots)) d.add(h, applications);
        }
        std::erase_if(d.blocks, [](const auto& e) { return e.second == 0; });
    }

    std::pair<std::string, std::vector<Gate>> lookup(const Gate& a, const Gate& d) const {
        if (!a.shares_qubit(d)) return {"STRUCT-COMM", {d}};
        const int n = 1 + std::max(*std::max_element(a.qubits().begin(), a.qubits().end()),
                                   *std::max_element(d.qubits().begin(), d.qubits().end()));
        const Circuit window{n, {a, d}};
        for (const RewriteRule* r : rules_) {
            if (r->kind != RuleKind::Pattern || r->lhs.size() != 2 || r->id.rfind("FIG2-", 0) != 0) continue;
            PatternMatcher matcher(r->lhs, r->arity, n);
            auto found = matcher.run(window.gates, 0);
            if (found.empty()) continue;
            auto rhs = instantiate(r->rhs, found.front());
            if (rhs.empty() || rhs.back() != a) continue;
            rhs.pop_back();
            return {r->id, rhs};
        }
        throw std::logic_error("no commutation rule moves " + to_string(a) + " past " + to_string(d));
    }

    std::vector<const RewriteRule*> rules_;
    Trace* trace_;
    std::size_t fuel_;
    std::map<std::pair<Gate, Gate>, std::pair<std::string, std::vector<Gate>>> cache_;
};

inline constexpr std::size_t kDefaultFuel = 50'000'000;

/// Moves every diagonal gate left of every affine gate. Returns the reduced
/// diagonal prefix and the untouched affine gates, in order.
inline std::pair<DiagonalBlocks, std::vector<Gate>> push_left(const Circuit& c, Rewriter& rw) {
    DiagonalBlocks prefix;
    std::vector<Gate> affine;
    std::size_t prefix_size = 0;
    for (const Gate& g : c.gates) {
        if (g.is_affine()) {
            affine.push_back(g);
            continue;
        }
        // The batch starts right after the last affine gate and moves left
        // across one affine gate at a time, reduced after each crossing.
        std::vector<Gate> batch{g};
        for (std::size_t i = affine.size(); i-- > 0;) {
            DiagonalBlocks moved;
            std::size_t emitted = 0;
            for (const Gate& d : batch) {
                std::string id;
                const auto& replacement = rw.commute(affine[i], d, id);
                rw.log(id, prefix_size + i + emitted);
                for (const Gate& h : replacement) moved.add(h);
                emitted += replacement.size();
            }
            rw.reduce(moved, prefix_size + i);
            batch = moved.gates();
        }
        for (const Gate& h : batch) prefix.add(h);
        rw.reduce(prefix, 0);
        prefix_size = prefix.gates().size();
    }
    return {prefix, affine};
}

} // namespace detail

/// Rewrites `c` into D ++ A with D diagonal (already degree-reduced) and A
/// affine, using only the derived commutation rules, disjoint commutation,
/// and the diagonal relations.
inline Circuit push_diagonal_left(const Circuit& c, Mode mode = Mode::Dihedral, Trace* trace = nullptr,
                                  std::size_t fuel = detail::kDefaultFuel) {
    require_valid(c, mode);
    detail::Rewriter rw(mode, trace, fuel);
    auto [prefix, affine] = detail::push_left(c, rw);
    Circuit out{c.n, prefix.gates()};
    out.gates.insert(out.gates.end(), affine.begin(), affine.end());
    return out;
}

/// Reorders a diagonal circuit into normal-form order and reduces block
/// degrees with R9, R8, R7 and R10.
inline Circuit reduce_degrees(const Circuit& d, Mode mode = Mode::Dihedral, Trace* trace = nullptr) {
    require_valid(d, mode);
    detail::DiagonalBlocks blocks;
    for (const Gate& g : d.gates) blocks.add(g);
    detail::Rewriter rw(mode, trace, detail::kDefaultFuel);
    rw.reduce(blocks, 0);
    return {d.n, blocks.gates()};
}

/// Normal form reached by rewriting: push diagonals left, reduce degrees,
/// then replace the affine suffix by its affine normal form.
inline Circuit normalize_by_rewriting(const Circuit& c, Mode mode, Trace* trace = nullptr,
                                      std::size_t fuel = detail::kDefaultFuel) {
    require_valid(c, mode);
    detail::Rewriter rw(mode, trace, fuel);
    auto [prefix, affine] = detail::push_left(c, rw);
    rw.reduce(prefix, 0);
    Circuit out{c.n, prefix.gates()};
    const Circuit suffix = synth_affine(evaluate(Circuit{c.n, affine}).affine, mode);
    out.gates.insert(out.gates.end(), suffix.gates.begin(), suffix.gates.end());
    return out;
}

} // namespace cdq
