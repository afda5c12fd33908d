#pragma once

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <compare>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cdq/bits.hpp"
#include "cdq/error.hpp"

namespace cdq {

enum class GateKind : std::uint8_t { Omega, X, T, Cnot, Swap, U, V };

/// Dihedral: the full {omega, X, T, CNOT, SWAP, U, V} gate set.
/// CnotT: no X and no scalar.
enum class Mode : std::uint8_t { Dihedral, CnotT };

/// One gate of the IR. U, V and SWAP are symmetric in their wires and keep
/// them sorted; CNOT keeps (control, target).
class Gate {
public:
    static Gate omega(int k) { return Gate(GateKind::Omega, {0, 0, 0}, 0, k); }
    static Gate x(int q) { return Gate(GateKind::X, {q, 0, 0}, 1, 0); }
    static Gate t(int q) { return Gate(GateKind::T, {q, 0, 0}, 1, 0); }
    static Gate cnot(int control, int target) { return Gate(GateKind::Cnot, {control, target, 0}, 2, 0); }
    static Gate swap(int a, int b) { return sorted(GateKind::Swap, {a, b, 0}, 2); }
    static Gate u(int a, int b) { return sorted(GateKind::U, {a, b, 0}, 2); }
    static Gate v(int a, int b, int c) { return sorted(GateKind::V, {a, b, c}, 3); }

    GateKind kind() const noexcept { return kind_; }
    /// Exponent of an Omega gate; zero for every other kind.
    int exponent() const noexcept { return exponent_; }
    int arity() const noexcept { return arity_; }
    std::span<const int> qubits() const noexcept { return {qubits_.data(), static_cast<std::size_t>(arity_)}; }
    int qubit(int i) const noexcept { return qubits_[static_cast<std::size_t>(i)]; }

    bool is_diagonal() const noexcept {
        return kind_ == GateKind::Omega || kind_ == GateKind::T || kind_ == GateKind::U || kind_ == GateKind::V;
    }
    bool is_affine() const noexcept { return !is_diagonal(); }

    bool acts_on(int q) const noexcept {
        return std::find(qubits().begin(), qubits().end(), q) != qubits().end();
    }

    bool shares_qubit(const Gate& other) const noexcept {
        return std::any_of(qubits().begin(), qubits().end(), [&](int q) { return other.acts_on(q); });
    }

    /// Same gate with every wire renamed through `wire_map`.
    template <typename Map>
    Gate relabeled(const Map& wire_map) const {
        switch (kind_) {
        case GateKind::Omega: return *this;
        case GateKind::X: return x(wire_map(qubits_[0]));
        case GateKind::T: return t(wire_map(qubits_[0]));
        case GateKind::Cnot: return cnot(wire_map(qubits_[0]), wire_map(qubits_[1]));
        case GateKind::Swap: return swap(wire_map(qubits_[0]), wire_map(qubits_[1]));
        case GateKind::U: return u(wire_map(qubits_[0]), wire_map(qubits_[1]));
        case GateKind::V: return v(wire_map(qubits_[0]), wire_map(qubits_[1]), wire_map(qubits_[2]));
        }
        return *this;
    }

    friend bool operator==(const Gate&, const Gate&) = default;
    friend auto operator<=>(const Gate&, const Gate&) = default;

private:
    Gate(GateKind kind, std::array<int, 3> qubits, int arity, int exponent)
        : kind_(kind), arity_(static_cast<std::uint8_t>(arity)), exponent_(exponent), qubits_(qubits) {}

    static Gate sorted(GateKind kind, std::array<int, 3> qubits, int arity) {
        std::sort(qubits.begin(), qubits.begin() + arity);
        return Gate(kind, qubits, arity, 0);
    }

    GateKind kind_;
    std::uint8_t arity_;
    int exponent_;
    std::array<int, 3> qubits_;
};

/// Gates in application order: gates.front() acts on the input state first.
struct Circuit {
    int n = 0;
    std::vector<Gate> gates;

    friend bool operator==(const Circuit&, const Circuit&) = default;
};

/// Gates whose product with `g` is the identity, in circuit order.
inline std::vector<Gate> inverse_gates(const Gate& g) {
    switch (g.kind()) {
    case GateKind::Omega: return {Gate::omega((8 - g.exponent()) % 8)};
    case GateKind::X:
    case GateKind::Cnot:
    case GateKind::Swap: return {g};
    case GateKind::T:
    case GateKind::U:
    case GateKind::V: return std::vector<Gate>(7, g);
    }
    return {};
}

/// Circuit for the inverse operator: reversed order, each gate inverted.
inline Circuit inverse(const Circuit& c) {
    Circuit out{c.n, {}};
    for (auto it = c.gates.rbegin(); it != c.gates.rend(); ++it) {
        auto inv = inverse_gates(*it);
        out.gates.insert(out.gates.end(), inv.begin(), inv.end());
    }
    return out;
}

inline bool allowed_in(GateKind kind, Mode mode) noexcept {
    return mode == Mode::Dihedral || (kind != GateKind::X && kind != GateKind::Omega);
}

inline const char* mnemonic(GateKind kind) noexcept {
    switch (kind) {
    case GateKind::Omega: return "omega";
    case GateKind::X: return "x";
    case GateKind::T: return "t";
    case GateKind::Cnot: return "cnot";
    case GateKind::Swap: return "swap";
    case GateKind::U: return "u";
    case GateKind::V: return "v";
    }
    return "?";
}

inline const char* mode_name(Mode mode) noexcept { return mode == Mode::Dihedral ? "dihedral" : "cnott"; }

inline std::optional<Mode> parse_mode(std::string_view s) {
    if (s == "dihedral") return Mode::Dihedral;
    if (s == "cnott") return Mode::CnotT;
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Validation

struct Violation {
    std::size_t position; ///< gate index, or SIZE_MAX for circuit-level problems
    std::string message;

    friend bool operator==(const Violation&, const Violation&) = default;
};

inline constexpr std::size_t kCircuitLevel = static_cast<std::size_t>(-1);

/// Every broken invariant, in gate order. Empty means the circuit is valid.
inline std::vector<Violation> validate(const Circuit& c, Mode mode) {
    std::vector<Violation> out;
    if (c.n < 0) out.push_back({kCircuitLevel, "negative qubit count"});
    for (std::size_t i = 0; i < c.gates.size(); ++i) {
        const Gate& g = c.gates[i];
        if (!allowed_in(g.kind(), mode)) {
            out.push_back({i, std::string(mnemonic(g.kind())) + " is not allowed in cnott mode"});
        }
        if (g.kind() == GateKind::Omega && (g.exponent() < 0 || g.exponent() > 7)) {
            out.push_back({i, "omega exponent " + std::to_string(g.exponent()) + " outside 0..7"});
        }
        auto qs = g.qubits();
        for (std::size_t a = 0; a < qs.size(); ++a) {
            if (qs[a] < 0 || qs[a] >= c.n) {
                out.push_back({i, "qubit index " + std::to_string(qs[a]) + " >= n = " + std::to_string(c.n)});
            }
            for (std::size_t b = a + 1; b < qs.size(); ++b) {
                if (qs[a] == qs[b]) out.push_back({i, "repeated qubit " + std::to_string(qs[a])});
            }
        }
    }
    return out;
}

inline std::string describe(const std::vector<Violation>& vs) {
    std::string s;
    for (const auto& v : vs) {
        if (!s.empty()) s += "; ";
        if (v.position != kCircuitLevel) s += "gate " + std::to_string(v.position) + ": ";
        s += v.message;
    }
    return s;
}

inline void require_valid(const Circuit& c, Mode mode) {
    auto vs = validate(c, mode);
    if (!vs.empty()) throw ValidationError(describe(vs));
}

// ---------------------------------------------------------------------------
// Text format (.cdq)

namespace detail {

inline std::vector<std::string_view> split_words(std::string_view line) {
    std::vector<std::string_view> words;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        std::size_t j = i;
        while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
        if (j > i) words.push_back(line.substr(i, j - i));
        i = j;
    }
    return words;
}

inline std::optional<long long> parse_int(std::string_view w) {
    long long v = 0;
    auto [ptr, ec] = std::from_chars(w.data(), w.data() + w.size(), v);
    if (ec != std::errc{} || ptr != w.data() + w.size()) return std::nullopt;
    return v;
}

} // namespace detail

inline Circuit parse(std::string_view text) {
    std::optional<Circuit> circuit;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string_view::npos) end = text.size();
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        auto words = detail::split_words(line);
        if (words.empty()) continue;
        std::string op(words[0]);
        std::transform(op.begin(), op.end(), op.begin(), [](unsigned char ch) { return std::tolower(ch); });

        std::vector<long long> args;
        for (std::size_t i = 1; i < words.size(); ++i) {
            auto v = detail::parse_int(words[i]);
            if (!v) throw ParseError(line_no, "expected a decimal integer, got '" + std::string(words[i]) + "'");
            args.push_back(*v);
        }

        if (op == "qubits") {
            if (circuit) throw ParseError(line_no, "duplicate qubits header");
            if (args.size() != 1) throw ParseError(line_no, "qubits takes exactly one argument");
            if (args[0] < 0 || args[0] > kMaxMaskQubits) {
                throw ParseError(line_no, "qubit count " + std::to_string(args[0]) + " out of range");
            }
            circuit = Circuit{static_cast<int>(args[0]), {}};
            continue;
        }
        if (!circuit) throw ParseError(line_no, "expected 'qubits <n>' before the first gate");

        auto want = [&](std::size_t count) {
            if (args.size() != count) {
                throw ParseError(line_no, op + " takes " + std::to_string(count) + " argument(s), got " +
                                              std::to_string(args.size()));
            }
        };
        auto qubit = [&](std::size_t i) {
            if (args[i] < 0 || args[i] >= circuit->n) {
                throw ParseError(line_no, "qubit index " + std::to_string(args[i]) + " overflows n = " +
                                              std::to_string(circuit->n));
            }
            return static_cast<int>(args[i]);
        };

        auto& gates = circuit->gates;
        if (op == "omega") {
            want(1);
            if (args[0] < 0 || args[0] > 7) throw ParseError(line_no, "omega exponent must be in 0..7");
            gates.push_back(Gate::omega(static_cast<int>(args[0])));
        } else if (op == "x") {
            want(1);
            gates.push_back(Gate::x(qubit(0)));
        } else if (op == "t") {
            want(1);
            gates.push_back(Gate::t(qubit(0)));
        } else if (op == "cnot") {
            want(2);
            gates.push_back(Gate::cnot(qubit(0), qubit(1)));
        } else if (op == "swap") {
            want(2);
            gates.push_back(Gate::swap(qubit(0), qubit(1)));
        } else if (op == "u") {
            want(2);
            gates.push_back(Gate::u(qubit(0), qubit(1)));
        } else if (op == "v") {
            want(3);
            gates.push_back(Gate::v(qubit(0), qubit(1), qubit(2)));
        } else {
            throw ParseError(line_no, "unknown gate '" + std::string(words[0]) + "'");
        }
    }
    if (!circuit) throw ParseError(line_no, "missing 'qubits <n>' header");
    return *circuit;
}

inline std::string print(const Circuit& c) {
    std::ostringstream os;
    os << "qubits " << c.n << '\n';
    for (const Gate& g : c.gates) {
        os << mnemonic(g.kind());
        if (g.kind() == GateKind::Omega) {
            os << ' ' << g.exponent();
        } else {
            for (int q : g.qubits()) os << ' ' << q;
        }
        os << '\n';
    }
    return os.str();
}

inline std::string to_string(const Gate& g) {
    std::string s = mnemonic(g.kind());
    if (g.kind() == GateKind::Omega) return s + "^" + std::to_string(g.exponent());
    s += '(';
    for (int i = 0; i < g.arity(); ++i) {
        if (i) s += ',';
        s += std::to_string(g.qubit(i));
    }
    return s + ')';
}

inline std::ostream& operator<<(std::ostream& os, const Gate& g) { return os << to_string(g); }

inline std::ostream& operator<<(std::ostream& os, const Circuit& c) { return os << print(c); }

} // namespace cdq
