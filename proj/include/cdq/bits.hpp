#pragma once

#include <bit>
#include <cstdint>
#include <string>

namespace cdq {

/// Basis states and qubit subsets share one encoding: qubit q of an n-qubit
/// register is bit (n - 1 - q), so qubit 0 is the most significant bit and
/// the integer value of a state is its big-endian bitstring.
using BasisState = std::uint32_t;
using QubitMask = std::uint32_t;

inline constexpr int kMaxTableQubits = 24;
inline constexpr int kMaxMaskQubits = 32;

constexpr QubitMask qubit_bit(int n, int q) noexcept {
    return QubitMask{1} << (n - 1 - q);
}

constexpr bool test_qubit(QubitMask m, int n, int q) noexcept {
    return (m >> (n - 1 - q)) & 1u;
}

constexpr int parity(std::uint32_t v) noexcept {
    return std::popcount(v) & 1;
}

constexpr QubitMask full_mask(int n) noexcept {
    return n >= 32 ? ~QubitMask{0} : (QubitMask{1} << n) - 1;
}

inline std::string to_bitstring(QubitMask m, int n) {
    std::string s(static_cast<std::size_t>(n), '0');
    for (int q = 0; q < n; ++q) {
        if (test_qubit(m, n, q)) s[static_cast<std::size_t>(q)] = '1';
    }
    return s;
}

/// Inverse of to_bitstring; returns false on a bad character or length.
inline bool from_bitstring(const std::string& s, int n, QubitMask& out) {
    if (static_cast<int>(s.size()) != n) return false;
    QubitMask m = 0;
    for (int q = 0; q < n; ++q) {
        const char c = s[static_cast<std::size_t>(q)];
        if (c == '1') {
            m |= qubit_bit(n, q);
        } else if (c != '0') {
            return false;
        }
    }
    out = m;
    return true;
}

} // namespace cdq
