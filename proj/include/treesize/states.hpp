#pragma once

// Named reference states used throughout the library and its tests.

#include <cmath>

#include "qstate.hpp"

namespace treesize::states {

[[nodiscard]] inline Amplitudes sum_of_kets(std::initializer_list<std::pair<double, const char *>> terms) {
    Amplitudes v;
    for (const auto &[c, bits] : terms) {
        const Amplitudes k = basis_ket(bits);
        if (v.empty()) {
            v.assign(k.size(), 0.0);
        }
        for (std::size_t i = 0; i < k.size(); ++i) {
            v[i] += c * k[i];
        }
    }
    return v;
}

inline PureState product3() { return PureState::normalize(basis_ket("000")); }

/// |0>(|01>+|10>)/sqrt2
inline PureState biseparable3() {
    return PureState::normalize(sum_of_kets({{1.0, "001"}, {1.0, "010"}}));
}

inline PureState ghz3() { return PureState::normalize(sum_of_kets({{1.0, "000"}, {1.0, "111"}})); }

inline PureState w3() {
    return PureState::normalize(sum_of_kets({{1.0, "001"}, {1.0, "010"}, {1.0, "100"}}));
}

/// Unnormalized |001>+|010>+|100>, the reference used by the A|BCD normal form.
inline Amplitudes w3_raw() { return sum_of_kets({{1.0, "001"}, {1.0, "010"}, {1.0, "100"}}); }

/// Unnormalized |000>+|111>.
inline Amplitudes ghz3_raw() { return sum_of_kets({{1.0, "000"}, {1.0, "111"}}); }

inline PureState bell() { return PureState::normalize(sum_of_kets({{1.0, "00"}, {1.0, "11"}})); }

/// (|110>+|101>-2|011>)/sqrt6
inline PureState w0() {
    return PureState::normalize(sum_of_kets({{1.0, "110"}, {1.0, "101"}, {-2.0, "011"}}));
}

/// (|001>+|010>-2|100>)/sqrt6
inline PureState w1() {
    return PureState::normalize(sum_of_kets({{1.0, "001"}, {1.0, "010"}, {-2.0, "100"}}));
}

/// The symmetric four-qubit state of maximal tree size,
/// (|0>|W0> + |1>|W1>)/sqrt2.
inline PureState psi4() {
    return PureState::normalize(sum_of_kets({{0.5, "0110"},
                                             {0.5, "0101"},
                                             {0.5, "1001"},
                                             {0.5, "1010"},
                                             {-1.0, "0011"},
                                             {-1.0, "1100"}}));
}

/// Dicke state with two excitations.
inline PureState dicke2() {
    return PureState::normalize(sum_of_kets({{1.0, "0011"},
                                             {1.0, "0101"},
                                             {1.0, "0110"},
                                             {1.0, "1001"},
                                             {1.0, "1010"},
                                             {1.0, "1100"}}));
}

inline PureState product4() { return PureState::normalize(basis_ket("0000")); }

inline PureState ghz4() { return PureState::normalize(sum_of_kets({{1.0, "0000"}, {1.0, "1111"}})); }

} // namespace treesize::states
