// Short tour: classify three-qubit states, build minimal trees, look at the
// four-qubit extremes and the mixed-state thresholds.

#include <cstdio>

#include "treesize/all.hpp"

using namespace treesize;

int main() {
    std::puts("three qubits");
    for (const char *f : {"|0>|0>|0>", "|0>(|00>+|11>)/sqrt2", "(|000>+|111>)/sqrt2", "(|001>+|010>+|100>)/sqrt3"}) {
        const auto s = evaluate(parse_braket(f));
        const auto r = tree_size(s);
        std::printf("  %-28s %-12s ts=%d  %s\n", f, to_string(classify3(s).kind).c_str(), r.upper,
                    print_braket(r.tree).c_str());
    }

    // W sits on the boundary of GHZ: a tiny |111> component changes the class
    auto w = states::w3_raw();
    w[7] += 1e-3;
    std::printf("  W + 1e-3|111>                %s\n", to_string(classify3(PureState::normalize(w)).kind).c_str());

    std::puts("four qubits");
    const auto psi = tree_size(states::psi4());
    std::printf("  Psi4   ts=%d exact=%d  %s\n", psi.upper, psi.exact, print_braket(psi.tree).c_str());
    const auto d2 = tree_size(states::dicke2());
    const auto v = is_irreducible(states::dicke2());
    std::printf("  Dicke2 %d <= ts <= %d, reducible at qubit %d, escapes to %s\n", d2.lower, d2.upper,
                v.witness->partition_qubit, to_string(v.witness->escaped_class).c_str());

    std::puts("witness");
    std::printf("  Psi4 expectation %.4f, floor %d\n", witness_eval(DensityMatrix::pure(states::psi4())).expectation,
                witness_eval(DensityMatrix::pure(states::psi4())).certified_ts_floor.value_or(0));
    std::printf("  <W'> = -0.151 -> %.4f\n", witness_from_wprime(-0.151).expectation);

    std::puts("generalized Werner state");
    for (const double p : {0.1, 0.3, 0.5, 0.9}) {
        const auto r = werner_ts(p);
        std::printf("  p=%.1f ts=%d %s\n", p, r.ts, r.cls.c_str());
    }
    return 0;
}
