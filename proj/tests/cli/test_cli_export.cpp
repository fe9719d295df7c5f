// Reads matrices written by `focklab export` and compares them with the
// library's own assembly.
#include <cstdio>

#include "focklab/transforms.hpp"
#include "focklab/zhu.hpp"

using namespace focklab;

namespace {

double max_diff(const OperatorMatrix& a, const OperatorMatrix& b) {
    if (a.size() != b.size()) return 1e300;
    double d = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a.size(); ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 3) {
        std::fprintf(stderr, "usage: test_cli_export weyl.bin bump.csv\n");
        return 2;
    }
    const Complex a[1] = {Complex(0.5, 0.2)};
    const OperatorMatrix weyl = read_binary(argv[1]);
    const double dw = max_diff(weyl, weyl_matrix(a, 10));
    const bool header = weyl.truncation() == 10 && weyl.s_domain() == 1.0 && weyl.basis() == Basis::fock;
    const OperatorMatrix bump = read_csv(argv[2]);
    const double db = max_diff(bump, conjugated_multiplier_matrix(bump_multiplier(), 1, 8));
    std::printf("weyl: header %s, max diff %.3e; bump csv: max diff %.3e\n", header ? "ok" : "wrong", dw, db);
    // binary is bit-exact, csv carries 17 significant digits
    return header && dw == 0.0 && db <= 1e-15 ? 0 : 1;
}
