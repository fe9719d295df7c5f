#include <cstdlib>
#include <stdexcept>
#include <string>

#include "focklab/kernels.hpp"

namespace focklab::kernels {

namespace {

constexpr KernelTable kScalar{Isa::scalar,  scalar::hermite_table, scalar::dot3,
                              scalar::gram, scalar::cmatvec,       scalar::cmatvec_adjoint};

#if FOCKLAB_HAVE_AVX2_KERNELS
constexpr KernelTable kAvx2{Isa::avx2, avx2::hermite_table, avx2::dot3,
                            avx2::gram, avx2::cmatvec,      avx2::cmatvec_adjoint};
#endif

const KernelTable& select_active() {
    if (const char* forced = std::getenv("FOCKLAB_ISA")) {
        const std::string name(forced);
        if (name == "scalar") return kScalar;
        if (name == "avx2") return table(Isa::avx2);
        throw std::runtime_error("FOCKLAB_ISA: unknown instruction set '" + name + "'");
    }
    if (isa_supported(Isa::avx2)) return table(Isa::avx2);
    return kScalar;
}

}  // namespace

std::string_view isa_name(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return "scalar";
        case Isa::avx2:
            return "avx2";
    }
    return "unknown";
}

bool isa_supported(Isa isa) {
    switch (isa) {
        case Isa::scalar:
            return true;
        case Isa::avx2:
#if FOCKLAB_HAVE_AVX2_KERNELS && (defined(__GNUC__) || defined(__clang__))
            return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
            return false;
#endif
    }
    return false;
}

const KernelTable& table(Isa isa) {
    if (!isa_supported(isa))
        throw std::runtime_error("instruction set not supported on this CPU: " +
                                 std::string(isa_name(isa)));
#if FOCKLAB_HAVE_AVX2_KERNELS
    if (isa == Isa::avx2) return kAvx2;
#endif
    return kScalar;
}

const KernelTable& active() {
    static const KernelTable& chosen = select_active();
    return chosen;
}

}  // namespace focklab::kernels
