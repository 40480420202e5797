#include "kp2/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace kp2::kern {
namespace {

Isa pick_initial() {
    if (const char* env = std::getenv("KP2_SIMD")) {
        if (std::strcmp(env, "scalar") == 0) return Isa::Scalar;
        if (std::strcmp(env, "avx2") == 0) return Isa::Avx2;
    }
    return __builtin_cpu_supports("avx2") ? Isa::Avx2 : Isa::Scalar;
}

Isa g_isa = pick_initial();

} // namespace

Isa active_isa() { return g_isa; }

const char* isa_name() { return g_isa == Isa::Avx2 ? "avx2" : "scalar"; }

void force_isa(Isa isa) { g_isa = isa; }

const Ops& ops() { return g_isa == Isa::Avx2 ? avx2_ops() : scalar_ops(); }

} // namespace kp2::kern
