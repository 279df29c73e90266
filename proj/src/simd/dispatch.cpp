#include <cstdlib>
#include <string>

#include "qbattery/simd/kernels.hpp"

namespace qb::simd {

// Defined in kernels_avx2.cpp; returns nullptr on non-x86 builds.
const Kernels* avx2_table_or_null();

const Kernels* avx2_kernels() {
#if defined(__x86_64__) || defined(_M_X64)
    static const Kernels* ptr = [] {
        if (__builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma")) {
            return avx2_table_or_null();
        }
        return static_cast<const Kernels*>(nullptr);
    }();
    return ptr;
#else
    return nullptr;
#endif
}

const Kernels& active_kernels() {
    static const Kernels* ptr = [] {
        const char* env = std::getenv("QBATTERY_SIMD");
        const std::string pref = env ? env : "auto";
        if (pref == "scalar") {
            return &scalar_kernels();
        }
        const Kernels* vec = avx2_kernels();
        if (pref == "avx2") {
            return vec ? vec : &scalar_kernels();
        }
        return vec ? vec : &scalar_kernels();
    }();
    return *ptr;
}

}  // namespace qb::simd
