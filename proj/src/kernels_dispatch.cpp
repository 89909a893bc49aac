#include "ob2d/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace ob2d::kernels {

#if defined(OB2D_BUILD_AVX2)
const KernelTable& avx2_kernels();
#endif

const KernelTable* avx2_table() {
#if defined(OB2D_BUILD_AVX2)
    static const bool supported = __builtin_cpu_supports("avx2");
    return supported ? &avx2_kernels() : nullptr;
#else
    return nullptr;
#endif
}

const KernelTable& active() {
    static const KernelTable& table = [] () -> const KernelTable& {
        const char* env = std::getenv("OB2D_SIMD");
        if (env != nullptr && std::string_view(env) == "scalar") return scalar_table();
        if (const KernelTable* t = avx2_table()) return *t;
        return scalar_table();
    }();
    return table;
}

} // namespace ob2d::kernels
