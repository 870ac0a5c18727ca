#include "tsbag/kernels.hpp"

#include <cstdlib>
#include <string_view>

namespace tsbag::kernels {

const KernelTable* avx2_table();

namespace {
bool cpu_supports_avx2_fma() {
#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
    return false;
#endif
}
}  // namespace

const KernelTable* avx2() {
    static const KernelTable* table = cpu_supports_avx2_fma() ? avx2_table() : nullptr;
    return table;
}

const KernelTable& active() {
    static const KernelTable& table = [] () -> const KernelTable& {
        const char* env = std::getenv("TSBAG_KERNELS");
        if (env && std::string_view(env) == "scalar") return scalar();
        if (const KernelTable* t = avx2()) return *t;
        return scalar();
    }();
    return table;
}

}  // namespace tsbag::kernels
