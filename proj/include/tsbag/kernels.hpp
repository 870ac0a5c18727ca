#pragma once

#include <cstddef>

// Dense arithmetic behind the partial-correlation test. Every routine has a
// portable scalar reference and, on x86-64, an AVX2/FMA variant chosen at
// runtime. Within one table gram(x)[a][b] is bit-identical to
// dot(col a, col b), so sub-blocks of a cached Gram matrix reproduce the Gram
// matrix of the selected columns exactly.
namespace tsbag::kernels {

struct KernelTable {
    const char* name;
    double (*dot)(const double* a, const double* b, std::size_t n);
    double (*sum)(const double* a, std::size_t n);
    /// Subtracts each column's mean. Column-major, leading dimension ld.
    void (*center)(double* x, std::size_t n, std::size_t p, std::size_t ld);
    /// out (p x p, row-major, both triangles) = X^T X for column-major X.
    void (*gram)(const double* x, std::size_t n, std::size_t p, std::size_t ld, double* out);
};

const KernelTable& scalar();

/// AVX2/FMA table, or nullptr when not built for x86-64 or unsupported by the CPU.
const KernelTable* avx2();

/// Table used by the library. Picks AVX2 when available unless the
/// environment variable TSBAG_KERNELS=scalar is set at first use.
const KernelTable& active();

}  // namespace tsbag::kernels
