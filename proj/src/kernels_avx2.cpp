#include "tsbag/kernels.hpp"

#if defined(__x86_64__) && defined(__AVX2__) && defined(__FMA__)

#include <immintrin.h>

namespace tsbag::kernels {
namespace {

// Two 4-lane accumulators over blocks of 8, one more block of 4 if present,
// then a scalar tail. dot() and the 4-wide gram() path share this exact
// sequence of operations per column pair.
inline double reduce(__m256d acc0, __m256d acc1) {
    const __m256d acc = _mm256_add_pd(acc0, acc1);
    const __m128d lo = _mm256_castpd256_pd128(acc);
    const __m128d hi = _mm256_extractf128_pd(acc, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
        acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k + 4), _mm256_loadu_pd(b + k + 4), acc1);
    }
    if (k + 4 <= n) {
        acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + k), _mm256_loadu_pd(b + k), acc0);
        k += 4;
    }
    double s = reduce(acc0, acc1);
    for (; k < n; ++k) s += a[k] * b[k];
    return s;
}

double sum_avx2(const double* a, std::size_t n) {
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        acc0 = _mm256_add_pd(_mm256_loadu_pd(a + k), acc0);
        acc1 = _mm256_add_pd(_mm256_loadu_pd(a + k + 4), acc1);
    }
    if (k + 4 <= n) {
        acc0 = _mm256_add_pd(_mm256_loadu_pd(a + k), acc0);
        k += 4;
    }
    double s = reduce(acc0, acc1);
    for (; k < n; ++k) s += a[k];
    return s;
}

void center_avx2(double* x, std::size_t n, std::size_t p, std::size_t ld) {
    if (n == 0) return;
    for (std::size_t c = 0; c < p; ++c) {
        double* col = x + c * ld;
        const double mean = sum_avx2(col, n) / static_cast<double>(n);
        const __m256d m = _mm256_set1_pd(mean);
        std::size_t k = 0;
        for (; k + 4 <= n; k += 4) {
            _mm256_storeu_pd(col + k, _mm256_sub_pd(_mm256_loadu_pd(col + k), m));
        }
        for (; k < n; ++k) col[k] -= mean;
    }
}

// Dots of column a against four columns b0..b3 at once; a is loaded once per block.
void dot4_avx2(const double* a, const double* b0, const double* b1, const double* b2,
               const double* b3, std::size_t n, double* out) {
    __m256d s00 = _mm256_setzero_pd(), s01 = _mm256_setzero_pd();
    __m256d s10 = _mm256_setzero_pd(), s11 = _mm256_setzero_pd();
    __m256d s20 = _mm256_setzero_pd(), s21 = _mm256_setzero_pd();
    __m256d s30 = _mm256_setzero_pd(), s31 = _mm256_setzero_pd();
    std::size_t k = 0;
    for (; k + 8 <= n; k += 8) {
        const __m256d x0 = _mm256_loadu_pd(a + k);
        const __m256d x1 = _mm256_loadu_pd(a + k + 4);
        s00 = _mm256_fmadd_pd(x0, _mm256_loadu_pd(b0 + k), s00);
        s01 = _mm256_fmadd_pd(x1, _mm256_loadu_pd(b0 + k + 4), s01);
        s10 = _mm256_fmadd_pd(x0, _mm256_loadu_pd(b1 + k), s10);
        s11 = _mm256_fmadd_pd(x1, _mm256_loadu_pd(b1 + k + 4), s11);
        s20 = _mm256_fmadd_pd(x0, _mm256_loadu_pd(b2 + k), s20);
        s21 = _mm256_fmadd_pd(x1, _mm256_loadu_pd(b2 + k + 4), s21);
        s30 = _mm256_fmadd_pd(x0, _mm256_loadu_pd(b3 + k), s30);
        s31 = _mm256_fmadd_pd(x1, _mm256_loadu_pd(b3 + k + 4), s31);
    }
    if (k + 4 <= n) {
        const __m256d x0 = _mm256_loadu_pd(a + k);
        s00 = _mm256_fmadd_pd(x0, _mm256_loadu_pd(b0 + k), s00);
        s10 = _mm256_fmadd_pd(x0, _mm256_loadu_pd(b1 + k), s10);
        s20 = _mm256_fmadd_pd(x0, _mm256_loadu_pd(b2 + k), s20);
        s30 = _mm256_fmadd_pd(x0, _mm256_loadu_pd(b3 + k), s30);
        k += 4;
    }
    double r0 = reduce(s00, s01), r1 = reduce(s10, s11);
    double r2 = reduce(s20, s21), r3 = reduce(s30, s31);
    for (; k < n; ++k) {
        r0 += a[k] * b0[k];
        r1 += a[k] * b1[k];
        r2 += a[k] * b2[k];
        r3 += a[k] * b3[k];
    }
    out[0] = r0;
    out[1] = r1;
    out[2] = r2;
    out[3] = r3;
}

void gram_avx2(const double* x, std::size_t n, std::size_t p, std::size_t ld, double* out) {
    double quad[4];
    for (std::size_t a = 0; a < p; ++a) {
        const double* ca = x + a * ld;
        std::size_t b = a;
        for (; b + 4 <= p; b += 4) {
            dot4_avx2(ca, x + b * ld, x + (b + 1) * ld, x + (b + 2) * ld, x + (b + 3) * ld, n,
                      quad);
            for (std::size_t q = 0; q < 4; ++q) {
                out[a * p + b + q] = quad[q];
                out[(b + q) * p + a] = quad[q];
            }
        }
        for (; b < p; ++b) {
            const double v = dot_avx2(ca, x + b * ld, n);
            out[a * p + b] = v;
            out[b * p + a] = v;
        }
    }
}

}  // namespace

const KernelTable* avx2_table() {
    static const KernelTable table{"avx2", dot_avx2, sum_avx2, center_avx2, gram_avx2};
    return &table;
}

}  // namespace tsbag::kernels

#else

namespace tsbag::kernels {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace tsbag::kernels

#endif
