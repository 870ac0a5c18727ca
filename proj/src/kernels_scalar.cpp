#include "tsbag/kernels.hpp"

namespace tsbag::kernels {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += a[k] * b[k];
    return s;
}

double sum_scalar(const double* a, std::size_t n) {
    double s = 0.0;
    for (std::size_t k = 0; k < n; ++k) s += a[k];
    return s;
}

void center_scalar(double* x, std::size_t n, std::size_t p, std::size_t ld) {
    if (n == 0) return;
    for (std::size_t c = 0; c < p; ++c) {
        double* col = x + c * ld;
        const double mean = sum_scalar(col, n) / static_cast<double>(n);
        for (std::size_t k = 0; k < n; ++k) col[k] -= mean;
    }
}

void gram_scalar(const double* x, std::size_t n, std::size_t p, std::size_t ld, double* out) {
    for (std::size_t a = 0; a < p; ++a) {
        for (std::size_t b = a; b < p; ++b) {
            const double v = dot_scalar(x + a * ld, x + b * ld, n);
            out[a * p + b] = v;
            out[b * p + a] = v;
        }
    }
}

}  // namespace

const KernelTable& scalar() {
    static const KernelTable table{"scalar", dot_scalar, sum_scalar, center_scalar, gram_scalar};
    return table;
}

}  // namespace tsbag::kernels
