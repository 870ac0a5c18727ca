#include "tsbag/ci_tests.hpp"

#include "tsbag/errors.hpp"
#include "tsbag/kernels.hpp"

#include <algorithm>
#include <boost/math/distributions/students_t.hpp>
#include <cmath>

namespace tsbag {

std::vector<std::size_t> default_index_set(std::size_t length, int tau_max) {
    const auto start = 2 * static_cast<std::size_t>(tau_max);
    if (length <= start) {
        throw DegenerateWindow("T = " + std::to_string(length) + " leaves no samples for tau_max = " +
                               std::to_string(tau_max));
    }
    std::vector<std::size_t> idx(length - start);
    for (std::size_t s = 0; s < idx.size(); ++s) idx[s] = start + s;
    return idx;
}

namespace {

void check_index_set(std::span<const std::size_t> index_set, std::size_t length, int tau_max) {
    const auto start = 2 * static_cast<std::size_t>(tau_max);
    for (std::size_t s : index_set) {
        if (s < start || s >= length) {
            throw IndexOutOfRange("sample index " + std::to_string(s) + " outside [" +
                                  std::to_string(start) + ", " + std::to_string(length) + ")");
        }
    }
}

void check_variable(Variable v, std::size_t n_vars, int max_lag) {
    if (v.var < 0 || static_cast<std::size_t>(v.var) >= n_vars || v.lag < 0 || v.lag > max_lag) {
        throw IndexOutOfRange("variable (" + std::to_string(v.var) + ", lag " +
                              std::to_string(v.lag) + ") outside dataset window");
    }
}

double two_sided_t_pvalue(double r, long dof) {
    const double r2 = r * r;
    if (r2 >= 1.0) return 0.0;
    const double t = std::abs(r) * std::sqrt(static_cast<double>(dof) / (1.0 - r2));
    const boost::math::students_t_distribution<double> dist(static_cast<double>(dof));
    const double p = 2.0 * boost::math::cdf(boost::math::complement(dist, t));
    return std::clamp(p, 0.0, 1.0);
}

// Small dense buffer that avoids heap traffic for typical test sizes.
class Scratch {
public:
    explicit Scratch(std::size_t n) : size_(n) {
        if (n > kInline) heap_.resize(n);
    }
    double* data() { return size_ > kInline ? heap_.data() : inline_; }

private:
    static constexpr std::size_t kInline = 40 * 40;
    std::size_t size_;
    double inline_[kInline];
    std::vector<double> heap_;
};

}  // namespace

CITestResult parcorr_from_gram(std::span<const double> gram, std::size_t k, std::size_t n) {
    const std::size_t m = k + 2;
    if (gram.size() != m * m) throw ShapeMismatch("Gram matrix size does not match k + 2");
    if (n < k + 3) {
        throw TooFewSamples("partial correlation needs n >= |Z| + 3 (n = " + std::to_string(n) +
                            ", |Z| = " + std::to_string(k) + ")");
    }
    CITestResult res;
    res.n_samples = n;
    res.dof = static_cast<long>(n) - static_cast<long>(k) - 2;

    // Lower-triangular Cholesky factor of the Z block, plus the projections
    // u_x = L^{-1} G_zx and u_y = L^{-1} G_zy.
    Scratch lbuf(k * k + 2 * k);
    double* l = lbuf.data();
    double* ux = l + k * k;
    double* uy = ux + k;

    double max_diag = 1.0;
    for (std::size_t c = 0; c < k; ++c) max_diag = std::max(max_diag, gram[c * m + c]);

    auto factor = [&](double ridge) {
        for (std::size_t c = 0; c < k; ++c) {
            for (std::size_t r = c; r < k; ++r) {
                double v = gram[r * m + c] + (r == c ? ridge : 0.0);
                for (std::size_t q = 0; q < c; ++q) v -= l[r * k + q] * l[c * k + q];
                if (r == c) {
                    if (!(v > 1e-12 * (gram[c * m + c] + ridge))) return false;
                    l[c * k + c] = std::sqrt(v);
                } else {
                    l[r * k + c] = v / l[c * k + c];
                }
            }
        }
        return true;
    };
    // Singular designs fall back to a ridge-regularised solve.
    if (!factor(0.0)) factor(1e-10 * max_diag);

    auto forward = [&](std::size_t col, double* u) {
        for (std::size_t r = 0; r < k; ++r) {
            double v = gram[r * m + col];
            for (std::size_t q = 0; q < r; ++q) v -= l[r * k + q] * u[q];
            u[r] = v / l[r * k + r];
        }
    };
    forward(k, ux);
    forward(k + 1, uy);

    double rxx = gram[k * m + k];
    double ryy = gram[(k + 1) * m + (k + 1)];
    double rxy = gram[k * m + (k + 1)];
    for (std::size_t q = 0; q < k; ++q) {
        rxx -= ux[q] * ux[q];
        ryy -= uy[q] * uy[q];
        rxy -= ux[q] * uy[q];
    }
    const double floor = 1e-12 * static_cast<double>(n);
    if (!(rxx >= floor) || !(ryy >= floor)) {
        res.statistic = 0.0;
        res.p_value = 1.0;
        return res;
    }
    const double r = std::clamp(rxy / std::sqrt(rxx * ryy), -1.0, 1.0);
    res.statistic = r;
    res.p_value = two_sided_t_pvalue(r, res.dof);
    return res;
}

SampleSet build_samples(const TimeSeriesDataset& data, Variable x, Variable y,
                        std::span<const Variable> z, int tau_max,
                        std::span<const std::size_t> index_set) {
    std::vector<std::size_t> fallback;
    if (index_set.empty()) {
        fallback = default_index_set(data.length(), tau_max);
        index_set = fallback;
    } else {
        if (data.length() <= 2 * static_cast<std::size_t>(tau_max)) {
            throw DegenerateWindow("T <= 2 tau_max");
        }
        check_index_set(index_set, data.length(), tau_max);
    }
    const int max_lag = 2 * tau_max;
    check_variable(x, data.n_vars(), max_lag);
    check_variable(y, data.n_vars(), max_lag);
    for (Variable v : z) check_variable(v, data.n_vars(), max_lag);

    const std::size_t n = index_set.size();
    SampleSet out;
    out.k = z.size();
    out.x.resize(n);
    out.y.resize(n);
    out.z.resize(n * z.size());
    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t s = index_set[r];
        out.x[r] = data(s - x.lag, x.var);
        out.y[r] = data(s - y.lag, y.var);
        for (std::size_t c = 0; c < z.size(); ++c) out.z[c * n + r] = data(s - z[c].lag, z[c].var);
    }
    return out;
}

CITestResult parcorr_test(const SampleSet& samples) {
    const std::size_t n = samples.size();
    const std::size_t k = samples.k;
    if (samples.y.size() != n || samples.z.size() != n * k) {
        throw ShapeMismatch("sample set columns differ in length");
    }
    if (n < k + 3) {
        throw TooFewSamples("partial correlation needs n >= |Z| + 3 (n = " + std::to_string(n) +
                            ", |Z| = " + std::to_string(k) + ")");
    }
    const std::size_t m = k + 2;
    std::vector<double> cols(n * m);
    std::copy(samples.z.begin(), samples.z.end(), cols.begin());
    std::copy(samples.x.begin(), samples.x.end(), cols.begin() + static_cast<long>(k * n));
    std::copy(samples.y.begin(), samples.y.end(), cols.begin() + static_cast<long>((k + 1) * n));
    const auto& kern = kernels::active();
    kern.center(cols.data(), n, m, n);
    std::vector<double> gram(m * m);
    kern.gram(cols.data(), n, m, n, gram.data());
    return parcorr_from_gram(gram, k, n);
}

ParCorrTest::ParCorrTest(const TimeSeriesDataset& data, int tau_max,
                         std::span<const std::size_t> index_set)
    : n_vars_(data.n_vars()), max_lag_(2 * tau_max) {
    std::vector<std::size_t> fallback;
    if (index_set.empty()) {
        fallback = default_index_set(data.length(), tau_max);
        index_set = fallback;
    } else {
        if (data.length() <= 2 * static_cast<std::size_t>(tau_max)) {
            throw DegenerateWindow("T <= 2 tau_max");
        }
        check_index_set(index_set, data.length(), tau_max);
    }
    n_ = index_set.size();
    p_ = n_vars_ * static_cast<std::size_t>(max_lag_ + 1);

    // Column (lag * N + var) holds X^var_{s - lag} for every s in the index set.
    std::vector<double> design(n_ * p_);
    for (std::size_t r = 0; r < n_; ++r) {
        const std::size_t s = index_set[r];
        for (int lag = 0; lag <= max_lag_; ++lag) {
            const auto row = data.row(s - static_cast<std::size_t>(lag));
            for (std::size_t v = 0; v < n_vars_; ++v) {
                design[(static_cast<std::size_t>(lag) * n_vars_ + v) * n_ + r] = row[v];
            }
        }
    }
    const auto& kern = kernels::active();
    kern.center(design.data(), n_, p_, n_);
    gram_.resize(p_ * p_);
    kern.gram(design.data(), n_, p_, n_, gram_.data());
}

std::size_t ParCorrTest::column(Variable v) const {
    check_variable(v, n_vars_, max_lag_);
    return static_cast<std::size_t>(v.lag) * n_vars_ + static_cast<std::size_t>(v.var);
}

CITestResult ParCorrTest::test(Variable x, Variable y, std::span<const Variable> z) const {
    const std::size_t k = z.size();
    const std::size_t m = k + 2;
    std::vector<std::size_t> cols;
    cols.reserve(m);
    for (Variable v : z) cols.push_back(column(v));
    cols.push_back(column(x));
    cols.push_back(column(y));

    Scratch sub_buf(m * m);
    double* sub = sub_buf.data();
    for (std::size_t a = 0; a < m; ++a) {
        const double* src = gram_.data() + cols[a] * p_;
        for (std::size_t b = 0; b < m; ++b) sub[a * m + b] = src[cols[b]];
    }
    return parcorr_from_gram(std::span<const double>(sub, m * m), k, n_);
}

std::unique_ptr<CITest> make_ci_test(const CITestSpec& spec, const TimeSeriesDataset& data,
                                     int tau_max, std::span<const std::size_t> index_set) {
    if (spec.kind == CITestKind::Oracle) {
        if (!spec.truth) throw ConfigError("oracle CI test requires a ground-truth graph");
        return std::make_unique<OracleTest>(*spec.truth, tau_max);
    }
    return std::make_unique<ParCorrTest>(data, tau_max, index_set);
}

}  // namespace tsbag
