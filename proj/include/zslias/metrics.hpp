#ifndef ZSLIAS_METRICS_HPP
#define ZSLIAS_METRICS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "zslias/linalg.hpp"

namespace zslias {

// Macro-averaged top-1 accuracy: mean over classes of within-class accuracy.
inline double per_class_accuracy(const std::vector<int>& preds, const std::vector<int>& labels) {
    if (preds.size() != labels.size())
        throw std::invalid_argument("per_class_accuracy: length mismatch");
    if (preds.empty()) throw std::invalid_argument("per_class_accuracy: empty input");
    std::map<int, std::pair<int, int>> per_class;  // class -> (correct, total)
    for (std::size_t i = 0; i < preds.size(); ++i) {
        auto& [correct, total] = per_class[labels[i]];
        ++total;
        if (preds[i] == labels[i]) ++correct;
    }
    double acc = 0.0;
    for (const auto& [cls, ct] : per_class) {
        if (ct.second == 0) throw std::invalid_argument("per_class_accuracy: empty class");
        acc += static_cast<double>(ct.first) / ct.second;
    }
    return acc / static_cast<double>(per_class.size());
}

struct ConfusionMatrix {
    Matrix counts;  // L x L, row = true class, column = predicted
    std::vector<std::string> class_names;

    Matrix normalized_percent() const {
        Matrix out(counts.rows(), counts.cols());
        for (std::size_t r = 0; r < counts.rows(); ++r) {
            double row_sum = 0.0;
            for (std::size_t c = 0; c < counts.cols(); ++c) row_sum += counts(r, c);
            for (std::size_t c = 0; c < counts.cols(); ++c)
                out(r, c) = row_sum > 0 ? 100.0 * counts(r, c) / row_sum : 0.0;
        }
        return out;
    }
};

inline ConfusionMatrix confusion(const std::vector<int>& preds, const std::vector<int>& labels,
                                 int n_classes, const std::vector<std::string>& names = {}) {
    if (preds.size() != labels.size()) throw std::invalid_argument("confusion: length mismatch");
    ConfusionMatrix cm;
    cm.counts = Matrix(n_classes, n_classes);
    cm.class_names = names;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (labels[i] < 0 || labels[i] >= n_classes || preds[i] < 0 || preds[i] >= n_classes)
            throw std::invalid_argument("confusion: label out of range at row " +
                                        std::to_string(i));
        cm.counts(labels[i], preds[i]) += 1.0;
    }
    return cm;
}

namespace detail {

// Exact W1 between two 1-D empirical distributions (possibly unequal sizes):
// integral of |F_x^{-1} - F_y^{-1}| over merged quantile breakpoints.
inline double wasserstein1_1d(std::vector<double> x, std::vector<double> y) {
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const std::size_t n = x.size(), m = y.size();
    double total = 0.0, q = 0.0;
    std::size_t i = 0, j = 0;
    while (i < n && j < m) {
        const double qi = static_cast<double>(i + 1) / n;
        const double qj = static_cast<double>(j + 1) / m;
        const double next = std::min(qi, qj);
        total += (next - q) * std::abs(x[i] - y[j]);
        q = next;
        if (qi <= next) ++i;
        if (qj <= next) ++j;
    }
    return total;
}

} // namespace detail

// Mean over random unit projections of the 1-D W1 distance between the
// projected empirical distributions.
inline double sliced_wasserstein(const Matrix& x, const Matrix& y, int n_projections,
                                 std::uint64_t seed) {
    if (x.cols() != y.cols()) throw std::invalid_argument("sliced_wasserstein: dim mismatch");
    if (x.rows() == 0 || y.rows() == 0)
        throw std::invalid_argument("sliced_wasserstein: empty sample set");
    if (n_projections < 1)
        throw std::invalid_argument("sliced_wasserstein: n_projections >= 1 required");
    const std::size_t d = x.cols();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double total = 0.0;
    std::vector<double> dir(d), px(x.rows()), py(y.rows());
    for (int p = 0; p < n_projections; ++p) {
        double norm = 0.0;
        for (auto& v : dir) {
            v = gauss(rng);
            norm += v * v;
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            dir[0] = 1.0;
            norm = 1.0;
        }
        for (auto& v : dir) v /= norm;
        for (std::size_t r = 0; r < x.rows(); ++r) px[r] = dot(x.row(r), dir);
        for (std::size_t r = 0; r < y.rows(); ++r) py[r] = dot(y.row(r), dir);
        total += detail::wasserstein1_1d(px, py);
    }
    return total / n_projections;
}

struct GaussianDivergences {
    double kl = 0.0;
    double hellinger = 0.0;
    double bhattacharyya = 0.0;
};

// Fit diagonal Gaussians (population variance, floored at 1e-8) to each
// sample set and evaluate the closed forms.
inline GaussianDivergences gaussian_divergences(const Matrix& x, const Matrix& y) {
    if (x.cols() != y.cols()) throw std::invalid_argument("gaussian_divergences: dim mismatch");
    if (x.rows() < 2 || y.rows() < 2)
        throw std::invalid_argument("gaussian_divergences: need >= 2 samples per set");
    const std::size_t d = x.cols();
    auto fit = [&](const Matrix& m, std::vector<double>& mean, std::vector<double>& var) {
        mean.assign(d, 0.0);
        var.assign(d, 0.0);
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < d; ++c) mean[c] += m(r, c);
        for (auto& v : mean) v /= static_cast<double>(m.rows());
        for (std::size_t r = 0; r < m.rows(); ++r)
            for (std::size_t c = 0; c < d; ++c) {
                const double diff = m(r, c) - mean[c];
                var[c] += diff * diff;
            }
        for (auto& v : var) v = std::max(v / static_cast<double>(m.rows()), 1e-8);
    };
    std::vector<double> mx, vx, my, vy;
    fit(x, mx, vx);
    fit(y, my, vy);

    GaussianDivergences out;
    double bd = 0.0;
    for (std::size_t c = 0; c < d; ++c) {
        const double md = mx[c] - my[c];
        out.kl += 0.5 * (std::log(vy[c] / vx[c]) + (vx[c] + md * md) / vy[c] - 1.0);
        const double vbar = 0.5 * (vx[c] + vy[c]);
        bd += 0.125 * md * md / vbar + 0.5 * std::log(vbar / std::sqrt(vx[c] * vy[c]));
    }
    out.bhattacharyya = bd;
    out.hellinger = std::sqrt(std::max(0.0, 1.0 - std::exp(-bd)));
    return out;
}

} // namespace zslias

#endif
