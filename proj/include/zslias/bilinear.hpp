#ifndef ZSLIAS_BILINEAR_HPP
#define ZSLIAS_BILINEAR_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "zslias/dataset.hpp"
#include "zslias/linalg.hpp"
#include "zslias/selection.hpp"

namespace zslias {

enum class RankMode { kUniform, kAleRank };

struct BilinearModel {
    Matrix w;  // d x N_a
    double alpha = 0.0;
    double lr = 1e-3;
    int epochs = 1;
};

struct BilinearHyper {
    double alpha = 1e-3;
    double lr = 1e-3;
    int epochs = 100;
    RankMode r_mode = RankMode::kUniform;
    std::uint64_t seed = 0;
};

// F(x,y;s,W) = x^T W (s o a_y)
inline double score(const std::vector<double>& x, int y, const Matrix& w,
                    const AttributeMatrix& a, const SelectionVector& s) {
    const std::size_t d = w.rows();
    const std::size_t na = w.cols();
    if (x.size() != d || a.n_attributes() != na || s.mask.size() != na)
        throw std::invalid_argument("score: dimension mismatch");
    double out = 0.0;
    for (std::size_t m = 0; m < na; ++m) {
        if (!s.mask[m]) continue;
        double col = 0.0;
        for (std::size_t c = 0; c < d; ++c) col += x[c] * w(c, m);
        out += col * a.values(y, m);
    }
    return out;
}

inline int predict(const std::vector<double>& x, const Matrix& w, const AttributeMatrix& a,
                   const SelectionVector& s, const std::vector<int>& candidates) {
    if (candidates.empty()) throw std::invalid_argument("predict: empty candidate set");
    int best = candidates[0];
    double best_score = score(x, best, w, a, s);
    for (std::size_t i = 1; i < candidates.size(); ++i) {
        double v = score(x, candidates[i], w, a, s);
        // ties -> lowest class index
        if (v > best_score || (v == best_score && candidates[i] < best)) {
            best_score = v;
            best = candidates[i];
        }
    }
    return best;
}

namespace detail {

// ALE-style weight: all violating terms of a sample share the weight
// (sum_{k<=r} 1/k)/r where r is the number of active hinges.
inline double ale_weight(int n_active) {
    if (n_active <= 0) return 0.0;
    double h = 0.0;
    for (int k = 1; k <= n_active; ++k) h += 1.0 / k;
    return h / n_active;
}

struct HingeTerms {
    // per sample: list of (candidate y, bracket value) with bracket > 0
    std::vector<std::vector<std::pair<int, double>>> active;
};

inline HingeTerms active_hinges(const Dataset& batch, const Matrix& w, const AttributeMatrix& a,
                                const SelectionVector& s, const std::vector<int>& candidates) {
    HingeTerms out;
    out.active.resize(batch.size());
    for (std::size_t n = 0; n < batch.size(); ++n) {
        auto x = batch.features.row(n);
        const int yn = batch.labels[n];
        const double f_true = score(x, yn, w, a, s);
        for (int y : candidates) {
            const double margin = (y == yn) ? 0.0 : 1.0;
            const double bracket = margin + score(x, y, w, a, s) - f_true;
            if (bracket > 0.0) out.active[n].push_back({y, bracket});
        }
    }
    return out;
}

} // namespace detail

// Structured hinge ranking loss, mean over the batch. Excludes the
// regularizer; the full objective adds (alpha/4)*||W||_F^2.
inline double hinge_loss(const Dataset& batch, const Matrix& w, const AttributeMatrix& a,
                         const SelectionVector& s, const std::vector<int>& candidates,
                         RankMode r_mode) {
    if (batch.size() == 0) return 0.0;
    auto terms = detail::active_hinges(batch, w, a, s, candidates);
    double total = 0.0;
    for (const auto& sample : terms.active) {
        const double r = r_mode == RankMode::kUniform
                             ? 1.0
                             : detail::ale_weight(static_cast<int>(sample.size()));
        for (const auto& [y, bracket] : sample) total += r * bracket;
    }
    return total / static_cast<double>(batch.size());
}

inline double regularizer(const Matrix& w, double alpha) {
    return 0.25 * alpha * frobenius_norm_sq(w);
}

inline double objective(const Dataset& batch, const Matrix& w, const AttributeMatrix& a,
                        const SelectionVector& s, const std::vector<int>& candidates,
                        RankMode r_mode, double alpha) {
    return hinge_loss(batch, w, a, s, candidates, r_mode) + regularizer(w, alpha);
}

// Subgradient of the full objective: active hinge terms contribute
// outer(x, s o (a_y - a_yn)), averaged over the batch, plus (alpha/2)*W.
inline Matrix grad_w(const Dataset& batch, const Matrix& w, const AttributeMatrix& a,
                     const SelectionVector& s, const std::vector<int>& candidates,
                     RankMode r_mode, double alpha) {
    const std::size_t d = w.rows();
    const std::size_t na = w.cols();
    Matrix g(d, na);
    auto terms = detail::active_hinges(batch, w, a, s, candidates);
    for (std::size_t n = 0; n < batch.size(); ++n) {
        if (terms.active[n].empty()) continue;
        auto x = batch.features.row(n);
        const int yn = batch.labels[n];
        const double r = r_mode == RankMode::kUniform
                             ? 1.0
                             : detail::ale_weight(static_cast<int>(terms.active[n].size()));
        for (const auto& [y, bracket] : terms.active[n]) {
            (void)bracket;
            for (std::size_t m = 0; m < na; ++m) {
                if (!s.mask[m]) continue;
                const double diff = a.values(y, m) - a.values(yn, m);
                if (diff == 0.0) continue;
                for (std::size_t c = 0; c < d; ++c) g(c, m) += r * x[c] * diff;
            }
        }
    }
    const double inv_n = batch.size() ? 1.0 / static_cast<double>(batch.size()) : 0.0;
    for (std::size_t c = 0; c < d; ++c)
        for (std::size_t m = 0; m < na; ++m) g(c, m) = g(c, m) * inv_n + 0.5 * alpha * w(c, m);
    return g;
}

inline Matrix init_w(std::size_t d, std::size_t na, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 0.01 / std::sqrt(static_cast<double>(d)));
    Matrix w(d, na);
    for (auto& v : w.data()) v = gauss(rng);
    return w;
}

struct BilinearTrainResult {
    BilinearModel model;
    std::vector<double> loss_history;  // full objective per epoch, post-step
};

inline BilinearTrainResult train_bilinear(const Dataset& data, const AttributeMatrix& a,
                                          const SelectionVector& s,
                                          const std::vector<int>& candidates,
                                          const BilinearHyper& hyper) {
    if (hyper.epochs < 1) throw std::invalid_argument("train_bilinear: epochs >= 1 required");
    BilinearTrainResult out;
    out.model.alpha = hyper.alpha;
    out.model.lr = hyper.lr;
    out.model.epochs = hyper.epochs;
    out.model.w = init_w(data.dim(), a.n_attributes(), hyper.seed);
    for (int e = 0; e < hyper.epochs; ++e) {
        Matrix g = grad_w(data, out.model.w, a, s, candidates, hyper.r_mode, hyper.alpha);
        for (std::size_t i = 0; i < g.data().size(); ++i)
            out.model.w.data()[i] -= hyper.lr * g.data()[i];
        double loss = objective(data, out.model.w, a, s, candidates, hyper.r_mode, hyper.alpha);
        if (!std::isfinite(loss) || !out.model.w.all_finite())
            throw NumericalError("train_bilinear: non-finite loss at epoch " +
                                     std::to_string(e));
        out.loss_history.push_back(loss);
    }
    return out;
}

} // namespace zslias

#endif
