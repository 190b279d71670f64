#ifndef ZSLIAS_ATTRIBUTE_CLASSIFIERS_HPP
#define ZSLIAS_ATTRIBUTE_CLASSIFIERS_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "zslias/dataset.hpp"
#include "zslias/ecoc.hpp"
#include "zslias/linalg.hpp"
#include "zslias/log.hpp"

namespace zslias {

// One logistic classifier per attribute, DAP-style. Row m of `weights`
// holds d coefficients followed by the bias.
struct AttrClassifierBank {
    Matrix weights;  // N_a x (d+1)
    std::vector<std::string> attr_names;

    std::size_t n_attributes() const { return weights.rows(); }
    std::size_t dim() const { return weights.cols() - 1; }
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// Mean cross-entropy plus (l2/2)*||w||^2 over all weights including bias,
// so l2 -> inf drives predictions to exactly 0.5.
inline double logistic_loss(const Matrix& x, const std::vector<double>& y,
                            const std::vector<double>& w, double l2) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    double loss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double z = w[d];
        for (std::size_t c = 0; c < d; ++c) z += w[c] * x(i, c);
        // log(1+exp) written to avoid overflow at large |z|
        double softplus = z > 0 ? z + std::log1p(std::exp(-z)) : std::log1p(std::exp(z));
        loss += softplus - y[i] * z;
    }
    loss /= static_cast<double>(n);
    for (double v : w) loss += 0.5 * l2 * v * v;
    return loss;
}

inline std::vector<double> logistic_grad(const Matrix& x, const std::vector<double>& y,
                                         const std::vector<double>& w, double l2) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    std::vector<double> g(d + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double z = w[d];
        for (std::size_t c = 0; c < d; ++c) z += w[c] * x(i, c);
        double r = sigmoid(z) - y[i];
        for (std::size_t c = 0; c < d; ++c) g[c] += r * x(i, c);
        g[d] += r;
    }
    for (auto& v : g) v /= static_cast<double>(n);
    for (std::size_t c = 0; c <= d; ++c) g[c] += l2 * w[c];
    return g;
}

inline AttrClassifierBank train_bank(const Dataset& seen, const Matrix& a_bin, int epochs,
                                     double lr, double l2, std::uint64_t seed,
                                     const std::vector<std::string>& attr_names = {}) {
    if (epochs < 1) throw std::invalid_argument("train_bank: epochs >= 1 required");
    const std::size_t na = a_bin.cols();
    const std::size_t d = seen.dim();
    for (int lab : seen.labels)
        if (static_cast<std::size_t>(lab) >= a_bin.rows())
            throw std::invalid_argument("train_bank: sample class lacks a binarized signature");

    AttrClassifierBank bank;
    bank.weights = Matrix(na, d + 1);
    bank.attr_names = attr_names;
    if (bank.attr_names.empty())
        for (std::size_t m = 0; m < na; ++m) bank.attr_names.push_back("a" + std::to_string(m));

    for (std::size_t m = 0; m < na; ++m) {
        std::vector<double> y(seen.size());
        for (std::size_t i = 0; i < seen.size(); ++i) y[i] = a_bin(seen.labels[i], m);
        bool constant = true;
        for (std::size_t i = 1; i < y.size(); ++i)
            if (y[i] != y[0]) constant = false;
        if (constant)
            log_warn("attribute " + bank.attr_names[m] +
                     " has a single label value; classifier will be constant");

        // per-classifier seed = seed + m, so classifiers may train in parallel
        std::mt19937_64 rng(seed + m);
        std::normal_distribution<double> gauss(0.0, 0.01);
        std::vector<double> w(d + 1);
        for (auto& v : w) v = gauss(rng);

        for (int e = 0; e < epochs; ++e) {
            auto g = logistic_grad(seen.features, y, w, l2);
            for (std::size_t c = 0; c <= d; ++c) w[c] -= lr * g[c];
        }
        for (std::size_t c = 0; c <= d; ++c) {
            if (!std::isfinite(w[c]))
                throw NumericalError("train_bank: non-finite weight for attribute " +
                                         bank.attr_names[m]);
            bank.weights(m, c) = w[c];
        }
    }
    return bank;
}

// Bit m is 1 iff sigmoid(w.x + b) > 0.5, i.e. iff the logit is positive.
inline std::vector<double> predict_codeword(const AttrClassifierBank& bank,
                                            const std::vector<double>& x) {
    if (x.size() != bank.dim())
        throw std::invalid_argument("predict_codeword: feature dimension mismatch");
    std::vector<double> cw(bank.n_attributes());
    for (std::size_t m = 0; m < bank.n_attributes(); ++m) {
        double z = bank.weights(m, bank.dim());
        for (std::size_t c = 0; c < bank.dim(); ++c) z += bank.weights(m, c) * x[c];
        cw[m] = sigmoid(z) > 0.5 ? 1.0 : 0.0;
    }
    return cw;
}

inline Matrix predict_codewords(const AttrClassifierBank& bank, const Matrix& features) {
    Matrix out(features.rows(), bank.n_attributes());
    for (std::size_t i = 0; i < features.rows(); ++i) {
        auto cw = predict_codeword(bank, features.row(i));
        for (std::size_t m = 0; m < cw.size(); ++m) out(i, m) = cw[m];
    }
    return out;
}

inline int dap_predict(const AttrClassifierBank& bank, const std::vector<double>& x,
                       const Matrix& a_bin_candidates) {
    return decode_nearest(predict_codeword(bank, x), a_bin_candidates);
}

} // namespace zslias

#endif
