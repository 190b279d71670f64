#ifndef ZSLIAS_AVAE_HPP
#define ZSLIAS_AVAE_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "zslias/dataset.hpp"
#include "zslias/linalg.hpp"

namespace zslias {

// Attribute-conditioned VAE. Encoder (d+N_a) -> hidden -> 2*z_dim, decoder
// (z_dim+N_a) -> hidden -> d, tanh hidden layers, Gaussian likelihood with
// fixed scalar variance. Parameters live in one flat vector so training and
// finite-difference checks share the same view.
struct AvaeModel {
    int d = 0;
    int n_attr = 0;
    int z_dim = 16;
    int hidden = 64;
    double recon_sigma = 0.1;
    std::vector<double> params;

    // layout: enc_w1, enc_b1, enc_w2, enc_b2, dec_w1, dec_b1, dec_w2, dec_b2
    std::size_t enc_in() const { return d + n_attr; }
    std::size_t dec_in() const { return z_dim + n_attr; }
    std::size_t off_enc_w1() const { return 0; }
    std::size_t off_enc_b1() const { return off_enc_w1() + hidden * enc_in(); }
    std::size_t off_enc_w2() const { return off_enc_b1() + hidden; }
    std::size_t off_enc_b2() const { return off_enc_w2() + 2 * z_dim * hidden; }
    std::size_t off_dec_w1() const { return off_enc_b2() + 2 * z_dim; }
    std::size_t off_dec_b1() const { return off_dec_w1() + hidden * dec_in(); }
    std::size_t off_dec_w2() const { return off_dec_b1() + hidden; }
    std::size_t off_dec_b2() const { return off_dec_w2() + d * hidden; }
    std::size_t n_params() const { return off_dec_b2() + d; }
};

inline AvaeModel make_avae(int d, int n_attr, int z_dim, int hidden, double recon_sigma,
                           std::uint64_t seed) {
    if (z_dim < 1 || hidden < 1) throw std::invalid_argument("avae: z_dim, hidden >= 1");
    if (!(recon_sigma > 0.0)) throw std::invalid_argument("avae: recon_sigma > 0 required");
    AvaeModel m;
    m.d = d;
    m.n_attr = n_attr;
    m.z_dim = z_dim;
    m.hidden = hidden;
    m.recon_sigma = recon_sigma;
    m.params.resize(m.n_params());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 0.1);
    for (auto& v : m.params) v = gauss(rng);
    return m;
}

namespace avae_detail {

// y = W x + b, with W stored row-major (out x in)
inline void affine(const double* w, const double* b, const std::vector<double>& x,
                   std::vector<double>& y, std::size_t out, std::size_t in) {
    for (std::size_t r = 0; r < out; ++r) {
        double s = b[r];
        const double* row = w + r * in;
        for (std::size_t c = 0; c < in; ++c) s += row[c] * x[c];
        y[r] = s;
    }
}

struct Forward {
    std::vector<double> enc_in, enc_h, mu, logvar, z, dec_in, dec_h, xhat;
    double kl = 0.0, recon = 0.0, elbo = 0.0;
};

inline Forward forward(const AvaeModel& m, const std::vector<double>& x,
                       const std::vector<double>& a, const std::vector<double>& eps) {
    if (x.size() != static_cast<std::size_t>(m.d) ||
        a.size() != static_cast<std::size_t>(m.n_attr) ||
        eps.size() != static_cast<std::size_t>(m.z_dim))
        throw std::invalid_argument("avae: input dimension mismatch");
    const double* p = m.params.data();
    Forward f;
    f.enc_in = x;
    f.enc_in.insert(f.enc_in.end(), a.begin(), a.end());
    f.enc_h.resize(m.hidden);
    affine(p + m.off_enc_w1(), p + m.off_enc_b1(), f.enc_in, f.enc_h, m.hidden, m.enc_in());
    for (auto& v : f.enc_h) v = std::tanh(v);
    std::vector<double> enc_out(2 * m.z_dim);
    affine(p + m.off_enc_w2(), p + m.off_enc_b2(), f.enc_h, enc_out, 2 * m.z_dim, m.hidden);
    f.mu.assign(enc_out.begin(), enc_out.begin() + m.z_dim);
    f.logvar.assign(enc_out.begin() + m.z_dim, enc_out.end());

    f.z.resize(m.z_dim);
    for (int i = 0; i < m.z_dim; ++i) f.z[i] = f.mu[i] + std::exp(0.5 * f.logvar[i]) * eps[i];

    f.dec_in = f.z;
    f.dec_in.insert(f.dec_in.end(), a.begin(), a.end());
    f.dec_h.resize(m.hidden);
    affine(p + m.off_dec_w1(), p + m.off_dec_b1(), f.dec_in, f.dec_h, m.hidden, m.dec_in());
    for (auto& v : f.dec_h) v = std::tanh(v);
    f.xhat.resize(m.d);
    affine(p + m.off_dec_w2(), p + m.off_dec_b2(), f.dec_h, f.xhat, m.d, m.hidden);

    for (int i = 0; i < m.z_dim; ++i)
        f.kl += 0.5 * (f.mu[i] * f.mu[i] + std::exp(f.logvar[i]) - f.logvar[i] - 1.0);
    const double s2 = m.recon_sigma * m.recon_sigma;
    double sq = 0.0;
    for (int i = 0; i < m.d; ++i) sq += (x[i] - f.xhat[i]) * (x[i] - f.xhat[i]);
    f.recon = -0.5 * m.d * std::log(2.0 * M_PI * s2) - sq / (2.0 * s2);
    f.elbo = f.recon - f.kl;
    if (!std::isfinite(f.elbo)) throw NumericalError("avae: non-finite activations");
    return f;
}

} // namespace avae_detail

// Single-sample (L=1) ELBO with externally supplied reparameterization noise.
inline double elbo(const AvaeModel& m, const std::vector<double>& x,
                   const std::vector<double>& a, const std::vector<double>& eps) {
    return avae_detail::forward(m, x, a, eps).elbo;
}

// Gradient of the ELBO w.r.t. every parameter, accumulated into grad
// (same length as m.params).
inline double elbo_grad(const AvaeModel& m, const std::vector<double>& x,
                        const std::vector<double>& a, const std::vector<double>& eps,
                        std::vector<double>& grad) {
    using namespace avae_detail;
    Forward f = forward(m, x, a, eps);
    const double* p = m.params.data();
    double* g = grad.data();
    const double s2 = m.recon_sigma * m.recon_sigma;

    // d elbo / d xhat
    std::vector<double> dxhat(m.d);
    for (int i = 0; i < m.d; ++i) dxhat[i] = (x[i] - f.xhat[i]) / s2;

    // decoder output layer
    for (int r = 0; r < m.d; ++r) {
        double* grow = g + m.off_dec_w2() + r * m.hidden;
        for (int c = 0; c < m.hidden; ++c) grow[c] += dxhat[r] * f.dec_h[c];
        g[m.off_dec_b2() + r] += dxhat[r];
    }
    std::vector<double> dh2(m.hidden, 0.0);
    for (int r = 0; r < m.d; ++r) {
        const double* row = p + m.off_dec_w2() + r * m.hidden;
        for (int c = 0; c < m.hidden; ++c) dh2[c] += row[c] * dxhat[r];
    }
    for (int c = 0; c < m.hidden; ++c) dh2[c] *= 1.0 - f.dec_h[c] * f.dec_h[c];

    // decoder hidden layer
    const std::size_t dec_in = m.dec_in();
    for (int r = 0; r < m.hidden; ++r) {
        double* grow = g + m.off_dec_w1() + r * dec_in;
        for (std::size_t c = 0; c < dec_in; ++c) grow[c] += dh2[r] * f.dec_in[c];
        g[m.off_dec_b1() + r] += dh2[r];
    }
    std::vector<double> dz(m.z_dim, 0.0);
    for (int r = 0; r < m.hidden; ++r) {
        const double* row = p + m.off_dec_w1() + r * dec_in;
        for (int c = 0; c < m.z_dim; ++c) dz[c] += row[c] * dh2[r];
    }

    // through the reparameterization, minus the KL term
    std::vector<double> dmu(m.z_dim), dlogvar(m.z_dim);
    for (int i = 0; i < m.z_dim; ++i) {
        dmu[i] = dz[i] - f.mu[i];
        dlogvar[i] =
            dz[i] * eps[i] * 0.5 * std::exp(0.5 * f.logvar[i]) - 0.5 * (std::exp(f.logvar[i]) - 1.0);
    }

    // encoder output layer (mu rows then logvar rows)
    std::vector<double> denc_out(2 * m.z_dim);
    for (int i = 0; i < m.z_dim; ++i) {
        denc_out[i] = dmu[i];
        denc_out[m.z_dim + i] = dlogvar[i];
    }
    for (int r = 0; r < 2 * m.z_dim; ++r) {
        double* grow = g + m.off_enc_w2() + r * m.hidden;
        for (int c = 0; c < m.hidden; ++c) grow[c] += denc_out[r] * f.enc_h[c];
        g[m.off_enc_b2() + r] += denc_out[r];
    }
    std::vector<double> dh1(m.hidden, 0.0);
    for (int r = 0; r < 2 * m.z_dim; ++r) {
        const double* row = p + m.off_enc_w2() + r * m.hidden;
        for (int c = 0; c < m.hidden; ++c) dh1[c] += row[c] * denc_out[r];
    }
    for (int c = 0; c < m.hidden; ++c) dh1[c] *= 1.0 - f.enc_h[c] * f.enc_h[c];

    // encoder hidden layer
    const std::size_t enc_in = m.enc_in();
    for (int r = 0; r < m.hidden; ++r) {
        double* grow = g + m.off_enc_w1() + r * enc_in;
        for (std::size_t c = 0; c < enc_in; ++c) grow[c] += dh1[r] * f.enc_in[c];
        g[m.off_enc_b1() + r] += dh1[r];
    }
    return f.elbo;
}

struct AvaeHyper {
    int z_dim = 16;
    int hidden = 64;
    double recon_sigma = 0.1;
    double lr = 1e-3;
    int epochs = 100;
    int batch = 32;
    std::uint64_t seed = 0;
};

struct AvaeTrainResult {
    AvaeModel model;
    std::vector<double> elbo_history;  // mean ELBO per epoch
};

inline AvaeTrainResult train_avae(const Dataset& seen, const AttributeMatrix& a,
                                  const AvaeHyper& hyper) {
    if (hyper.epochs < 1) throw std::invalid_argument("train_avae: epochs >= 1 required");
    if (hyper.batch < 1) throw std::invalid_argument("train_avae: batch >= 1 required");
    AvaeTrainResult out;
    out.model = make_avae(static_cast<int>(seen.dim()), static_cast<int>(a.n_attributes()),
                          hyper.z_dim, hyper.hidden, hyper.recon_sigma, hyper.seed);
    AvaeModel& m = out.model;
    std::mt19937_64 rng(hyper.seed + 1);
    std::normal_distribution<double> gauss(0.0, 1.0);

    std::vector<std::size_t> idx(seen.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::vector<double> grad(m.n_params());
    std::vector<double> eps(m.z_dim);

    for (int e = 0; e < hyper.epochs; ++e) {
        std::shuffle(idx.begin(), idx.end(), rng);
        double epoch_elbo = 0.0;
        for (std::size_t start = 0; start < idx.size(); start += hyper.batch) {
            const std::size_t stop = std::min(idx.size(), start + hyper.batch);
            std::fill(grad.begin(), grad.end(), 0.0);
            for (std::size_t i = start; i < stop; ++i) {
                for (auto& v : eps) v = gauss(rng);
                epoch_elbo += elbo_grad(m, seen.features.row(idx[i]),
                                        a.values.row(seen.labels[idx[i]]), eps, grad);
            }
            const double scale = hyper.lr / static_cast<double>(stop - start);
            for (std::size_t i = 0; i < grad.size(); ++i) m.params[i] += scale * grad[i];
        }
        epoch_elbo /= static_cast<double>(seen.size());
        if (!std::isfinite(epoch_elbo))
            throw NumericalError("train_avae: non-finite ELBO at epoch " + std::to_string(e));
        out.elbo_history.push_back(epoch_elbo);
    }
    return out;
}

// Decode fresh N(0,I) latents conditioned on each unseen class's attributes.
inline Dataset avae_generate(const AvaeModel& m, const AttributeMatrix& a,
                             const std::vector<int>& unseen_classes, int n_per_class,
                             std::uint64_t seed) {
    if (n_per_class < 1) throw std::invalid_argument("avae_generate: n_per_class >= 1");
    Dataset out;
    out.role = DataRole::kGenerated;
    const std::size_t n = unseen_classes.size() * static_cast<std::size_t>(n_per_class);
    out.features = Matrix(n, m.d);
    out.labels.resize(n);
    const double* p = m.params.data();
    std::size_t row = 0;
    for (std::size_t ci = 0; ci < unseen_classes.size(); ++ci) {
        // per-class derived seed keeps generation order-independent
        std::mt19937_64 rng(seed + ci);
        std::normal_distribution<double> gauss(0.0, 1.0);
        auto avec = a.values.row(unseen_classes[ci]);
        for (int i = 0; i < n_per_class; ++i, ++row) {
            std::vector<double> dec_in(m.dec_in());
            for (int j = 0; j < m.z_dim; ++j) dec_in[j] = gauss(rng);
            for (int j = 0; j < m.n_attr; ++j) dec_in[m.z_dim + j] = avec[j];
            std::vector<double> h(m.hidden), xhat(m.d);
            avae_detail::affine(p + m.off_dec_w1(), p + m.off_dec_b1(), dec_in, h, m.hidden,
                                m.dec_in());
            for (auto& v : h) v = std::tanh(v);
            avae_detail::affine(p + m.off_dec_w2(), p + m.off_dec_b2(), h, xhat, m.d, m.hidden);
            for (int c = 0; c < m.d; ++c) out.features(row, c) = xhat[c];
            out.labels[row] = unseen_classes[ci];
        }
    }
    return out;
}

} // namespace zslias

#endif
