#ifndef ZSLIAS_ECOC_HPP
#define ZSLIAS_ECOC_HPP

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "zslias/linalg.hpp"

namespace zslias {

// Hamming count between two codewords.
inline int attribute_distance(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != b.size())
        throw std::invalid_argument("attribute_distance: length mismatch");
    int d = 0;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) ++d;
    return d;
}

// Minimum pairwise Hamming distance over codebook rows. Duplicate rows make
// the bound undefined and are rejected.
inline int min_attribute_distance(const Matrix& codebook) {
    if (codebook.rows() < 2)
        throw std::invalid_argument("min_attribute_distance: need K >= 2 rows");
    int tau = static_cast<int>(codebook.cols()) + 1;
    for (std::size_t i = 0; i < codebook.rows(); ++i)
        for (std::size_t j = i + 1; j < codebook.rows(); ++j) {
            int d = 0;
            for (std::size_t m = 0; m < codebook.cols(); ++m)
                if (codebook(i, m) != codebook(j, m)) ++d;
            if (d == 0)
                throw std::runtime_error("min_attribute_distance: duplicate codebook rows " +
                                         std::to_string(i) + " and " + std::to_string(j) +
                                         " (tau = 0, bound undefined)");
            tau = std::min(tau, d);
        }
    return tau;
}

// Nearest-codeword decode; ties go to the lowest row index.
inline int decode_nearest(const std::vector<double>& codeword, const Matrix& codebook) {
    if (codebook.rows() == 0)
        throw std::invalid_argument("decode_nearest: empty candidate set");
    if (codeword.size() != codebook.cols())
        throw std::invalid_argument("decode_nearest: codeword length mismatch");
    int best = 0;
    int best_d = attribute_distance(codeword, codebook.row(0));
    for (std::size_t r = 1; r < codebook.rows(); ++r) {
        int d = attribute_distance(codeword, codebook.row(r));
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(r);
        }
    }
    return best;
}

struct ErrorCorrectingViolation {
    std::size_t sample;
    int distance_to_truth;
    int tau;
};

// Executable check of the error-correcting property: every sample that
// decode_nearest misclassifies must sit at distance >= tau/2 from its true
// codeword. The returned list is provably empty.
inline std::vector<ErrorCorrectingViolation> check_error_correcting(
    const Matrix& pred_codewords, const std::vector<int>& true_labels, const Matrix& codebook) {
    if (pred_codewords.rows() != true_labels.size())
        throw std::invalid_argument("check_error_correcting: shape mismatch");
    const int tau = min_attribute_distance(codebook);
    std::vector<ErrorCorrectingViolation> violations;
    for (std::size_t i = 0; i < pred_codewords.rows(); ++i) {
        auto cw = pred_codewords.row(i);
        int pred = decode_nearest(cw, codebook);
        if (pred == true_labels[i]) continue;
        int d_truth = attribute_distance(cw, codebook.row(true_labels[i]));
        if (2 * d_truth < tau) violations.push_back({i, d_truth, tau});
    }
    return violations;
}

inline double generalization_bound(int n_attributes, int tau, double mean_loss) {
    if (tau < 1) throw std::invalid_argument("generalization_bound: tau must be >= 1");
    if (mean_loss < 0.0 || mean_loss > 1.0)
        throw std::invalid_argument("generalization_bound: mean_loss outside [0,1]");
    return 2.0 * n_attributes * mean_loss / tau;
}

struct AttributeLoss {
    std::vector<double> per_attribute;  // B_m estimates
    double mean;                        // B-bar
};

// Empirical 0/1 loss of each attribute prediction against the true class's
// codeword bit, averaged over samples.
inline AttributeLoss empirical_attribute_loss(const Matrix& pred_codewords,
                                              const std::vector<int>& true_labels,
                                              const Matrix& codebook) {
    const std::size_t n = pred_codewords.rows();
    const std::size_t na = pred_codewords.cols();
    if (n != true_labels.size() || na != codebook.cols())
        throw std::invalid_argument("empirical_attribute_loss: shape mismatch");
    if (n == 0) throw std::invalid_argument("empirical_attribute_loss: N >= 1 required");
    AttributeLoss out;
    out.per_attribute.assign(na, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t m = 0; m < na; ++m)
            if (pred_codewords(i, m) != codebook(true_labels[i], m))
                out.per_attribute[m] += 1.0;
    double sum = 0.0;
    for (auto& v : out.per_attribute) {
        v /= static_cast<double>(n);
        sum += v;
    }
    out.mean = sum / static_cast<double>(na);
    return out;
}

// PAC bound with the proportionality constant fixed to 1, natural logs.
// Values are "up to a constant".
inline double pac_bound(int n_attributes, int k_a, double delta, int d) {
    if (k_a < 1 || k_a > n_attributes)
        throw std::invalid_argument("pac_bound: need 1 <= k_a <= n_attributes");
    if (!(delta > 0.0 && delta < 1.0))
        throw std::invalid_argument("pac_bound: delta must lie in (0,1)");
    if (d < 1) throw std::invalid_argument("pac_bound: d >= 1 required");
    const double ratio = static_cast<double>(n_attributes) / k_a;
    return ratio * (4.0 * std::log(2.0 / delta) + 8.0 * (d + 1) * std::log(13.0 * ratio));
}

inline double test_error_bound(double train_error, int n_train, double pac_d, double eta) {
    if (train_error < 0.0 || train_error > 1.0)
        throw std::invalid_argument("test_error_bound: train_error outside [0,1]");
    if (n_train < 1) throw std::invalid_argument("test_error_bound: n_train >= 1 required");
    if (!(eta > 0.0 && eta < 1.0))
        throw std::invalid_argument("test_error_bound: eta must lie in (0,1)");
    if (!(pac_d > 0.0) || pac_d >= 2.0 * n_train)
        throw std::invalid_argument("test_error_bound: need 0 < pac_d < 2*n_train");
    const double inner =
        (pac_d * (std::log(2.0 * n_train / pac_d) + 1.0) - std::log(eta / 4.0)) / n_train;
    return train_error + std::sqrt(inner);
}

struct BoundReport {
    int n_attributes = 0;
    int tau = 0;
    double mean_loss = 0.0;
    double generalization_bound = 0.0;
    double empirical_error = 0.0;
    std::vector<double> per_attribute_loss;
};

inline BoundReport make_bound_report(const Matrix& pred_codewords,
                                     const std::vector<int>& true_labels,
                                     const Matrix& codebook) {
    BoundReport r;
    r.n_attributes = static_cast<int>(codebook.cols());
    r.tau = min_attribute_distance(codebook);
    auto loss = empirical_attribute_loss(pred_codewords, true_labels, codebook);
    r.per_attribute_loss = loss.per_attribute;
    r.mean_loss = loss.mean;
    r.generalization_bound = generalization_bound(r.n_attributes, r.tau, r.mean_loss);
    std::size_t errors = 0;
    for (std::size_t i = 0; i < pred_codewords.rows(); ++i)
        if (decode_nearest(pred_codewords.row(i), codebook) != true_labels[i]) ++errors;
    r.empirical_error = static_cast<double>(errors) / pred_codewords.rows();
    return r;
}

inline nlohmann::json bound_report_to_json(const BoundReport& r) {
    nlohmann::json j;
    j["n_attributes"] = r.n_attributes;
    j["tau"] = r.tau;
    j["mean_loss"] = r.mean_loss;
    j["generalization_bound"] = r.generalization_bound;
    j["empirical_error"] = r.empirical_error;
    j["per_attribute_loss"] = r.per_attribute_loss;
    return j;
}

} // namespace zslias

#endif
