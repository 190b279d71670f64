#ifndef ZSLIAS_DATASET_HPP
#define ZSLIAS_DATASET_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "zslias/csv.hpp"
#include "zslias/linalg.hpp"
#include "zslias/log.hpp"

namespace zslias {

enum class DataRole { kSeen, kUnseen, kGenerated };

struct Dataset {
    Matrix features;          // N x d
    std::vector<int> labels;  // dense 0-based class indices, length N
    DataRole role = DataRole::kSeen;

    std::size_t size() const { return features.rows(); }
    std::size_t dim() const { return features.cols(); }
};

struct AttributeMatrix {
    Matrix values;  // K x N_a, entries in [0,1]
    std::vector<std::string> class_names;
    std::vector<std::string> attr_names;

    std::size_t n_classes() const { return values.rows(); }
    std::size_t n_attributes() const { return values.cols(); }
};

struct SplitSpec {
    std::vector<int> seen_classes;
    std::vector<int> unseen_classes;
};

inline void validate_dataset(const Dataset& ds, const AttributeMatrix& a) {
    if (ds.size() < 1 || ds.dim() < 1)
        throw std::runtime_error("dataset must have N >= 1 and d >= 1");
    if (ds.labels.size() != ds.size())
        throw std::runtime_error("label count does not match feature rows");
    for (std::size_t r = 0; r < ds.features.rows(); ++r)
        for (std::size_t c = 0; c < ds.features.cols(); ++c)
            if (!std::isfinite(ds.features(r, c)))
                throw std::runtime_error("non-finite feature at row " + std::to_string(r) +
                                         ", column " + std::to_string(c));
    for (std::size_t i = 0; i < ds.labels.size(); ++i)
        if (ds.labels[i] < 0 || static_cast<std::size_t>(ds.labels[i]) >= a.n_classes())
            throw std::runtime_error("label at row " + std::to_string(i) +
                                     " does not index an attribute row");
}

// Threshold each attribute at its column mean, strict >. Idempotent on
// binary inputs; a constant column binarizes to all-zero with a warning.
inline Matrix binarize_attributes(const AttributeMatrix& a) {
    const std::size_t k = a.n_classes();
    const std::size_t na = a.n_attributes();
    if (k < 2) throw std::runtime_error("binarize_attributes requires K >= 2");
    Matrix out(k, na);
    for (std::size_t m = 0; m < na; ++m) {
        double mean = 0.0;
        for (std::size_t r = 0; r < k; ++r) mean += a.values(r, m);
        mean /= static_cast<double>(k);
        bool constant = true;
        for (std::size_t r = 1; r < k; ++r)
            if (a.values(r, m) != a.values(0, m)) constant = false;
        if (constant)
            log_warn("attribute column " + std::to_string(m) +
                     " is constant; binarizes to all-zero");
        for (std::size_t r = 0; r < k; ++r)
            out(r, m) = a.values(r, m) > mean ? 1.0 : 0.0;
    }
    return out;
}

namespace detail {

inline std::map<std::string, int> class_index_map(const AttributeMatrix& a) {
    std::map<std::string, int> m;
    for (std::size_t i = 0; i < a.class_names.size(); ++i)
        m[a.class_names[i]] = static_cast<int>(i);
    return m;
}

} // namespace detail

struct LoadedData {
    Dataset data;  // all rows; partition by split to get seen/unseen views
    AttributeMatrix attributes;
    SplitSpec split;
};

inline Dataset subset_by_classes(const Dataset& ds, const std::vector<int>& classes,
                                 DataRole role) {
    std::set<int> wanted(classes.begin(), classes.end());
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < ds.labels.size(); ++i)
        if (wanted.count(ds.labels[i])) rows.push_back(i);
    Dataset out;
    out.role = role;
    out.features = Matrix(rows.size(), ds.dim());
    out.labels.resize(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t c = 0; c < ds.dim(); ++c)
            out.features(i, c) = ds.features(rows[i], c);
        out.labels[i] = ds.labels[rows[i]];
    }
    return out;
}

inline LoadedData load_dataset(const std::filesystem::path& dir) {
    namespace fs = std::filesystem;
    for (const char* f : {"features.csv", "labels.csv", "attributes.csv", "split.json"})
        if (!fs::exists(dir / f))
            throw std::runtime_error("missing file: " + (dir / f).string());

    LoadedData out;

    // attributes.csv: header = attribute names; rows = class name then values
    auto attr_lines = read_lines((dir / "attributes.csv").string());
    if (attr_lines.size() < 2) throw std::runtime_error("attributes.csv needs header and rows");
    out.attributes.attr_names = split_csv_line(attr_lines[0]);
    const std::size_t na = out.attributes.attr_names.size();
    for (const auto& n : out.attributes.attr_names)
        if (!valid_name(n)) throw std::runtime_error("invalid attribute name '" + n + "'");
    const std::size_t k = attr_lines.size() - 1;
    out.attributes.values = Matrix(k, na);
    for (std::size_t r = 0; r < k; ++r) {
        auto fields = split_csv_line(attr_lines[r + 1]);
        if (fields.size() != na + 1)
            throw std::runtime_error("attributes.csv row " + std::to_string(r + 1) +
                                     ": expected " + std::to_string(na + 1) + " fields, got " +
                                     std::to_string(fields.size()));
        if (!valid_name(fields[0]))
            throw std::runtime_error("invalid class name '" + fields[0] + "'");
        out.attributes.class_names.push_back(fields[0]);
        for (std::size_t c = 0; c < na; ++c) {
            double v = parse_decimal(fields[c + 1], "attributes.csv row " +
                                                        std::to_string(r + 1) + " column " +
                                                        std::to_string(c + 1));
            if (!(v >= 0.0 && v <= 1.0))
                throw std::runtime_error("attribute value " + fields[c + 1] +
                                         " out of [0,1] at class '" + fields[0] +
                                         "', attribute '" + out.attributes.attr_names[c] + "'");
            out.attributes.values(r, c) = v;
        }
    }
    auto cls_idx = detail::class_index_map(out.attributes);
    if (cls_idx.size() != k) throw std::runtime_error("duplicate class name in attributes.csv");

    // features.csv
    auto feat_lines = read_lines((dir / "features.csv").string());
    const std::size_t n = feat_lines.size();
    if (n == 0) throw std::runtime_error("features.csv is empty");
    const std::size_t d = split_csv_line(feat_lines[0]).size();
    out.data.features = Matrix(n, d);
    for (std::size_t r = 0; r < n; ++r) {
        auto fields = split_csv_line(feat_lines[r]);
        if (fields.size() != d)
            throw std::runtime_error("features.csv row " + std::to_string(r + 1) +
                                     ": ragged row");
        for (std::size_t c = 0; c < d; ++c)
            out.data.features(r, c) = parse_decimal(
                fields[c], "features.csv row " + std::to_string(r + 1) + " column " +
                               std::to_string(c + 1));
    }

    // labels.csv: one class name per row
    auto label_lines = read_lines((dir / "labels.csv").string());
    if (label_lines.size() != n)
        throw std::runtime_error("labels.csv has " + std::to_string(label_lines.size()) +
                                 " rows but features.csv has " + std::to_string(n));
    out.data.labels.resize(n);
    for (std::size_t r = 0; r < n; ++r) {
        auto it = cls_idx.find(label_lines[r]);
        if (it == cls_idx.end())
            throw std::runtime_error("labels.csv row " + std::to_string(r + 1) +
                                     ": unknown class '" + label_lines[r] + "'");
        out.data.labels[r] = it->second;
    }

    // split.json
    std::ifstream sj(dir / "split.json");
    nlohmann::json j;
    sj >> j;
    auto names_to_ids = [&](const nlohmann::json& arr) {
        std::vector<int> ids;
        for (const auto& v : arr) {
            auto it = cls_idx.find(v.get<std::string>());
            if (it == cls_idx.end())
                throw std::runtime_error("split.json references unknown class '" +
                                         v.get<std::string>() + "'");
            ids.push_back(it->second);
        }
        return ids;
    };
    out.split.seen_classes = names_to_ids(j.at("seen"));
    out.split.unseen_classes = names_to_ids(j.at("unseen"));
    std::set<int> seen_set(out.split.seen_classes.begin(), out.split.seen_classes.end());
    for (int u : out.split.unseen_classes)
        if (seen_set.count(u))
            throw std::runtime_error("split.json: class index " + std::to_string(u) +
                                     " listed as both seen and unseen");
    std::set<int> covered = seen_set;
    covered.insert(out.split.unseen_classes.begin(), out.split.unseen_classes.end());
    for (int lab : out.data.labels)
        if (!covered.count(lab))
            throw std::runtime_error("class '" + out.attributes.class_names[lab] +
                                     "' has data but appears in neither split");

    validate_dataset(out.data, out.attributes);
    return out;
}

inline void save_dataset(const std::filesystem::path& dir, const Dataset& data,
                         const AttributeMatrix& attrs, const SplitSpec& split) {
    namespace fs = std::filesystem;
    fs::create_directories(dir);
    {
        std::ofstream f(dir / "features.csv");
        for (std::size_t r = 0; r < data.features.rows(); ++r) {
            for (std::size_t c = 0; c < data.features.cols(); ++c) {
                if (c) f << ',';
                f << format_double(data.features(r, c));
            }
            f << '\n';
        }
    }
    {
        std::ofstream f(dir / "labels.csv");
        for (int lab : data.labels) f << attrs.class_names[lab] << '\n';
    }
    {
        std::ofstream f(dir / "attributes.csv");
        for (std::size_t c = 0; c < attrs.attr_names.size(); ++c) {
            if (c) f << ',';
            f << attrs.attr_names[c];
        }
        f << '\n';
        for (std::size_t r = 0; r < attrs.values.rows(); ++r) {
            f << attrs.class_names[r];
            for (std::size_t c = 0; c < attrs.values.cols(); ++c)
                f << ',' << format_double(attrs.values(r, c));
            f << '\n';
        }
    }
    {
        nlohmann::json j;
        j["seen"] = nlohmann::json::array();
        for (int i : split.seen_classes) j["seen"].push_back(attrs.class_names[i]);
        j["unseen"] = nlohmann::json::array();
        for (int i : split.unseen_classes) j["unseen"].push_back(attrs.class_names[i]);
        std::ofstream f(dir / "split.json");
        f << j.dump(2) << '\n';
    }
}

struct SynthResult {
    Dataset seen;
    Dataset unseen;
    AttributeMatrix attributes;
    SplitSpec split;
};

// Planted-signal generator: each class gets a distinct binary signature over
// the informative attributes, class prototypes are a fixed linear map of the
// signature, and samples are prototype + Gaussian noise. Noise attributes
// carry per-class values independent of the features.
inline SynthResult synth_generate(int n_classes_seen, int n_classes_unseen, int n_informative,
                                  int n_noise, int samples_per_class, int d, double noise_sigma,
                                  std::uint64_t seed) {
    if (n_classes_seen < 1 || n_classes_unseen < 1 || samples_per_class < 1 || d < 1 ||
        n_informative < 1 || n_noise < 0)
        throw std::runtime_error("synth_generate: all counts must be >= 1 (n_noise >= 0)");
    const int n_attr = n_informative + n_noise;
    if (n_attr < 2) throw std::runtime_error("synth_generate: N_a must be >= 2");
    const int n_classes = n_classes_seen + n_classes_unseen;
    if (n_informative < 63 && (1LL << n_informative) < n_classes)
        throw std::runtime_error("synth_generate: 2^n_informative < number of classes; "
                                 "distinct signatures impossible");

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> coin(0, 1);

    // Signatures: pairwise distinct and no constant informative column, so
    // the binarized attribute view reproduces the plant exactly.
    std::vector<std::vector<int>> sig;
    for (int attempt = 0; attempt < 100000; ++attempt) {
        sig.assign(n_classes, std::vector<int>(n_informative));
        for (auto& s : sig)
            for (int& b : s) b = coin(rng);
        std::set<std::vector<int>> uniq(sig.begin(), sig.end());
        if (static_cast<int>(uniq.size()) != n_classes) continue;
        bool constant_col = false;
        for (int m = 0; m < n_informative && !constant_col; ++m) {
            bool all_same = true;
            for (int k = 1; k < n_classes; ++k)
                if (sig[k][m] != sig[0][m]) all_same = false;
            if (all_same) constant_col = true;
        }
        if (!constant_col) break;
        sig.clear();
    }
    if (sig.empty())
        throw std::runtime_error("synth_generate: failed to sample distinct signatures");

    // Linear map signature -> prototype.
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix proj(static_cast<std::size_t>(d), static_cast<std::size_t>(n_informative));
    for (auto& v : proj.data()) v = gauss(rng);

    SynthResult out;
    out.attributes.values =
        Matrix(static_cast<std::size_t>(n_classes), static_cast<std::size_t>(n_attr));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int k = 0; k < n_classes; ++k) {
        out.attributes.class_names.push_back("class" + std::to_string(k));
        for (int m = 0; m < n_informative; ++m)
            out.attributes.values(k, m) = static_cast<double>(sig[k][m]);
        for (int m = 0; m < n_noise; ++m)
            out.attributes.values(k, n_informative + m) = unif(rng);
    }
    for (int m = 0; m < n_informative; ++m)
        out.attributes.attr_names.push_back("info" + std::to_string(m));
    for (int m = 0; m < n_noise; ++m)
        out.attributes.attr_names.push_back("noise" + std::to_string(m));

    auto make_samples = [&](int first_class, int n_cls, DataRole role) {
        Dataset ds;
        ds.role = role;
        const std::size_t n = static_cast<std::size_t>(n_cls) * samples_per_class;
        ds.features = Matrix(n, static_cast<std::size_t>(d));
        ds.labels.resize(n);
        std::size_t row = 0;
        for (int k = first_class; k < first_class + n_cls; ++k) {
            std::vector<double> proto(d, 0.0);
            for (int c = 0; c < d; ++c)
                for (int m = 0; m < n_informative; ++m)
                    proto[c] += proj(c, m) * sig[k][m];
            for (int i = 0; i < samples_per_class; ++i, ++row) {
                for (int c = 0; c < d; ++c)
                    ds.features(row, c) = proto[c] + noise_sigma * gauss(rng);
                ds.labels[row] = k;
            }
        }
        return ds;
    };
    out.seen = make_samples(0, n_classes_seen, DataRole::kSeen);
    out.unseen = make_samples(n_classes_seen, n_classes_unseen, DataRole::kUnseen);
    for (int k = 0; k < n_classes_seen; ++k) out.split.seen_classes.push_back(k);
    for (int k = n_classes_seen; k < n_classes; ++k) out.split.unseen_classes.push_back(k);
    return out;
}

// Concatenate seen+unseen into one dataset for the on-disk directory layout.
inline Dataset concat(const Dataset& a, const Dataset& b) {
    if (a.dim() != b.dim()) throw std::runtime_error("concat: dimension mismatch");
    Dataset out;
    out.features = Matrix(a.size() + b.size(), a.dim());
    out.labels.reserve(a.size() + b.size());
    std::size_t row = 0;
    for (std::size_t r = 0; r < a.size(); ++r, ++row)
        for (std::size_t c = 0; c < a.dim(); ++c) out.features(row, c) = a.features(r, c);
    for (std::size_t r = 0; r < b.size(); ++r, ++row)
        for (std::size_t c = 0; c < b.dim(); ++c) out.features(row, c) = b.features(r, c);
    out.labels.insert(out.labels.end(), a.labels.begin(), a.labels.end());
    out.labels.insert(out.labels.end(), b.labels.begin(), b.labels.end());
    return out;
}

} // namespace zslias

#endif
