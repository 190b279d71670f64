#ifndef ZSLIAS_IO_HPP
#define ZSLIAS_IO_HPP

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "zslias/attribute_classifiers.hpp"
#include "zslias/avae.hpp"
#include "zslias/bilinear.hpp"
#include "zslias/csv.hpp"
#include "zslias/ias.hpp"
#include "zslias/selection.hpp"

namespace zslias {

inline void save_matrix_csv(const std::filesystem::path& path, const Matrix& m) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            if (c) f << ',';
            f << format_double(m(r, c));
        }
        f << '\n';
    }
}

inline Matrix load_matrix_csv(const std::filesystem::path& path) {
    auto lines = read_lines(path.string());
    if (lines.empty()) throw std::runtime_error(path.string() + " is empty");
    const std::size_t cols = split_csv_line(lines[0]).size();
    Matrix m(lines.size(), cols);
    for (std::size_t r = 0; r < lines.size(); ++r) {
        auto fields = split_csv_line(lines[r]);
        if (fields.size() != cols)
            throw std::runtime_error(path.string() + ": ragged row " + std::to_string(r + 1));
        for (std::size_t c = 0; c < cols; ++c)
            m(r, c) = parse_decimal(fields[c], path.string() + " row " + std::to_string(r + 1));
    }
    return m;
}

inline void save_bank(const std::filesystem::path& path, const AttrClassifierBank& bank) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path.string());
    for (std::size_t m = 0; m < bank.n_attributes(); ++m) {
        f << bank.attr_names[m];
        for (std::size_t c = 0; c < bank.weights.cols(); ++c)
            f << ',' << format_double(bank.weights(m, c));
        f << '\n';
    }
}

inline AttrClassifierBank load_bank(const std::filesystem::path& path) {
    auto lines = read_lines(path.string());
    if (lines.empty()) throw std::runtime_error(path.string() + " is empty");
    AttrClassifierBank bank;
    const std::size_t cols = split_csv_line(lines[0]).size() - 1;
    bank.weights = Matrix(lines.size(), cols);
    for (std::size_t m = 0; m < lines.size(); ++m) {
        auto fields = split_csv_line(lines[m]);
        if (fields.size() != cols + 1)
            throw std::runtime_error(path.string() + ": ragged row " + std::to_string(m + 1));
        bank.attr_names.push_back(fields[0]);
        for (std::size_t c = 0; c < cols; ++c)
            bank.weights(m, c) = parse_decimal(fields[c + 1], path.string());
    }
    return bank;
}

inline void save_bilinear(const std::filesystem::path& dir, const BilinearModel& model) {
    std::filesystem::create_directories(dir);
    save_matrix_csv(dir / "w.csv", model.w);
    nlohmann::json j;
    j["alpha"] = model.alpha;
    j["lr"] = model.lr;
    j["epochs"] = model.epochs;
    std::ofstream f(dir / "hyper.json");
    f << j.dump(2) << '\n';
}

inline BilinearModel load_bilinear(const std::filesystem::path& dir) {
    BilinearModel m;
    m.w = load_matrix_csv(dir / "w.csv");
    std::ifstream f(dir / "hyper.json");
    if (!f) throw std::runtime_error("cannot open " + (dir / "hyper.json").string());
    nlohmann::json j;
    f >> j;
    m.alpha = j.at("alpha");
    m.lr = j.at("lr");
    m.epochs = j.at("epochs");
    return m;
}

inline void save_avae(const std::filesystem::path& dir, const AvaeModel& m) {
    std::filesystem::create_directories(dir);
    nlohmann::json j;
    j["d"] = m.d;
    j["n_attr"] = m.n_attr;
    j["z_dim"] = m.z_dim;
    j["hidden"] = m.hidden;
    j["recon_sigma"] = m.recon_sigma;
    std::ofstream f(dir / "avae.json");
    f << j.dump(2) << '\n';
    std::ofstream pf(dir / "params.csv");
    for (double v : m.params) pf << format_double(v) << '\n';
}

inline AvaeModel load_avae(const std::filesystem::path& dir) {
    std::ifstream f(dir / "avae.json");
    if (!f) throw std::runtime_error("cannot open " + (dir / "avae.json").string());
    nlohmann::json j;
    f >> j;
    AvaeModel m;
    m.d = j.at("d");
    m.n_attr = j.at("n_attr");
    m.z_dim = j.at("z_dim");
    m.hidden = j.at("hidden");
    m.recon_sigma = j.at("recon_sigma");
    auto lines = read_lines((dir / "params.csv").string());
    if (lines.size() != m.n_params())
        throw std::runtime_error("params.csv: expected " + std::to_string(m.n_params()) +
                                 " values, got " + std::to_string(lines.size()));
    m.params.resize(lines.size());
    for (std::size_t i = 0; i < lines.size(); ++i)
        m.params[i] = parse_decimal(lines[i], "params.csv line " + std::to_string(i + 1));
    return m;
}

inline void save_selection(const std::filesystem::path& path, const SelectionVector& s,
                           const std::vector<std::string>& attr_names) {
    nlohmann::json j = nlohmann::json::array();
    for (int i : s.order) j.push_back(attr_names.at(i));
    std::ofstream f(path);
    f << j.dump(2) << '\n';
}

inline SelectionVector load_selection(const std::filesystem::path& path,
                                      const std::vector<std::string>& attr_names) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path.string());
    nlohmann::json j;
    f >> j;
    SelectionVector s = SelectionVector::zeros(attr_names.size());
    for (const auto& v : j) {
        auto it = std::find(attr_names.begin(), attr_names.end(), v.get<std::string>());
        if (it == attr_names.end())
            throw std::runtime_error("selection references unknown attribute '" +
                                     v.get<std::string>() + "'");
        s.add(static_cast<int>(it - attr_names.begin()));
    }
    return s;
}

inline void save_trace(const std::filesystem::path& path, const IasTrace& trace,
                       const std::vector<std::string>& attr_names) {
    std::ofstream f(path);
    f << "t,attribute_name,loss,gen_accuracy\n";
    for (const auto& r : trace.records)
        f << r.t << ',' << attr_names.at(r.chosen_attribute) << ',' << format_double(r.loss_after)
          << ',' << format_double(r.acc_generated) << '\n';
}

inline void save_confusion(const std::filesystem::path& path, const ConfusionMatrix& cm) {
    std::ofstream f(path);
    f << "class";
    for (std::size_t c = 0; c < cm.counts.cols(); ++c)
        f << ',' << (cm.class_names.empty() ? "c" + std::to_string(c) : cm.class_names[c]);
    f << '\n';
    for (std::size_t r = 0; r < cm.counts.rows(); ++r) {
        f << (cm.class_names.empty() ? "c" + std::to_string(r) : cm.class_names[r]);
        for (std::size_t c = 0; c < cm.counts.cols(); ++c)
            f << ',' << format_double(cm.counts(r, c));
        f << '\n';
    }
}

} // namespace zslias

#endif
