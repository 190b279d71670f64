#ifndef ZSLIAS_IAS_HPP
#define ZSLIAS_IAS_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <json.hpp>

#include "zslias/attribute_classifiers.hpp"
#include "zslias/avae.hpp"
#include "zslias/bilinear.hpp"
#include "zslias/dataset.hpp"
#include "zslias/ecoc.hpp"
#include "zslias/metrics.hpp"
#include "zslias/selection.hpp"

namespace zslias {

struct IasHyper {
    double alpha = 1e-3;
    double lr = 1e-3;
    int inner_epochs = 20;
    double epsilon = 1e-4;
    int max_select = 0;  // 0 -> ceil(0.2 * N_a)
    RankMode r_mode = RankMode::kUniform;
    std::uint64_t seed = 0;
    bool warm_start = true;
    int threads = 1;
};

struct IasTraceRecord {
    int t;                  // iteration, 1-based
    int chosen_attribute;
    double loss_after;      // full objective after the commit
    double acc_generated;   // per-class accuracy on the generated set
    int candidates_evaluated;
};

struct IasTrace {
    std::vector<IasTraceRecord> records;
    std::size_t total_candidate_evals = 0;
};

struct IasResult {
    SelectionVector selection;
    IasTrace trace;
    Matrix final_w;
};

namespace ias_detail {

inline std::vector<int> class_set(const Dataset& ds) {
    std::set<int> s(ds.labels.begin(), ds.labels.end());
    return std::vector<int>(s.begin(), s.end());
}

// Loss of every single-bit extension of `s`, evaluated under the fixed W.
inline std::vector<std::pair<int, double>> sweep_candidates(
    const Dataset& gen, const Matrix& w, const AttributeMatrix& a, const SelectionVector& s,
    const std::vector<int>& cands, RankMode r_mode, double alpha, int threads) {
    std::vector<int> free_attrs;
    for (std::size_t i = 0; i < s.mask.size(); ++i)
        if (!s.mask[i]) free_attrs.push_back(static_cast<int>(i));
    std::vector<std::pair<int, double>> losses(free_attrs.size());
    auto eval_range = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            SelectionVector trial = s;
            trial.add(free_attrs[k]);
            losses[k] = {free_attrs[k], objective(gen, w, a, trial, cands, r_mode, alpha)};
        }
    };
    if (threads <= 1 || free_attrs.size() < 2) {
        eval_range(0, free_attrs.size());
    } else {
        const std::size_t nt = std::min<std::size_t>(threads, free_attrs.size());
        std::vector<std::thread> pool;
        const std::size_t chunk = (free_attrs.size() + nt - 1) / nt;
        for (std::size_t t = 0; t < nt; ++t) {
            const std::size_t lo = t * chunk;
            const std::size_t hi = std::min(free_attrs.size(), lo + chunk);
            if (lo < hi) pool.emplace_back(eval_range, lo, hi);
        }
        for (auto& th : pool) th.join();
    }
    return losses;
}

} // namespace ias_detail

// Greedy forward selection on generated out-of-the-box data. Each iteration
// first takes inner_epochs gradient steps on W under the current mask, then
// commits the single-bit extension with the lowest full objective. Stops on
// |L_next - L_prev| <= epsilon, or at max_select, or when all attributes
// are in.
inline IasResult select_attributes(const Dataset& generated, const AttributeMatrix& a,
                                   const IasHyper& hyper) {
    if (generated.size() == 0)
        throw std::invalid_argument("select_attributes: generated set is empty");
    const int na = static_cast<int>(a.n_attributes());
    if (hyper.max_select < 0)
        throw std::invalid_argument("select_attributes: max_select must be >= 0");
    int max_select = hyper.max_select > 0
                         ? hyper.max_select
                         : static_cast<int>(std::ceil(0.2 * na));
    if (max_select < 1 || max_select > na)
        throw std::invalid_argument("select_attributes: need 1 <= max_select <= N_a");
    if (hyper.epsilon < 0) throw std::invalid_argument("select_attributes: epsilon >= 0");

    const std::vector<int> cands = ias_detail::class_set(generated);
    IasResult out;
    out.selection = SelectionVector::zeros(na);
    Matrix w = init_w(generated.dim(), na, hyper.seed);

    for (int t = 0; static_cast<int>(out.selection.count()) < max_select; ++t) {
        if (!hyper.warm_start && t > 0) w = init_w(generated.dim(), na, hyper.seed + t);
        const double loss_prev =
            objective(generated, w, a, out.selection, cands, hyper.r_mode, hyper.alpha);
        for (int k = 0; k < hyper.inner_epochs; ++k) {
            Matrix g = grad_w(generated, w, a, out.selection, cands, hyper.r_mode, hyper.alpha);
            for (std::size_t i = 0; i < g.data().size(); ++i) w.data()[i] -= hyper.lr * g.data()[i];
        }
        if (!w.all_finite())
            throw NumericalError("select_attributes: non-finite W at iteration " +
                                     std::to_string(t));

        auto losses = ias_detail::sweep_candidates(generated, w, a, out.selection, cands,
                                                   hyper.r_mode, hyper.alpha, hyper.threads);
        out.trace.total_candidate_evals += losses.size();
        int best_attr = losses[0].first;
        double best_loss = losses[0].second;
        for (const auto& [attr, loss] : losses)
            if (loss < best_loss) {  // ties -> lowest attribute index (sweep order)
                best_loss = loss;
                best_attr = attr;
            }

        const std::size_t before = out.selection.count();
        out.selection.add(best_attr);
        if (out.selection.count() != before + 1 ||
            out.selection.count() != static_cast<std::size_t>(t + 1) ||
            !out.selection.consistent())
            throw std::logic_error("select_attributes: selection constraint violated");

        std::vector<int> preds(generated.size());
        for (std::size_t i = 0; i < generated.size(); ++i)
            preds[i] = predict(generated.features.row(i), w, a, out.selection, cands);
        out.trace.records.push_back({t + 1, best_attr, best_loss,
                                     per_class_accuracy(preds, generated.labels),
                                     static_cast<int>(losses.size())});

        if (std::abs(best_loss - loss_prev) <= hyper.epsilon) break;
    }
    out.final_w = w;
    return out;
}

struct PipelineHyper {
    AvaeHyper avae;
    IasHyper ias;
    BilinearHyper bilinear;
    int n_per_class = 50;
    int bank_epochs = 200;
    double bank_lr = 0.5;
    double bank_l2 = 1e-4;
    std::uint64_t seed = 0;

    // master seed fans out with fixed offsets
    void apply_master_seed() {
        avae.seed = seed + 1;
        ias.seed = seed + 3;
        bilinear.seed = seed + 4;
    }
};

struct PipelineResult {
    double baseline_accuracy = 0.0;
    double ias_accuracy = 0.0;
    SelectionVector selection;
    IasTrace trace;
    BoundReport bound_all;
    bool bound_selected_defined = false;
    BoundReport bound_selected;
    Dataset generated;
    ConfusionMatrix confusion_ias;
    double sw_gen_unseen = 0.0, sw_seen_unseen = 0.0;
    GaussianDivergences div_gen_unseen, div_seen_unseen;
};

namespace ias_detail {

inline Matrix select_columns(const Matrix& m, const std::vector<int>& cols) {
    Matrix out(m.rows(), cols.size());
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) out(r, c) = m(r, cols[c]);
    return out;
}

inline Matrix select_rows(const Matrix& m, const std::vector<int>& rows) {
    Matrix out(rows.size(), m.cols());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) out(r, c) = m(rows[r], c);
    return out;
}

} // namespace ias_detail

// Full ZSL-with-attribute-selection pipeline: train the generator on seen
// data, synthesize out-of-the-box samples for the unseen signatures, run
// greedy selection on them, then fit and evaluate bilinear models with the
// selected mask and with all attributes.
inline PipelineResult run_pipeline(const Dataset& seen, const Dataset& unseen,
                                   const AttributeMatrix& a, const SplitSpec& split,
                                   PipelineHyper hyper) {
    hyper.apply_master_seed();
    PipelineResult out;

    auto avae_res = train_avae(seen, a, hyper.avae);
    out.generated = avae_generate(avae_res.model, a, split.unseen_classes, hyper.n_per_class,
                                  hyper.seed + 2);

    auto ias_res = select_attributes(out.generated, a, hyper.ias);
    out.selection = ias_res.selection;
    out.trace = ias_res.trace;

    auto evaluate = [&](const SelectionVector& s) {
        BilinearHyper bh = hyper.bilinear;
        auto trained = train_bilinear(seen, a, s, split.seen_classes, bh);
        std::vector<int> preds(unseen.size());
        for (std::size_t i = 0; i < unseen.size(); ++i)
            preds[i] = predict(unseen.features.row(i), trained.model.w, a, s,
                               split.unseen_classes);
        return std::make_pair(per_class_accuracy(preds, unseen.labels), preds);
    };
    auto [acc_ias, preds_ias] = evaluate(out.selection);
    auto [acc_base, preds_base] = evaluate(SelectionVector::ones(a.n_attributes()));
    out.ias_accuracy = acc_ias;
    out.baseline_accuracy = acc_base;

    // Confusion over unseen classes, remapped to local indices.
    {
        std::vector<int> local(a.n_classes(), -1);
        std::vector<std::string> names;
        for (std::size_t i = 0; i < split.unseen_classes.size(); ++i) {
            local[split.unseen_classes[i]] = static_cast<int>(i);
            names.push_back(a.class_names.empty() ? "class" + std::to_string(i)
                                                  : a.class_names[split.unseen_classes[i]]);
        }
        std::vector<int> pl(unseen.size()), ll(unseen.size());
        for (std::size_t i = 0; i < unseen.size(); ++i) {
            pl[i] = local[preds_ias[i]];
            ll[i] = local[unseen.labels[i]];
        }
        out.confusion_ias =
            confusion(pl, ll, static_cast<int>(split.unseen_classes.size()), names);
    }

    // DAP-style bound reports on the unseen set, all attributes vs selected.
    {
        Matrix a_bin = binarize_attributes(a);
        auto bank = train_bank(seen, a_bin, hyper.bank_epochs, hyper.bank_lr, hyper.bank_l2,
                               hyper.seed + 5, a.attr_names);
        Matrix preds_cw = predict_codewords(bank, unseen.features);
        Matrix codebook_u = ias_detail::select_rows(a_bin, split.unseen_classes);
        std::vector<int> local_labels(unseen.size());
        {
            std::vector<int> local(a.n_classes(), -1);
            for (std::size_t i = 0; i < split.unseen_classes.size(); ++i)
                local[split.unseen_classes[i]] = static_cast<int>(i);
            for (std::size_t i = 0; i < unseen.size(); ++i)
                local_labels[i] = local[unseen.labels[i]];
        }
        out.bound_all = make_bound_report(preds_cw, local_labels, codebook_u);
        try {
            Matrix cw_sel = ias_detail::select_columns(preds_cw, out.selection.order);
            Matrix cb_sel = ias_detail::select_columns(codebook_u, out.selection.order);
            out.bound_selected = make_bound_report(cw_sel, local_labels, cb_sel);
            out.bound_selected_defined = true;
        } catch (const std::runtime_error&) {
            out.bound_selected_defined = false;  // masked codebook collapsed (tau = 0)
        }
    }

    out.sw_gen_unseen = sliced_wasserstein(out.generated.features, unseen.features, 64,
                                           hyper.seed + 6);
    out.sw_seen_unseen = sliced_wasserstein(seen.features, unseen.features, 64, hyper.seed + 6);
    out.div_gen_unseen = gaussian_divergences(out.generated.features, unseen.features);
    out.div_seen_unseen = gaussian_divergences(seen.features, unseen.features);
    return out;
}

inline nlohmann::json pipeline_report_json(const PipelineResult& r, const AttributeMatrix& a) {
    nlohmann::json j;
    j["baseline_accuracy"] = r.baseline_accuracy;
    j["ias_accuracy"] = r.ias_accuracy;
    nlohmann::json sel = nlohmann::json::array();
    for (int i : r.selection.order) sel.push_back(a.attr_names[i]);
    j["selected_attributes"] = sel;
    nlohmann::json trace = nlohmann::json::array();
    for (const auto& rec : r.trace.records)
        trace.push_back({{"t", rec.t},
                         {"attribute", a.attr_names[rec.chosen_attribute]},
                         {"loss", rec.loss_after},
                         {"gen_accuracy", rec.acc_generated},
                         {"candidates_evaluated", rec.candidates_evaluated}});
    j["trace"] = trace;
    j["total_candidate_evals"] = r.trace.total_candidate_evals;
    j["bound_all"] = bound_report_to_json(r.bound_all);
    j["bound_all"]["binarization"] = "column-mean-threshold";
    if (r.bound_selected_defined) {
        j["bound_selected"] = bound_report_to_json(r.bound_selected);
        j["bound_selected"]["binarization"] = "column-mean-threshold";
    } else {
        j["bound_selected"] = nullptr;
    }
    j["distances"] = {{"sliced_wasserstein",
                       {{"generated_vs_unseen", r.sw_gen_unseen},
                        {"seen_vs_unseen", r.sw_seen_unseen}}},
                      {"kl",
                       {{"generated_vs_unseen", r.div_gen_unseen.kl},
                        {"seen_vs_unseen", r.div_seen_unseen.kl}}},
                      {"hellinger",
                       {{"generated_vs_unseen", r.div_gen_unseen.hellinger},
                        {"seen_vs_unseen", r.div_seen_unseen.hellinger}}},
                      {"bhattacharyya",
                       {{"generated_vs_unseen", r.div_gen_unseen.bhattacharyya},
                        {"seen_vs_unseen", r.div_seen_unseen.bhattacharyya}}}};
    return j;
}

} // namespace zslias

#endif
