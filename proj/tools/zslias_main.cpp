// zslias: zero-shot learning with iterative attribute selection.
//
// Subcommands map 1:1 onto library operations; `pipeline` runs the whole
// flow. Every run writes its fully-resolved configuration into the output
// directory so reruns are diffable. Master seed fans out to module seeds
// with fixed offsets: +1 generator training, +2 generation, +3 selection,
// +4 bilinear training, +5 attribute classifiers.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "zslias/dataset.hpp"
#include "zslias/ecoc.hpp"
#include "zslias/ias.hpp"
#include "zslias/io.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace zslias;

namespace {

void write_config(const fs::path& out, const json& cfg) {
    fs::create_directories(out);
    std::ofstream f(out / "config.json");
    f << cfg.dump(2) << '\n';
}

void write_json(const fs::path& path, const json& j) {
    std::ofstream f(path);
    f << j.dump(2) << '\n';
}

RankMode parse_r_mode(const std::string& s) {
    if (s == "uniform") return RankMode::kUniform;
    if (s == "ale-rank") return RankMode::kAleRank;
    throw std::invalid_argument("unknown --r-mode '" + s + "'");
}

struct CommonFlags {
    std::string out;
    std::uint64_t seed = 0;
    int threads = 1;
};

int resolve_max_select(int max_select, double select_frac, int n_attr) {
    if (max_select > 0) return max_select;
    if (select_frac > 0) return static_cast<int>(std::ceil(select_frac * n_attr));
    return static_cast<int>(std::ceil(0.2 * n_attr));
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zslias: attribute selection for zero-shot learning"};
    app.require_subcommand(1);

    // synth
    auto* synth = app.add_subcommand("synth", "Generate a planted synthetic dataset directory");
    int sy_seen = 10, sy_unseen = 4, sy_info = 8, sy_noise = 8, sy_spc = 100, sy_d = 16;
    double sy_sigma = 0.1;
    CommonFlags sy;
    synth->add_option("--seen-classes", sy_seen, "number of seen classes");
    synth->add_option("--unseen-classes", sy_unseen, "number of unseen classes");
    synth->add_option("--informative", sy_info, "informative attribute count");
    synth->add_option("--noise", sy_noise, "noise attribute count");
    synth->add_option("--samples-per-class", sy_spc, "samples per class");
    synth->add_option("--dim", sy_d, "feature dimension d");
    synth->add_option("--noise-sigma", sy_sigma, "feature noise sigma");
    synth->add_option("--seed", sy.seed, "RNG seed");
    synth->add_option("--out", sy.out, "output dataset directory")->required();

    // train-avae
    auto* tavae = app.add_subcommand("train-avae", "Train the attribute-conditioned VAE");
    std::string ta_data;
    AvaeHyper ta_hyper;
    CommonFlags ta;
    tavae->add_option("--data", ta_data, "dataset directory")->required();
    tavae->add_option("--out", ta.out, "output directory")->required();
    tavae->add_option("--seed", ta.seed, "master seed (generator trains with seed+1)");
    tavae->add_option("--z-dim", ta_hyper.z_dim, "latent dimension");
    tavae->add_option("--hidden", ta_hyper.hidden, "hidden width");
    tavae->add_option("--recon-sigma", ta_hyper.recon_sigma, "decoder likelihood sigma");
    tavae->add_option("--lr", ta_hyper.lr, "learning rate");
    tavae->add_option("--epochs", ta_hyper.epochs, "training epochs");
    tavae->add_option("--batch", ta_hyper.batch, "minibatch size");

    // generate
    auto* gen = app.add_subcommand("generate", "Generate out-of-the-box data for unseen classes");
    std::string g_data, g_model;
    int g_npc = 50;
    CommonFlags g;
    gen->add_option("--data", g_data, "dataset directory (attributes and split)")->required();
    gen->add_option("--model", g_model, "trained AVAE directory")->required();
    gen->add_option("--n-per-class", g_npc, "samples per unseen class");
    gen->add_option("--seed", g.seed, "master seed (generation uses seed+2)");
    gen->add_option("--out", g.out, "output dataset directory")->required();

    // select
    auto* sel = app.add_subcommand("select", "Iterative attribute selection on generated data");
    std::string s_data, s_rmode = "uniform";
    IasHyper s_hyper;
    double s_frac = 0.0;
    CommonFlags s;
    sel->add_option("--data", s_data, "generated dataset directory")->required();
    sel->add_option("--out", s.out, "output directory")->required();
    sel->add_option("--seed", s.seed, "master seed (selection uses seed+3)");
    sel->add_option("--alpha", s_hyper.alpha, "regularization strength");
    sel->add_option("--lr", s_hyper.lr, "inner gradient step size");
    sel->add_option("--inner-epochs", s_hyper.inner_epochs, "gradient steps per iteration");
    sel->add_option("--epsilon", s_hyper.epsilon, "stopping threshold on the loss");
    sel->add_option("--max-select", s_hyper.max_select, "selection budget (0 = 20% of N_a)");
    sel->add_option("--select-frac", s_frac, "selection budget as a fraction of N_a");
    sel->add_option("--r-mode", s_rmode, "hinge weighting: uniform or ale-rank");
    sel->add_option("--threads", s_hyper.threads, "candidate sweep threads");

    // train
    auto* tr = app.add_subcommand("train", "Train the bilinear ZSL model on seen data");
    std::string t_data, t_selection;
    std::string t_rmode = "uniform";
    BilinearHyper t_hyper;
    CommonFlags t;
    tr->add_option("--data", t_data, "dataset directory")->required();
    tr->add_option("--selection", t_selection, "selection JSON (default: all attributes)");
    tr->add_option("--out", t.out, "output model directory")->required();
    tr->add_option("--seed", t.seed, "master seed (training uses seed+4)");
    tr->add_option("--alpha", t_hyper.alpha, "regularization strength");
    tr->add_option("--lr", t_hyper.lr, "gradient step size");
    tr->add_option("--epochs", t_hyper.epochs, "training epochs");
    tr->add_option("--r-mode", t_rmode, "hinge weighting: uniform or ale-rank");

    // eval
    auto* ev = app.add_subcommand("eval", "Evaluate a bilinear model on the unseen split");
    std::string e_data, e_model, e_selection;
    CommonFlags e;
    ev->add_option("--data", e_data, "dataset directory")->required();
    ev->add_option("--model", e_model, "bilinear model directory")->required();
    ev->add_option("--selection", e_selection, "selection JSON (default: all attributes)");
    ev->add_option("--out", e.out, "output directory")->required();

    // bound
    auto* bo = app.add_subcommand("bound", "Compute the codeword generalization bound report");
    std::string b_preds, b_attrs, b_labels, b_out;
    bo->add_option("--preds", b_preds, "predicted codewords CSV (N x N_a, binary)")->required();
    bo->add_option("--attrs", b_attrs, "attributes.csv (dataset format; binarized internally)")
        ->required();
    bo->add_option("--labels", b_labels, "labels.csv (class name per row)")->required();
    bo->add_option("--out", b_out, "optional output directory for bound.json");

    // pipeline
    auto* pi = app.add_subcommand("pipeline", "Run the full selection pipeline end to end");
    std::string p_data, p_rmode = "uniform";
    bool p_synth_default = false;
    PipelineHyper p_hyper;
    double p_frac = 0.0;
    CommonFlags p;
    pi->add_option("--data", p_data, "dataset directory");
    pi->add_flag("--synth-default", p_synth_default,
                 "use the built-in synthetic benchmark instead of --data");
    pi->add_option("--out", p.out, "output directory")->required();
    pi->add_option("--seed", p.seed, "master seed");
    pi->add_option("--alpha", p_hyper.ias.alpha, "regularization strength");
    pi->add_option("--lr", p_hyper.ias.lr, "gradient step size");
    pi->add_option("--epochs", p_hyper.bilinear.epochs, "bilinear training epochs");
    pi->add_option("--inner-epochs", p_hyper.ias.inner_epochs, "IAS gradient steps per iteration");
    pi->add_option("--epsilon", p_hyper.ias.epsilon, "IAS stopping threshold");
    pi->add_option("--max-select", p_hyper.ias.max_select, "selection budget (0 = 20% of N_a)");
    pi->add_option("--select-frac", p_frac, "selection budget as a fraction of N_a");
    pi->add_option("--r-mode", p_rmode, "hinge weighting: uniform or ale-rank");
    pi->add_option("--z-dim", p_hyper.avae.z_dim, "AVAE latent dimension");
    pi->add_option("--hidden", p_hyper.avae.hidden, "AVAE hidden width");
    pi->add_option("--recon-sigma", p_hyper.avae.recon_sigma, "AVAE decoder sigma");
    pi->add_option("--avae-lr", p_hyper.avae.lr, "AVAE learning rate");
    pi->add_option("--avae-epochs", p_hyper.avae.epochs, "AVAE training epochs");
    pi->add_option("--n-per-class", p_hyper.n_per_class, "generated samples per unseen class");
    pi->add_option("--threads", p_hyper.ias.threads, "candidate sweep threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& err) {
        return app.exit(err) == 0 ? 0 : 1;
    }

    try {
        if (*synth) {
            auto res = synth_generate(sy_seen, sy_unseen, sy_info, sy_noise, sy_spc, sy_d,
                                      sy_sigma, sy.seed);
            save_dataset(sy.out, concat(res.seen, res.unseen), res.attributes, res.split);
            write_config(sy.out, json{{"subcommand", "synth"},
                                      {"seen_classes", sy_seen},
                                      {"unseen_classes", sy_unseen},
                                      {"informative", sy_info},
                                      {"noise", sy_noise},
                                      {"samples_per_class", sy_spc},
                                      {"dim", sy_d},
                                      {"noise_sigma", sy_sigma},
                                      {"seed", sy.seed},
                                      {"out", sy.out}});
        } else if (*tavae) {
            auto loaded = load_dataset(ta_data);
            auto seen = subset_by_classes(loaded.data, loaded.split.seen_classes, DataRole::kSeen);
            ta_hyper.seed = ta.seed + 1;
            auto res = train_avae(seen, loaded.attributes, ta_hyper);
            save_avae(ta.out, res.model);
            {
                std::ofstream f(fs::path(ta.out) / "elbo_history.csv");
                f << "epoch,elbo\n";
                for (std::size_t i = 0; i < res.elbo_history.size(); ++i)
                    f << i << ',' << format_double(res.elbo_history[i]) << '\n';
            }
            write_config(ta.out, json{{"subcommand", "train-avae"},
                                      {"data", ta_data},
                                      {"seed", ta.seed},
                                      {"z_dim", ta_hyper.z_dim},
                                      {"hidden", ta_hyper.hidden},
                                      {"recon_sigma", ta_hyper.recon_sigma},
                                      {"lr", ta_hyper.lr},
                                      {"epochs", ta_hyper.epochs},
                                      {"batch", ta_hyper.batch},
                                      {"out", ta.out}});
        } else if (*gen) {
            auto loaded = load_dataset(g_data);
            auto model = load_avae(g_model);
            auto ds = avae_generate(model, loaded.attributes, loaded.split.unseen_classes, g_npc,
                                    g.seed + 2);
            save_dataset(g.out, ds, loaded.attributes, loaded.split);
            write_config(g.out, json{{"subcommand", "generate"},
                                     {"data", g_data},
                                     {"model", g_model},
                                     {"n_per_class", g_npc},
                                     {"seed", g.seed},
                                     {"out", g.out}});
        } else if (*sel) {
            auto loaded = load_dataset(s_data);
            s_hyper.r_mode = parse_r_mode(s_rmode);
            s_hyper.max_select = resolve_max_select(
                s_hyper.max_select, s_frac, static_cast<int>(loaded.attributes.n_attributes()));
            s_hyper.seed = s.seed + 3;
            Dataset gen_ds = loaded.data;
            gen_ds.role = DataRole::kGenerated;
            auto res = select_attributes(gen_ds, loaded.attributes, s_hyper);
            fs::create_directories(s.out);
            save_selection(fs::path(s.out) / "selection.json", res.selection,
                           loaded.attributes.attr_names);
            save_trace(fs::path(s.out) / "trace.csv", res.trace, loaded.attributes.attr_names);
            write_config(s.out, json{{"subcommand", "select"},
                                     {"data", s_data},
                                     {"seed", s.seed},
                                     {"alpha", s_hyper.alpha},
                                     {"lr", s_hyper.lr},
                                     {"inner_epochs", s_hyper.inner_epochs},
                                     {"epsilon", s_hyper.epsilon},
                                     {"max_select", s_hyper.max_select},
                                     {"r_mode", s_rmode},
                                     {"threads", s_hyper.threads},
                                     {"out", s.out}});
        } else if (*tr) {
            auto loaded = load_dataset(t_data);
            auto seen = subset_by_classes(loaded.data, loaded.split.seen_classes, DataRole::kSeen);
            SelectionVector mask =
                t_selection.empty()
                    ? SelectionVector::ones(loaded.attributes.n_attributes())
                    : load_selection(t_selection, loaded.attributes.attr_names);
            t_hyper.r_mode = parse_r_mode(t_rmode);
            t_hyper.seed = t.seed + 4;
            auto res = train_bilinear(seen, loaded.attributes, mask, loaded.split.seen_classes,
                                      t_hyper);
            save_bilinear(t.out, res.model);
            {
                std::ofstream f(fs::path(t.out) / "loss_history.csv");
                f << "epoch,loss\n";
                for (std::size_t i = 0; i < res.loss_history.size(); ++i)
                    f << i << ',' << format_double(res.loss_history[i]) << '\n';
            }
            write_config(t.out, json{{"subcommand", "train"},
                                     {"data", t_data},
                                     {"selection", t_selection},
                                     {"seed", t.seed},
                                     {"alpha", t_hyper.alpha},
                                     {"lr", t_hyper.lr},
                                     {"epochs", t_hyper.epochs},
                                     {"r_mode", t_rmode},
                                     {"out", t.out}});
        } else if (*ev) {
            auto loaded = load_dataset(e_data);
            auto model = load_bilinear(e_model);
            auto unseen =
                subset_by_classes(loaded.data, loaded.split.unseen_classes, DataRole::kUnseen);
            SelectionVector mask =
                e_selection.empty()
                    ? SelectionVector::ones(loaded.attributes.n_attributes())
                    : load_selection(e_selection, loaded.attributes.attr_names);
            std::vector<int> preds(unseen.size());
            for (std::size_t i = 0; i < unseen.size(); ++i)
                preds[i] = predict(unseen.features.row(i), model.w, loaded.attributes, mask,
                                   loaded.split.unseen_classes);
            // local class indices for the confusion matrix
            std::vector<int> local(loaded.attributes.n_classes(), -1);
            std::vector<std::string> names;
            for (std::size_t i = 0; i < loaded.split.unseen_classes.size(); ++i) {
                local[loaded.split.unseen_classes[i]] = static_cast<int>(i);
                names.push_back(loaded.attributes.class_names[loaded.split.unseen_classes[i]]);
            }
            std::vector<int> pl(preds.size()), ll(preds.size());
            for (std::size_t i = 0; i < preds.size(); ++i) {
                pl[i] = local[preds[i]];
                ll[i] = local[unseen.labels[i]];
            }
            auto cm = confusion(pl, ll, static_cast<int>(names.size()), names);
            fs::create_directories(e.out);
            write_json(fs::path(e.out) / "metrics.json",
                       json{{"per_class_accuracy", per_class_accuracy(preds, unseen.labels)}});
            save_confusion(fs::path(e.out) / "confusion.csv", cm);
            write_config(e.out, json{{"subcommand", "eval"},
                                     {"data", e_data},
                                     {"model", e_model},
                                     {"selection", e_selection},
                                     {"out", e.out}});
        } else if (*bo) {
            Matrix preds = load_matrix_csv(b_preds);
            // attributes.csv in dataset format
            auto attr_lines = read_lines(b_attrs);
            AttributeMatrix am;
            am.attr_names = split_csv_line(attr_lines.at(0));
            am.values = Matrix(attr_lines.size() - 1, am.attr_names.size());
            for (std::size_t r = 0; r + 1 < attr_lines.size(); ++r) {
                auto fields = split_csv_line(attr_lines[r + 1]);
                am.class_names.push_back(fields.at(0));
                for (std::size_t c = 0; c < am.attr_names.size(); ++c)
                    am.values(r, c) = parse_decimal(fields.at(c + 1), b_attrs);
            }
            auto labels_raw = read_lines(b_labels);
            std::vector<int> labels;
            for (const auto& name : labels_raw) {
                auto it = std::find(am.class_names.begin(), am.class_names.end(), name);
                if (it == am.class_names.end())
                    throw std::runtime_error("bound: unknown class '" + name + "'");
                labels.push_back(static_cast<int>(it - am.class_names.begin()));
            }
            Matrix codebook = binarize_attributes(am);
            auto report = make_bound_report(preds, labels, codebook);
            json j = bound_report_to_json(report);
            j["binarization"] = "column-mean-threshold";
            std::cout << j.dump(2) << '\n';
            if (!b_out.empty()) {
                fs::create_directories(b_out);
                write_json(fs::path(b_out) / "bound.json", j);
                write_config(b_out, json{{"subcommand", "bound"},
                                         {"preds", b_preds},
                                         {"attrs", b_attrs},
                                         {"labels", b_labels},
                                         {"out", b_out}});
            }
        } else if (*pi) {
            if (p_data.empty() && !p_synth_default)
                throw std::invalid_argument("pipeline: give --data or --synth-default");
            Dataset seen, unseen;
            AttributeMatrix attrs;
            SplitSpec split;
            if (p_synth_default) {
                auto res = synth_generate(10, 4, 8, 8, 100, 16, 0.1, p.seed);
                seen = res.seen;
                unseen = res.unseen;
                attrs = res.attributes;
                split = res.split;
            } else {
                auto loaded = load_dataset(p_data);
                seen = subset_by_classes(loaded.data, loaded.split.seen_classes, DataRole::kSeen);
                unseen = subset_by_classes(loaded.data, loaded.split.unseen_classes,
                                           DataRole::kUnseen);
                attrs = loaded.attributes;
                split = loaded.split;
            }
            p_hyper.seed = p.seed;
            p_hyper.ias.r_mode = parse_r_mode(p_rmode);
            p_hyper.bilinear.r_mode = p_hyper.ias.r_mode;
            p_hyper.bilinear.alpha = p_hyper.ias.alpha;
            p_hyper.bilinear.lr = p_hyper.ias.lr;
            p_hyper.ias.max_select = resolve_max_select(
                p_hyper.ias.max_select, p_frac, static_cast<int>(attrs.n_attributes()));
            auto result = run_pipeline(seen, unseen, attrs, split, p_hyper);
            fs::create_directories(p.out);
            write_json(fs::path(p.out) / "report.json", pipeline_report_json(result, attrs));
            save_selection(fs::path(p.out) / "selection.json", result.selection,
                           attrs.attr_names);
            save_trace(fs::path(p.out) / "trace.csv", result.trace, attrs.attr_names);
            save_confusion(fs::path(p.out) / "confusion.csv", result.confusion_ias);
            save_dataset(fs::path(p.out) / "generated", result.generated, attrs, split);
            write_config(p.out, json{{"subcommand", "pipeline"},
                                     {"data", p_data},
                                     {"synth_default", p_synth_default},
                                     {"seed", p.seed},
                                     {"alpha", p_hyper.ias.alpha},
                                     {"lr", p_hyper.ias.lr},
                                     {"epochs", p_hyper.bilinear.epochs},
                                     {"inner_epochs", p_hyper.ias.inner_epochs},
                                     {"epsilon", p_hyper.ias.epsilon},
                                     {"max_select", p_hyper.ias.max_select},
                                     {"r_mode", p_rmode},
                                     {"z_dim", p_hyper.avae.z_dim},
                                     {"hidden", p_hyper.avae.hidden},
                                     {"recon_sigma", p_hyper.avae.recon_sigma},
                                     {"avae_lr", p_hyper.avae.lr},
                                     {"avae_epochs", p_hyper.avae.epochs},
                                     {"n_per_class", p_hyper.n_per_class},
                                     {"threads", p_hyper.ias.threads},
                                     {"out", p.out}});
        }
    } catch (const NumericalError& ex) {
        std::cerr << "numerical failure: " << ex.what() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 1;
    }
    return 0;
}
