// vsdk command line front end.
//
// Verbs: nodes, phantom, sample, interpolate, segment, convergence,
// perturbation. Every verb takes --out/--report file flags and an optional
// --config JSON file whose keys mirror the long option names; explicit
// command-line flags win over config values. Relative output paths are
// redirected into $VSDK_OUT_DIR when that variable is set.
//
// Exit codes: 0 success, 2 parameter/domain error (including bad flags),
// 3 parse error, 4 conditioning error, 5 convergence error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vsdk/errors.hpp"
#include "vsdk/experiments.hpp"
#include "vsdk/io.hpp"

namespace {

using nlohmann::json;

std::string config_scalar(const json& v, const std::string& key) {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_boolean() || v.is_number()) return v.dump();
    throw vsdk::ParseError("config: key '" + key + "' must be scalar or flat array");
}

// Loads a flat JSON object ({"kernel": "gauss", "sweep": [4, 8]}) and feeds
// it into the verb's options. This runs inside the verb callback, after the
// command line has been parsed: only options the user did not give explicitly
// are filled, so flags always win over config values.
void apply_config(CLI::App* cmd, const std::string& path) {
    if (path.empty()) return;
    std::ifstream in(path);
    if (!in) throw vsdk::ParameterError("config: cannot open '" + path + "'");
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw vsdk::ParseError(std::string("config: ") + e.what());
    }
    if (!j.is_object()) throw vsdk::ParseError("config: top level must be a JSON object");
    for (const auto& [key, value] : j.items()) {
        CLI::Option* opt = cmd->get_option_no_throw("--" + key);
        if (opt == nullptr) throw vsdk::ParseError("config: unknown key '" + key + "'");
        if (opt->count() > 0) continue; // explicit flag wins
        try {
            if (value.is_array())
                for (const auto& el : value) opt->add_result(config_scalar(el, key));
            else
                opt->add_result(config_scalar(value, key));
            opt->run_callback();
        } catch (const CLI::Error& e) {
            throw vsdk::ParseError("config: key '" + key + "': " + e.what());
        }
    }
}

void attach_config(CLI::App* cmd, std::string& store) {
    cmd->add_option("--config", store,
                    "JSON config file (keys mirror the long option names)");
}

// Resolves an output path: absolute paths pass through, relative paths are
// placed under $VSDK_OUT_DIR when set; parent directories are created.
std::string out_path(const std::string& p) {
    if (p.empty()) return p;
    namespace fs = std::filesystem;
    fs::path path(p);
    if (path.is_relative()) {
        if (const char* dir = std::getenv("VSDK_OUT_DIR")) path = fs::path(dir) / path;
    }
    std::error_code ec;
    if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
    if (ec)
        throw vsdk::ParameterError("cannot create output directory: " +
                                   path.parent_path().string());
    return path.string();
}

void write_json_report(const std::string& path, const json& j) {
    vsdk::atomic_write(out_path(path), j.dump(2) + "\n");
}

vsdk::Phantom phantom_from_name(const std::string& kind) {
    if (kind == "shepp-logan") return vsdk::Phantom::shepp_logan();
    if (kind == "geometric") return vsdk::Phantom::geometric();
    throw vsdk::ParameterError("unknown phantom '" + kind + "' (shepp-logan, geometric)");
}

// ---------------------------------------------------------------------- nodes

struct NodesOpts {
    int n1 = 33, n2 = 32, eps = 2;
    std::string config, out, report;
};

void run_nodes(const NodesOpts& o) {
    const vsdk::LissajousParams params{o.n1, o.n2, o.eps};
    const vsdk::NodeSet nodes = vsdk::lissajous_nodes(params);
    const double h = vsdk::fill_distance_closed(o.n1, o.n2);
    if (!o.out.empty()) vsdk::write_nodes_csv(out_path(o.out), nodes);
    if (!o.report.empty())
        write_json_report(o.report, {{"n1", o.n1},
                                     {"n2", o.n2},
                                     {"eps", o.eps},
                                     {"count", nodes.size()},
                                     {"h", h}});
    std::cout << "count=" << nodes.size() << " h=" << vsdk::fmt_g17(h) << "\n";
}

void setup_nodes(CLI::App& app) {
    auto o = std::make_shared<NodesOpts>();
    auto* cmd = app.add_subcommand("nodes", "Generate Lissajous sample nodes");
    cmd->add_option("--n1", o->n1, "First frequency");
    cmd->add_option("--n2", o->n2, "Second frequency (coprime with --n1)");
    cmd->add_option("--eps", o->eps, "Curve family, 1 or 2");
    cmd->add_option("--out", o->out, "Node CSV (header x,y)");
    cmd->add_option("--report", o->report, "JSON report");
    attach_config(cmd, o->config);
    cmd->callback([o, cmd] {
        apply_config(cmd, o->config);
        run_nodes(*o);
    });
}

// -------------------------------------------------------------------- phantom

struct PhantomOpts {
    std::string kind = "shepp-logan";
    int grid = 150;
    std::string config, out, csv, report;
};

void run_phantom(const PhantomOpts& o) {
    const vsdk::Phantom ph = phantom_from_name(o.kind);
    const vsdk::NodeSet grid = vsdk::uniform_grid(o.grid);
    const Eigen::VectorXd v = vsdk::sample_phantom(ph, grid);
    if (!o.out.empty())
        vsdk::write_pgm(out_path(o.out), vsdk::image_from_grid_values(v, o.grid));
    if (!o.csv.empty()) vsdk::write_eval_csv(out_path(o.csv), grid, v);
    if (!o.report.empty()) {
        json j = {{"kind", o.kind}, {"grid", o.grid}, {"values", ph.value_set()}};
        if (ph.kind() == vsdk::PhantomKind::SheppLogan)
            j["variant"] = vsdk::shepp_logan_variant();
        write_json_report(o.report, j);
    }
    std::cout << "kind=" << o.kind << " grid=" << o.grid << " min=" << v.minCoeff()
              << " max=" << v.maxCoeff() << "\n";
}

void setup_phantom(CLI::App& app) {
    auto o = std::make_shared<PhantomOpts>();
    auto* cmd = app.add_subcommand("phantom", "Rasterize a test phantom");
    cmd->add_option("--kind", o->kind, "shepp-logan or geometric");
    cmd->add_option("--grid", o->grid, "Raster resolution M (M x M over [-1,1]^2)");
    cmd->add_option("--out", o->out, "PGM image");
    cmd->add_option("--csv", o->csv, "Value CSV (header x,y,v)");
    cmd->add_option("--report", o->report, "JSON report");
    attach_config(cmd, o->config);
    cmd->callback([o, cmd] {
        apply_config(cmd, o->config);
        run_phantom(*o);
    });
}

// --------------------------------------------------------------------- sample

struct SampleOpts {
    std::string kind = "geometric";
    std::string nodes_csv;
    int n1 = 33, n2 = 32, eps = 2;
    std::string config, out, report;
};

void run_sample(const SampleOpts& o) {
    const vsdk::Phantom ph = phantom_from_name(o.kind);
    const vsdk::NodeSet nodes = o.nodes_csv.empty()
                                    ? vsdk::lissajous_nodes({o.n1, o.n2, o.eps})
                                    : vsdk::read_nodes_csv(o.nodes_csv);
    const Eigen::VectorXd f = vsdk::sample_phantom(ph, nodes);
    if (o.out.empty()) throw vsdk::ParameterError("sample: --out is required");
    vsdk::write_data_csv(out_path(o.out), nodes, f);
    if (!o.report.empty())
        write_json_report(o.report, {{"kind", o.kind},
                                     {"count", nodes.size()},
                                     {"min", f.minCoeff()},
                                     {"max", f.maxCoeff()}});
    std::cout << "count=" << nodes.size() << " out=" << o.out << "\n";
}

void setup_sample(CLI::App& app) {
    auto o = std::make_shared<SampleOpts>();
    auto* cmd = app.add_subcommand("sample", "Sample a phantom at scattered nodes");
    cmd->add_option("--kind", o->kind, "shepp-logan or geometric");
    cmd->add_option("--nodes", o->nodes_csv, "Node CSV to sample at (default: Lissajous)");
    cmd->add_option("--n1", o->n1, "Lissajous frequency");
    cmd->add_option("--n2", o->n2, "Lissajous frequency");
    cmd->add_option("--eps", o->eps, "Lissajous family");
    cmd->add_option("--out", o->out, "Data CSV (header x,y,f)")->required();
    cmd->add_option("--report", o->report, "JSON report");
    attach_config(cmd, o->config);
    cmd->callback([o, cmd] {
        apply_config(cmd, o->config);
        run_sample(*o);
    });
}

// ---------------------------------------------------------- interpolate (5.3)

struct InterpolateOpts {
    std::string data;
    std::string kind = "geometric";
    int n1 = 33, n2 = 32, eps = 2;
    std::string kernel = "matern0";
    std::string mode = "vsdk-segment";
    double lambda = 1e-12;
    int grid = 150;
    double psi_factor = 1.0;
    std::string labeling = "kmeans";
    std::vector<double> thresholds;
    int k = 4;
    std::uint64_t seed = 0;
    std::string svm_kernel = "gauss";
    double svm_c = 10.0;
    std::vector<double> alphas;
    std::string config, out, pgm, report;
};

vsdk::PipelineConfig pipeline_config(const InterpolateOpts& o) {
    vsdk::PipelineConfig cfg;
    cfg.spec.family = vsdk::kernel_from_name(o.kernel);
    cfg.mode = vsdk::mode_from_name(o.mode);
    cfg.lambda = o.lambda;
    cfg.grid_m = o.grid;
    if (!o.data.empty()) cfg.data = vsdk::read_data_csv(o.data);
    cfg.phantom = o.kind == "shepp-logan" ? vsdk::PhantomKind::SheppLogan
                                          : vsdk::PhantomKind::Geometric;
    if (o.kind != "shepp-logan" && o.kind != "geometric")
        throw vsdk::ParameterError("unknown phantom '" + o.kind + "'");
    cfg.nodes = {o.n1, o.n2, o.eps};
    cfg.labeling = vsdk::label_strategy_from_name(o.labeling);
    cfg.thresholds = o.thresholds;
    cfg.kmeans_k = o.k;
    cfg.seed = o.seed;
    cfg.svm_spec.family = vsdk::kernel_from_name(o.svm_kernel);
    cfg.svm_c = o.svm_c;
    cfg.alphas = o.alphas;
    cfg.psi_factor = o.psi_factor;
    return cfg;
}

void run_interpolate(const InterpolateOpts& o) {
    const vsdk::PipelineConfig cfg = pipeline_config(o);
    const vsdk::PipelineResult res = vsdk::run_pipeline(cfg);
    if (!o.out.empty())
        vsdk::write_eval_csv(out_path(o.out), vsdk::uniform_grid(cfg.grid_m), res.grid_values);
    if (!o.pgm.empty())
        vsdk::write_pgm(out_path(o.pgm),
                        vsdk::image_from_grid_values(res.grid_values, cfg.grid_m));
    if (!o.report.empty()) vsdk::write_pipeline_report(out_path(o.report), res);
    std::cout << "mode=" << o.mode << " kernel=" << o.kernel
              << " lambda=" << vsdk::fmt_g17(res.lambda_used)
              << " max_node_residual=" << vsdk::fmt_g17(res.max_node_residual);
    if (res.rel_l1) std::cout << " rel_l1=" << vsdk::fmt_g17(*res.rel_l1);
    if (res.rmse) std::cout << " rmse=" << vsdk::fmt_g17(*res.rmse);
    std::cout << "\n";
}

void setup_interpolate(CLI::App& app) {
    auto o = std::make_shared<InterpolateOpts>();
    auto* cmd = app.add_subcommand(
        "interpolate", "Shape-driven reconstruction (labeling, classifier, solve, evaluate)");
    cmd->add_option("--data", o->data, "Training data CSV x,y,f (default: sample the phantom)");
    cmd->add_option("--kind", o->kind, "Phantom: shepp-logan or geometric");
    cmd->add_option("--n1", o->n1, "Lissajous frequency");
    cmd->add_option("--n2", o->n2, "Lissajous frequency");
    cmd->add_option("--eps", o->eps, "Lissajous family");
    cmd->add_option("--kernel", o->kernel, "matern0, matern2, matern4 or gauss");
    cmd->add_option("--mode", o->mode, "rbf, vsdk-known or vsdk-segment");
    cmd->add_option("--lambda", o->lambda, "Regularization weight");
    cmd->add_option("--grid", o->grid, "Evaluation grid resolution M");
    cmd->add_option("--psi-factor", o->psi_factor, "Scale of the known psi (vsdk-known)");
    cmd->add_option("--labeling", o->labeling, "threshold, rbf-coeff or kmeans");
    cmd->add_option("--thresholds", o->thresholds, "Ascending label thresholds")
        ->delimiter(',');
    cmd->add_option("--k", o->k, "k-means cluster count");
    cmd->add_option("--seed", o->seed, "k-means seed");
    cmd->add_option("--svm-kernel", o->svm_kernel, "Classifier kernel");
    cmd->add_option("--svm-c", o->svm_c, "Classifier box constraint C");
    cmd->add_option("--alphas", o->alphas, "Scaling values per class")->delimiter(',');
    cmd->add_option("--out", o->out, "Reconstruction CSV on the grid (x,y,v)");
    cmd->add_option("--pgm", o->pgm, "Reconstruction PGM");
    cmd->add_option("--report", o->report, "JSON report");
    attach_config(cmd, o->config);
    cmd->callback([o, cmd] {
        apply_config(cmd, o->config);
        run_interpolate(*o);
    });
}

// -------------------------------------------------------------------- segment

struct SegmentOpts {
    std::string data;
    std::string kind = "geometric";
    int n1 = 33, n2 = 32, eps = 2;
    std::string kernel = "matern0"; // for rbf-coeff labeling
    std::string labeling = "kmeans";
    std::vector<double> thresholds;
    int k = 4;
    std::uint64_t seed = 0;
    std::string svm_kernel = "gauss";
    double svm_c = 10.0;
    std::vector<double> alphas;
    int grid = 150;
    std::string config, out, model, psi_pgm, report;
};

void run_segment(const SegmentOpts& o) {
    vsdk::NodeSet nodes;
    Eigen::VectorXd values;
    if (!o.data.empty()) {
        vsdk::DataSet ds = vsdk::read_data_csv(o.data);
        nodes = std::move(ds.nodes);
        values = std::move(ds.values);
    } else {
        const vsdk::Phantom ph = phantom_from_name(o.kind);
        nodes = vsdk::lissajous_nodes({o.n1, o.n2, o.eps});
        values = vsdk::sample_phantom(ph, nodes);
    }

    std::vector<int> labels;
    const vsdk::LabelStrategy strategy = vsdk::label_strategy_from_name(o.labeling);
    switch (strategy) {
        case vsdk::LabelStrategy::Threshold:
            labels = vsdk::labels_threshold(
                values, o.thresholds.empty() ? vsdk::mpi_thresholds(values) : o.thresholds);
            break;
        case vsdk::LabelStrategy::RbfCoeff:
            labels = vsdk::labels_rbf_coeff(nodes, values,
                                            {vsdk::kernel_from_name(o.kernel), 1.0},
                                            o.thresholds);
            break;
        case vsdk::LabelStrategy::Kmeans:
            labels = vsdk::labels_kmeans(values, o.k, o.seed);
            break;
    }
    const vsdk::LabeledData ld{nodes, labels};
    if (!o.out.empty()) vsdk::write_labels_csv(out_path(o.out), ld);

    const std::set<int> distinct(labels.begin(), labels.end());
    const std::vector<double> alphas =
        o.alphas.empty() ? vsdk::default_alphas(distinct.size()) : o.alphas;
    const vsdk::KernelSpec svm_spec{vsdk::kernel_from_name(o.svm_kernel), 1.0};

    json report = {{"strategy", o.labeling},
                   {"classes", distinct.size()},
                   {"alphas", alphas},
                   {"svm_kernel", o.svm_kernel},
                   {"svm_c", o.svm_c},
                   {"count", nodes.size()}};

    if (!o.model.empty() || !o.psi_pgm.empty()) {
        // Train once and reuse the models for serialization and rasterizing.
        json stats = json::array();
        std::function<double(std::span<const double>)> psi;
        if (distinct.size() == 2) {
            auto model = std::make_shared<vsdk::SvmModel>(vsdk::svm_train(ld, svm_spec, o.svm_c));
            if (!o.model.empty()) vsdk::save_svm_model(out_path(o.model), *model);
            stats.push_back({{"support", model->support.size()},
                             {"iterations", model->iterations},
                             {"bias", model->bias}});
            const double lo = alphas[0], hi = alphas[1];
            psi = [model, lo, hi](std::span<const double> p) {
                return vsdk::svm_decide(*model, p) > 0 ? hi : lo;
            };
        } else {
            auto ens = std::make_shared<vsdk::MulticlassSvm>(
                vsdk::svm_train_multiclass(ld, svm_spec, o.svm_c));
            if (!o.model.empty()) vsdk::save_svm_ensemble(out_path(o.model), *ens);
            for (const auto& m : ens->models)
                stats.push_back({{"support", m.support.size()},
                                 {"iterations", m.iterations},
                                 {"bias", m.bias}});
            if (alphas.size() != ens->classes.size())
                throw vsdk::ParameterError("segment: " + std::to_string(alphas.size()) +
                                           " alphas for " +
                                           std::to_string(ens->classes.size()) + " classes");
            psi = [ens, alphas](std::span<const double> p) {
                return alphas[ens->classify_index(p)];
            };
        }
        report["svm"] = std::move(stats);
        if (!o.psi_pgm.empty()) {
            const vsdk::NodeSet grid = vsdk::uniform_grid(o.grid);
            Eigen::VectorXd pv(static_cast<Eigen::Index>(grid.size()));
            for (std::size_t i = 0; i < grid.size(); ++i)
                pv(static_cast<Eigen::Index>(i)) = psi(grid.point(i));
            vsdk::write_pgm(out_path(o.psi_pgm), vsdk::image_from_grid_values(pv, o.grid));
        }
    }
    if (!o.report.empty()) write_json_report(o.report, report);
    std::cout << "classes=" << distinct.size() << " count=" << nodes.size() << "\n";
}

void setup_segment(CLI::App& app) {
    auto o = std::make_shared<SegmentOpts>();
    auto* cmd =
        app.add_subcommand("segment", "Label data and train the edge classifier psi");
    cmd->add_option("--data", o->data, "Training data CSV x,y,f (default: sample the phantom)");
    cmd->add_option("--kind", o->kind, "Phantom: shepp-logan or geometric");
    cmd->add_option("--n1", o->n1, "Lissajous frequency");
    cmd->add_option("--n2", o->n2, "Lissajous frequency");
    cmd->add_option("--eps", o->eps, "Lissajous family");
    cmd->add_option("--kernel", o->kernel, "Interpolation kernel for rbf-coeff labeling");
    cmd->add_option("--labeling", o->labeling, "threshold, rbf-coeff or kmeans");
    cmd->add_option("--thresholds", o->thresholds, "Ascending label thresholds")
        ->delimiter(',');
    cmd->add_option("--k", o->k, "k-means cluster count");
    cmd->add_option("--seed", o->seed, "k-means seed");
    cmd->add_option("--svm-kernel", o->svm_kernel, "Classifier kernel");
    cmd->add_option("--svm-c", o->svm_c, "Classifier box constraint C");
    cmd->add_option("--alphas", o->alphas, "Scaling values per class")->delimiter(',');
    cmd->add_option("--grid", o->grid, "psi raster resolution");
    cmd->add_option("--out", o->out, "Labeled-data CSV (x,y,z)");
    cmd->add_option("--model", o->model, "Model JSON (binary model or OVR ensemble)");
    cmd->add_option("--psi-pgm", o->psi_pgm, "Rasterized psi PGM");
    cmd->add_option("--report", o->report, "JSON report");
    attach_config(cmd, o->config);
    cmd->callback([o, cmd] {
        apply_config(cmd, o->config);
        run_segment(*o);
    });
}

// ---------------------------------------------------------- convergence (4.2)

struct ConvergenceOpts {
    std::string kernel = "matern0";
    std::string mode = "vsdk-known";
    double lambda = 1e-12;
    int grid = 150;
    double psi_factor = 0.5;
    std::vector<int> sweep;
    std::string config, out, report;
};

void run_convergence_cmd(const ConvergenceOpts& o) {
    vsdk::ConvergenceConfig cfg;
    cfg.spec.family = vsdk::kernel_from_name(o.kernel);
    cfg.mode = vsdk::mode_from_name(o.mode);
    cfg.lambda = o.lambda;
    cfg.grid_m = o.grid;
    cfg.psi_factor = o.psi_factor;
    if (!o.sweep.empty()) {
        cfg.sweep.clear();
        for (int n : o.sweep) cfg.sweep.emplace_back(n, n + 1);
    }
    const vsdk::ConvergenceResult res = vsdk::run_convergence(cfg);
    if (!o.out.empty()) vsdk::write_convergence_csv(out_path(o.out), res);
    if (!o.report.empty()) vsdk::write_convergence_report(out_path(o.report), res);
    std::cout << "kernel=" << o.kernel << " mode=" << o.mode
              << " slope=" << vsdk::fmt_g17(res.slope) << "\n";
}

void setup_convergence(CLI::App& app) {
    auto o = std::make_shared<ConvergenceOpts>();
    auto* cmd = app.add_subcommand(
        "convergence", "Convergence-rate sweep over Lissajous node families (n, n+1)");
    cmd->add_option("--kernel", o->kernel, "matern0, matern2, matern4 or gauss");
    cmd->add_option("--mode", o->mode, "rbf or vsdk-known");
    cmd->add_option("--lambda", o->lambda, "Regularization weight");
    cmd->add_option("--grid", o->grid, "Evaluation grid resolution M");
    cmd->add_option("--psi-factor", o->psi_factor, "psi = factor * phantom");
    cmd->add_option("--sweep", o->sweep, "n values, each contributing the pair (n, n+1)")
        ->delimiter(',');
    cmd->add_option("--out", o->out, "Table CSV (n1,n2,count,h,rmse)");
    cmd->add_option("--report", o->report, "JSON report");
    attach_config(cmd, o->config);
    cmd->callback([o, cmd] {
        apply_config(cmd, o->config);
        run_convergence_cmd(*o);
    });
}

// --------------------------------------------------------- perturbation (4.3)

struct PerturbationOpts {
    std::string kernel = "matern0";
    double lambda = 1e-12;
    int grid = 150;
    int n1 = 10, n2 = 11;
    double psi_factor = 1.0;
    std::vector<double> offsets{0.0, 0.05, 0.15, 0.3};
    std::string config, out, report;
};

void run_perturbation_cmd(const PerturbationOpts& o) {
    vsdk::PerturbationConfig cfg;
    cfg.spec.family = vsdk::kernel_from_name(o.kernel);
    cfg.lambda = o.lambda;
    cfg.grid_m = o.grid;
    cfg.nodes = {o.n1, o.n2, 2};
    cfg.psi_factor = o.psi_factor;
    cfg.offsets = o.offsets;
    const vsdk::PerturbationResult res = vsdk::run_perturbation(cfg);
    if (!o.out.empty()) {
        for (std::size_t i = 0; i < res.rows.size(); ++i) {
            const auto& row = res.rows[i];
            const std::string base = o.out + "-offset" + std::to_string(i);
            vsdk::write_pgm(out_path(base + ".pgm"),
                            vsdk::image_from_grid_values(row.grid_values, cfg.grid_m));
            vsdk::write_pgm(out_path(base + "-diff.pgm"),
                            vsdk::image_from_grid_values(
                                (row.grid_values - res.truth_grid).cwiseAbs(), cfg.grid_m));
        }
    }
    if (!o.report.empty()) vsdk::write_perturbation_report(out_path(o.report), res);
    for (const auto& row : res.rows)
        std::cout << "offset=" << row.offset << " rel_l1=" << vsdk::fmt_g17(row.rel_l1)
                  << " max_node_residual=" << vsdk::fmt_g17(row.max_node_residual) << "\n";
}

void setup_perturbation(CLI::App& app) {
    auto o = std::make_shared<PerturbationOpts>();
    auto* cmd = app.add_subcommand(
        "perturbation", "Reconstructions under horizontally shifted scaling functions");
    cmd->add_option("--kernel", o->kernel, "matern0, matern2, matern4 or gauss");
    cmd->add_option("--lambda", o->lambda, "Regularization weight");
    cmd->add_option("--grid", o->grid, "Evaluation grid resolution M");
    cmd->add_option("--n1", o->n1, "Lissajous frequency");
    cmd->add_option("--n2", o->n2, "Lissajous frequency");
    cmd->add_option("--psi-factor", o->psi_factor, "psi = factor * shifted phantom");
    cmd->add_option("--offsets", o->offsets, "Horizontal shifts of the scaling rectangle")
        ->delimiter(',');
    cmd->add_option("--out", o->out, "Path prefix for per-offset PGM images");
    cmd->add_option("--report", o->report, "JSON report");
    attach_config(cmd, o->config);
    cmd->callback([o, cmd] {
        apply_config(cmd, o->config);
        run_perturbation_cmd(*o);
    });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Variably scaled discontinuous kernel interpolation toolkit"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "vsdk 0.1.0");

    setup_nodes(app);
    setup_phantom(app);
    setup_sample(app);
    setup_interpolate(app);
    setup_segment(app);
    setup_convergence(app);
    setup_perturbation(app);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2; // command-line usage problems are parameter errors
    } catch (const vsdk::ConditioningError& e) {
        std::cerr << "vsdk: conditioning error: " << e.what() << "\n";
        return 4;
    } catch (const vsdk::ConvergenceError& e) {
        std::cerr << "vsdk: convergence error: " << e.what() << "\n";
        return 5;
    } catch (const vsdk::ParseError& e) {
        std::cerr << "vsdk: parse error: " << e.what() << "\n";
        return 3;
    } catch (const vsdk::ParameterError& e) {
        std::cerr << "vsdk: parameter error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "vsdk: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
