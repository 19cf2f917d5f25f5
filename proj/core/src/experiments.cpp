#include "vsdk/experiments.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <set>
#include <utility>

#include <json.hpp>

#include "vsdk/errors.hpp"
#include "vsdk/io.hpp"

namespace vsdk {

namespace {

using nlohmann::json;

// Rethrows any toolkit error with the pipeline step prepended, preserving
// the error type (and with it the CLI exit code).
template <typename Fn>
auto step(const char* name, Fn&& fn) -> decltype(fn()) {
    try {
        return fn();
    } catch (const DomainError& e) {
        throw DomainError(std::string(name) + ": " + e.what());
    } catch (const ConditioningError& e) {
        throw ConditioningError(std::string(name) + ": " + e.what(), e.final_lambda());
    } catch (const ConvergenceError& e) {
        throw ConvergenceError(std::string(name) + ": " + e.what());
    } catch (const ParseError& e) {
        throw ParseError(std::string(name) + ": " + e.what(), e.line());
    } catch (const ParameterError& e) {
        throw ParameterError(std::string(name) + ": " + e.what());
    }
}

json spec_json(const KernelSpec& spec) {
    return {{"name", kernel_name(spec.family)}, {"scale", spec.scale}};
}

json lissajous_json(const LissajousParams& p) {
    return {{"n1", p.n1}, {"n2", p.n2}, {"eps", p.eps}};
}

json geometric_json(const GeometricParams& g) {
    return {{"ellipse", {{"cx", g.e_cx}, {"cy", g.e_cy}, {"a", g.e_a}, {"b", g.e_b}}},
            {"rectangle", {{"x0", g.r_x0}, {"x1", g.r_x1}, {"y0", g.r_y0}, {"y1", g.r_y1}}},
            {"parabola",
             {{"x0", g.p_x0},
              {"y0", g.p_y0},
              {"a", g.p_a},
              {"ymin", g.p_ymin},
              {"halfwidth", g.p_halfwidth}}},
            {"weights", {{"ellipse", g.w_e}, {"rectangle", g.w_r}, {"parabola", g.w_p}}}};
}

Phantom make_phantom(PhantomKind kind, const GeometricParams& geometric) {
    return kind == PhantomKind::SheppLogan ? Phantom::shepp_logan()
                                           : Phantom::geometric(geometric);
}

} // namespace

std::string mode_name(Mode mode) {
    switch (mode) {
        case Mode::Rbf: return "rbf";
        case Mode::VsdkKnown: return "vsdk-known";
        case Mode::VsdkSegment: return "vsdk-segment";
    }
    throw ParameterError("mode_name: invalid mode");
}

Mode mode_from_name(const std::string& name) {
    if (name == "rbf") return Mode::Rbf;
    if (name == "vsdk-known") return Mode::VsdkKnown;
    if (name == "vsdk-segment") return Mode::VsdkSegment;
    throw ParameterError("unknown mode '" + name + "' (rbf, vsdk-known, vsdk-segment)");
}

std::string label_strategy_name(LabelStrategy strategy) {
    switch (strategy) {
        case LabelStrategy::Threshold: return "threshold";
        case LabelStrategy::RbfCoeff: return "rbf-coeff";
        case LabelStrategy::Kmeans: return "kmeans";
    }
    throw ParameterError("label_strategy_name: invalid strategy");
}

LabelStrategy label_strategy_from_name(const std::string& name) {
    if (name == "threshold") return LabelStrategy::Threshold;
    if (name == "rbf-coeff") return LabelStrategy::RbfCoeff;
    if (name == "kmeans") return LabelStrategy::Kmeans;
    throw ParameterError("unknown labeling strategy '" + name +
                         "' (threshold, rbf-coeff, kmeans)");
}

std::vector<std::pair<int, int>> default_sweep() {
    std::vector<std::pair<int, int>> sweep;
    for (int n = 4; n <= 40; n += 4) sweep.emplace_back(n, n + 1);
    return sweep;
}

std::vector<double> mpi_thresholds(const Eigen::VectorXd& values) {
    if (values.size() == 0) throw ParameterError("mpi_thresholds: empty values");
    return {values.minCoeff(), values.maxCoeff() / 5.0, values.maxCoeff() + 1.0};
}

ConvergenceResult run_convergence(const ConvergenceConfig& config) {
    if (config.mode == Mode::VsdkSegment)
        throw ParameterError("run_convergence: mode must be rbf or vsdk-known");
    if (config.sweep.empty()) throw ParameterError("run_convergence: empty sweep");

    const auto phantom = std::make_shared<const Phantom>(Phantom::shepp_logan());
    const NodeSet grid = uniform_grid(config.grid_m);
    const Eigen::VectorXd truth = sample_phantom(*phantom, grid);
    std::optional<ScalingFunction> psi;
    if (config.mode == Mode::VsdkKnown) psi = make_phantom_scaling(phantom, config.psi_factor);

    ConvergenceResult result;
    result.config = config;
    std::vector<double> hs, errs;
    for (const auto& [n1, n2] : config.sweep) {
        const NodeSet nodes = lissajous_nodes({n1, n2, 2});
        const Eigen::VectorXd f = sample_phantom(*phantom, nodes);
        const Interpolant interp = fit(nodes, f, config.spec, psi, config.lambda);
        const Eigen::VectorXd approx = evaluate(interp, grid);

        ConvergencePair row;
        row.n1 = n1;
        row.n2 = n2;
        row.count = nodes.size();
        row.h = fill_distance_closed(n1, n2);
        row.rmse = rmse(approx, truth);
        row.max_node_residual = max_node_residual(interp);
        result.pairs.push_back(row);
        hs.push_back(row.h);
        errs.push_back(row.rmse);
    }
    const LogLogFit line = loglog_fit(hs, errs);
    result.slope = line.slope;
    result.intercept = line.intercept;
    result.residuals = line.residuals;
    return result;
}

void write_convergence_report(const std::string& path, const ConvergenceResult& result) {
    const ConvergenceConfig& c = result.config;
    json pairs = json::array();
    for (const auto& p : result.pairs)
        pairs.push_back({{"n1", p.n1},
                         {"n2", p.n2},
                         {"count", p.count},
                         {"h", p.h},
                         {"rmse", p.rmse},
                         {"max_node_residual", p.max_node_residual}});
    json sweep = json::array();
    for (const auto& [n1, n2] : c.sweep) sweep.push_back({n1, n2});
    const json j = {{"kernel", kernel_name(c.spec.family)},
                    {"mode", mode_name(c.mode)},
                    {"lambda", c.lambda},
                    {"grid", c.grid_m},
                    {"pairs", pairs},
                    {"slope", result.slope},
                    {"intercept", result.intercept},
                    {"residuals", result.residuals},
                    {"config",
                     {{"kernel", spec_json(c.spec)},
                      {"mode", mode_name(c.mode)},
                      {"lambda", c.lambda},
                      {"grid", c.grid_m},
                      {"psi_factor", c.psi_factor},
                      {"sweep", sweep}}}};
    atomic_write(path, j.dump(2) + "\n");
}

void write_convergence_csv(const std::string& path, const ConvergenceResult& result) {
    std::string out = "n1,n2,count,h,rmse\n";
    for (const auto& p : result.pairs)
        out += std::to_string(p.n1) + "," + std::to_string(p.n2) + "," +
               std::to_string(p.count) + "," + fmt_g17(p.h) + "," + fmt_g17(p.rmse) + "\n";
    atomic_write(path, out);
}

PipelineResult run_pipeline(const PipelineConfig& config) {
    PipelineResult result;
    result.config = config;

    std::shared_ptr<const Phantom> phantom;
    NodeSet nodes;
    Eigen::VectorXd values;
    bool have_truth = false;
    if (config.data) {
        nodes = config.data->nodes;
        values = config.data->values;
        if (static_cast<std::size_t>(values.size()) != nodes.size())
            throw ParameterError("run_pipeline: data nodes/values length mismatch");
    } else {
        phantom = std::make_shared<const Phantom>(make_phantom(config.phantom, config.geometric));
        nodes = lissajous_nodes(config.nodes);
        values = sample_phantom(*phantom, nodes);
        have_truth = true;
    }

    std::optional<ScalingFunction> psi;
    if (config.mode == Mode::VsdkSegment) {
        result.labels = step("step 1 (labeling)", [&] {
            switch (config.labeling) {
                case LabelStrategy::Threshold:
                    return labels_threshold(values, config.thresholds.empty()
                                                        ? mpi_thresholds(values)
                                                        : config.thresholds);
                case LabelStrategy::RbfCoeff:
                    return labels_rbf_coeff(nodes, values, config.spec, config.thresholds);
                case LabelStrategy::Kmeans:
                    return labels_kmeans(values, config.kmeans_k, config.seed);
            }
            throw ParameterError("invalid labeling strategy");
        });
        psi = step("step 2 (classifier)", [&] {
            const std::set<int> distinct(result.labels.begin(), result.labels.end());
            result.classes = static_cast<int>(distinct.size());
            result.alphas = config.alphas.empty() ? default_alphas(distinct.size())
                                                  : config.alphas;
            return build_scaling(LabeledData{nodes, result.labels}, config.svm_spec,
                                 config.svm_c, result.alphas);
        });
    } else if (config.mode == Mode::VsdkKnown) {
        if (!phantom)
            phantom =
                std::make_shared<const Phantom>(make_phantom(config.phantom, config.geometric));
        psi = make_phantom_scaling(phantom, config.psi_factor);
    }

    const Interpolant interp = step("step 3 (solve)", [&] {
        return fit(nodes, values, config.spec, psi, config.lambda);
    });
    result.lambda_used = interp.lambda;
    result.factorization = interp.factorization;
    result.max_node_residual = step("step 3 (solve)", [&] { return max_node_residual(interp); });

    const NodeSet grid = uniform_grid(config.grid_m);
    result.grid_values = step("step 4 (evaluate)", [&] { return evaluate(interp, grid); });
    if (have_truth) {
        const Eigen::VectorXd truth = sample_phantom(*phantom, grid);
        result.rel_l1 = rel_l1(result.grid_values, truth);
        result.rmse = rmse(result.grid_values, truth);
    }
    return result;
}

void write_pipeline_report(const std::string& path, const PipelineResult& result) {
    const PipelineConfig& c = result.config;
    std::map<int, std::size_t> counts;
    for (int z : result.labels) ++counts[z];
    json label_counts = json::object();
    for (const auto& [cls, n] : counts) label_counts[std::to_string(cls)] = n;

    json j = {{"kernel", kernel_name(c.spec.family)},
              {"mode", mode_name(c.mode)},
              {"lambda", result.lambda_used},
              {"factorization", result.factorization},
              {"grid", c.grid_m},
              {"classes", result.classes},
              {"alphas", result.alphas},
              {"label_counts", label_counts},
              {"max_node_residual", result.max_node_residual},
              {"rel_l1", result.rel_l1 ? json(*result.rel_l1) : json(nullptr)},
              {"rmse", result.rmse ? json(*result.rmse) : json(nullptr)},
              {"config",
               {{"kernel", spec_json(c.spec)},
                {"mode", mode_name(c.mode)},
                {"lambda", c.lambda},
                {"grid", c.grid_m},
                {"data", c.data ? "external" : "phantom"},
                {"phantom", c.phantom == PhantomKind::SheppLogan ? "shepp-logan" : "geometric"},
                {"geometric", geometric_json(c.geometric)},
                {"nodes", lissajous_json(c.nodes)},
                {"labeling", label_strategy_name(c.labeling)},
                {"thresholds", c.thresholds},
                {"kmeans_k", c.kmeans_k},
                {"seed", c.seed},
                {"svm_kernel", spec_json(c.svm_spec)},
                {"svm_c", c.svm_c},
                {"alphas", c.alphas},
                {"psi_factor", c.psi_factor}}}};
    atomic_write(path, j.dump(2) + "\n");
}

PerturbationResult run_perturbation(const PerturbationConfig& config) {
    if (config.offsets.empty()) throw ParameterError("run_perturbation: empty offset list");
    const auto data_phantom =
        std::make_shared<const Phantom>(Phantom::geometric(config.geometric));
    const NodeSet nodes = lissajous_nodes(config.nodes);
    const Eigen::VectorXd values = sample_phantom(*data_phantom, nodes);
    const NodeSet grid = uniform_grid(config.grid_m);

    PerturbationResult result;
    result.config = config;
    result.truth_grid = sample_phantom(*data_phantom, grid);
    for (double offset : config.offsets) {
        GeometricParams shifted = config.geometric;
        shifted.r_x0 -= offset; // toward the domain center (rectangle sits at x > 0)
        shifted.r_x1 -= offset;
        const auto psi_phantom = std::make_shared<const Phantom>(Phantom::geometric(shifted));
        const ScalingFunction psi = make_phantom_scaling(psi_phantom, config.psi_factor);
        const Interpolant interp = fit(nodes, values, config.spec, psi, config.lambda);

        PerturbationRow row;
        row.offset = offset;
        row.grid_values = evaluate(interp, grid);
        row.rel_l1 = rel_l1(row.grid_values, result.truth_grid);
        row.max_node_residual = max_node_residual(interp);
        result.rows.push_back(std::move(row));
    }
    return result;
}

void write_perturbation_report(const std::string& path, const PerturbationResult& result) {
    const PerturbationConfig& c = result.config;
    json rows = json::array();
    for (const auto& r : result.rows)
        rows.push_back({{"offset", r.offset},
                        {"rel_l1", r.rel_l1},
                        {"max_node_residual", r.max_node_residual}});
    const json j = {{"kernel", kernel_name(c.spec.family)},
                    {"lambda", c.lambda},
                    {"grid", c.grid_m},
                    {"rows", rows},
                    {"config",
                     {{"kernel", spec_json(c.spec)},
                      {"lambda", c.lambda},
                      {"grid", c.grid_m},
                      {"nodes", lissajous_json(c.nodes)},
                      {"geometric", geometric_json(c.geometric)},
                      {"psi_factor", c.psi_factor},
                      {"offsets", c.offsets}}}};
    atomic_write(path, j.dump(2) + "\n");
}

} // namespace vsdk
