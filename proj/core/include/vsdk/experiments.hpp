#ifndef VSDK_EXPERIMENTS_HPP
#define VSDK_EXPERIMENTS_HPP

#include <Eigen/Core>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "vsdk/geometry.hpp"
#include "vsdk/interpolation.hpp"
#include "vsdk/kernels.hpp"
#include "vsdk/phantoms.hpp"
#include "vsdk/segmentation.hpp"

namespace vsdk {

/// Reconstruction modes: plain radial kernel, scaled kernel with the
/// phantom-derived psi, or scaled kernel with psi learned from the data.
enum class Mode { Rbf, VsdkKnown, VsdkSegment };
std::string mode_name(Mode mode);
Mode mode_from_name(const std::string& name);

enum class LabelStrategy { Threshold, RbfCoeff, Kmeans };
std::string label_strategy_name(LabelStrategy strategy);
LabelStrategy label_strategy_from_name(const std::string& name);

/// Default convergence sweep (n, n+1) for n = 4, 8, ..., 40.
std::vector<std::pair<int, int>> default_sweep();

/// Binary thresholds at one fifth of the maximal signal strength:
/// {min, max/5, max + 1}.
std::vector<double> mpi_thresholds(const Eigen::VectorXd& values);

// ---------------------------------------------------------------------------
// Convergence sweep
// ---------------------------------------------------------------------------

struct ConvergenceConfig {
    KernelSpec spec{};
    Mode mode = Mode::VsdkKnown; // rbf or vsdk-known
    double lambda = 1e-12;
    int grid_m = 150;
    /// psi = psi_factor * phantom in vsdk-known mode.
    double psi_factor = 0.5;
    std::vector<std::pair<int, int>> sweep = default_sweep();
};

struct ConvergencePair {
    int n1 = 0;
    int n2 = 0;
    std::size_t count = 0; // node count
    double h = 0.0;        // closed-form fill distance
    double rmse = 0.0;     // against the phantom on the evaluation grid
    double max_node_residual = 0.0;
};

struct ConvergenceResult {
    ConvergenceConfig config;
    std::vector<ConvergencePair> pairs;
    double slope = 0.0;
    double intercept = 0.0;
    /// Per-pair residuals of the log-log least-squares line.
    std::vector<double> residuals;
};

/// Interpolates the piecewise-constant head phantom on the Lissajous node
/// sweep and measures the rmse decay against the fill distance; the returned
/// slope is the log-log convergence rate.
ConvergenceResult run_convergence(const ConvergenceConfig& config);

/// Report files: JSON with the resolved config, per-pair table, slope and
/// line residuals; CSV table with columns n1,n2,count,h,rmse.
void write_convergence_report(const std::string& path, const ConvergenceResult& result);
void write_convergence_csv(const std::string& path, const ConvergenceResult& result);

// ---------------------------------------------------------------------------
// Shape-driven reconstruction pipeline
// ---------------------------------------------------------------------------

/// Step 1 extract labels, step 2 train the classifier into psi, step 3 solve
/// the scaled-kernel system, step 4 evaluate on the target grid. Modes rbf
/// and vsdk-known skip steps 1-2 (no psi / phantom-derived psi).
struct PipelineConfig {
    KernelSpec spec{};
    Mode mode = Mode::VsdkSegment;
    double lambda = 1e-12;
    int grid_m = 150;
    /// Training data; when absent the phantom is sampled on the Lissajous
    /// nodes below and ground-truth error metrics are produced.
    std::optional<DataSet> data;
    PhantomKind phantom = PhantomKind::Geometric;
    GeometricParams geometric{};
    LissajousParams nodes{33, 32, 2};
    /// Step 1 (vsdk-segment only). Empty thresholds with the Threshold
    /// strategy select the one-fifth-of-maximum rule.
    LabelStrategy labeling = LabelStrategy::Kmeans;
    std::vector<double> thresholds;
    int kmeans_k = 4;
    std::uint64_t seed = 0;
    /// Step 2 (vsdk-segment only).
    KernelSpec svm_spec{RbfFamily::Gauss, 1.0};
    double svm_c = 10.0;
    /// Scaling values per class, ascending label order; empty selects
    /// (j-1)/2 for class j.
    std::vector<double> alphas;
    /// psi = psi_factor * phantom in vsdk-known mode.
    double psi_factor = 1.0;
};

struct PipelineResult {
    PipelineConfig config;
    /// Step 1 output (empty outside vsdk-segment mode).
    std::vector<int> labels;
    int classes = 0;
    std::vector<double> alphas;
    /// Step 3 diagnostics.
    double lambda_used = 0.0;
    std::string factorization;
    double max_node_residual = 0.0;
    /// Step 4 output on uniform_grid(grid_m).
    Eigen::VectorXd grid_values;
    /// Error metrics against the phantom (absent when external data was
    /// supplied, i.e. no ground truth).
    std::optional<double> rel_l1;
    std::optional<double> rmse;
};

/// Runs the four pipeline steps; any failure is rethrown with the pipeline
/// step prepended to the message.
PipelineResult run_pipeline(const PipelineConfig& config);

void write_pipeline_report(const std::string& path, const PipelineResult& result);

// ---------------------------------------------------------------------------
// Scaling-perturbation study
// ---------------------------------------------------------------------------

/// Reconstructs the geometric phantom with a deliberately wrong psi: the
/// rectangle of the scaling phantom is shifted horizontally toward the
/// domain center by each offset, while the data stay fixed.
struct PerturbationConfig {
    KernelSpec spec{RbfFamily::Matern0, 1.0};
    double lambda = 1e-12;
    int grid_m = 150;
    LissajousParams nodes{10, 11, 2};
    GeometricParams geometric{};
    double psi_factor = 1.0;
    std::vector<double> offsets{0.0, 0.05, 0.15, 0.3};
};

struct PerturbationRow {
    double offset = 0.0;
    double rel_l1 = 0.0;
    double max_node_residual = 0.0;
    Eigen::VectorXd grid_values;
};

struct PerturbationResult {
    PerturbationConfig config;
    std::vector<PerturbationRow> rows;
    /// Phantom truth on the grid, for difference images.
    Eigen::VectorXd truth_grid;
};

PerturbationResult run_perturbation(const PerturbationConfig& config);

void write_perturbation_report(const std::string& path, const PerturbationResult& result);

} // namespace vsdk

#endif
