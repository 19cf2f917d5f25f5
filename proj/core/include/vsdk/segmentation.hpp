#ifndef VSDK_SEGMENTATION_HPP
#define VSDK_SEGMENTATION_HPP

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "vsdk/geometry.hpp"
#include "vsdk/kernels.hpp"

namespace vsdk {

/// Scattered nodes with one integer class label per node, labels in {1,...,n}.
struct LabeledData {
    NodeSet nodes;
    std::vector<int> labels;
};

/// Knobs of the SMO solver. The defaults match the audited invariants:
/// KKT tolerance 1e-3 and a hard iteration cap that turns non-convergence
/// into an error instead of a silent bad model.
struct TrainOptions {
    double tol = 1e-3;
    std::size_t max_iter = 1'000'000;
    bool record_objective = false;
};

/// Trained binary kernel classifier. Only support vectors (beta > 0) are
/// stored; h(p) = sum_i beta_i z_i K(p, x_i) + bias.
struct SvmModel {
    NodeSet support;
    Eigen::VectorXd beta;    // 0 < beta_i <= C
    std::vector<int> z;      // +-1, aligned with support
    double bias = 0.0;
    KernelSpec spec;
    double C = 10.0;
    /// True when no support vector had 0 < beta < C and the bias fell back to
    /// the midpoint of the feasible decision-value interval.
    bool bias_from_midpoint = false;
    std::size_t iterations = 0;
    /// Final maximal KKT violation (m - M) when the solver stopped.
    double final_violation = 0.0;
    /// Dual objective after each SMO step (filled when
    /// TrainOptions::record_objective is set).
    std::vector<double> objective;
};

/// Decision value h(p) of a trained model.
double svm_decision(const SvmModel& model, std::span<const double> p);

/// sign(h(p)) with the tie sign(0) -> +1.
int svm_decide(const SvmModel& model, std::span<const double> p);

/// Trains a binary classifier with sequential minimal optimization on the
/// dual problem max_beta sum(beta) - 1/2 beta^T (zz^T .* K) beta subject to
/// 0 <= beta <= C and sum(beta * z) = 0. `data.labels` must contain exactly
/// two distinct values; the smaller label maps to z = -1, the larger to +1.
SvmModel svm_train(const LabeledData& data, const KernelSpec& spec, double C,
                   const TrainOptions& options = {});

/// One-vs-rest ensemble for n >= 2 classes; classify() returns the class id
/// with the maximal decision value (ties go to the lowest class id).
struct MulticlassSvm {
    std::vector<int> classes;     // distinct labels, ascending
    std::vector<SvmModel> models; // aligned with classes

    int classify(std::span<const double> p) const;
    /// Index into `classes` of the winning model.
    std::size_t classify_index(std::span<const double> p) const;
};

MulticlassSvm svm_train_multiclass(const LabeledData& data, const KernelSpec& spec, double C,
                                   const TrainOptions& options = {});

/// Bin values into labels 1..n by ascending thresholds a_0 < ... < a_n:
/// label j iff a_{j-1} <= value < a_j. Values outside [a_0, a_n) raise
/// DomainError naming the offending index.
std::vector<int> labels_threshold(const Eigen::VectorXd& values,
                                  const std::vector<double>& thresholds);

/// Fits a plain RBF interpolant to (nodes, values) and bins the coefficient
/// magnitudes |c_i| with labels_threshold. Large coefficients cluster near
/// jumps, so the top bins flag discontinuity neighborhoods.
std::vector<int> labels_rbf_coeff(const NodeSet& nodes, const Eigen::VectorXd& values,
                                  const KernelSpec& spec, const std::vector<double>& thresholds);

/// Outcome of 1-D k-means. Labels are renumbered 1..k by ascending cluster
/// mean so that equal value structures always yield identical labelings.
struct KmeansResult {
    std::vector<int> labels;
    std::vector<double> centers; // ascending, aligned with labels 1..k
    int iterations = 0;
    /// Objective after each Lloyd pass: sum of squared deviations from the
    /// cluster means, and the companion sum of absolute deviations.
    std::vector<double> objective_l2;
    std::vector<double> objective_l1;
};

/// Lloyd iteration on the scalar values with k-means++ style seeding driven
/// by a seeded mt19937_64 (deterministic). Positions are deliberately not
/// used; clustering acts on function values alone. Requires k <= number of
/// distinct values (ParameterError otherwise); stops on a fixed assignment
/// or after 300 passes.
KmeansResult kmeans_1d(const Eigen::VectorXd& values, int k, std::uint64_t seed = 0);

/// Label vector of kmeans_1d.
std::vector<int> labels_kmeans(const Eigen::VectorXd& values, int k, std::uint64_t seed = 0);

/// Default scaling values alpha_j = (j-1)/2 for n classes: 0, 0.5, 1, ...
std::vector<double> default_alphas(std::size_t n);

/// Trains a classifier on the labeled data and wraps it as the
/// piecewise-constant scaling function psi(x) = alpha_{class(x)}.
/// `alphas` must have one pairwise-distinct entry per distinct label
/// (ascending label order). Two classes use a single binary model; more
/// classes use one-vs-rest with max-decision-value assignment.
ScalingFunction build_scaling(const LabeledData& data, const KernelSpec& spec, double C,
                              const std::vector<double>& alphas,
                              const TrainOptions& options = {});

} // namespace vsdk

#endif
