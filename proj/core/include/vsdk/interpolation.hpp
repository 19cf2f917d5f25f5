#ifndef VSDK_INTERPOLATION_HPP
#define VSDK_INTERPOLATION_HPP

#include <Eigen/Core>
#include <optional>
#include <string>
#include <vector>

#include "vsdk/geometry.hpp"
#include "vsdk/kernels.hpp"

namespace vsdk {

/// Scattered nodes paired with per-node function values: the training side
/// of every fit and the payload of the `x,y,f` CSV format.
struct DataSet {
    NodeSet nodes;
    Eigen::VectorXd values;
};

/// Kernel interpolant V(x) = sum_k c_k K_psi(x, x_k). Immutable after fit();
/// safe to share across threads.
struct Interpolant {
    NodeSet nodes;
    Eigen::VectorXd coefficients;
    KernelSpec spec;
    std::optional<ScalingFunction> psi;
    /// Regularization weight actually used by the solve (after escalation).
    double lambda = 0.0;
    Eigen::VectorXd training_values;
    /// psi evaluated at the nodes (empty when psi is absent).
    std::vector<double> psi_node_values;
    bool duplicate_nodes = false;
    /// "llt" or "ldlt", whichever factorization produced the coefficients.
    std::string factorization;
};

struct FitOptions {
    double lambda = 1e-12;
    /// Escalation on factorization failure: lambda *= lambda_factor until
    /// lambda_cap, then ConditioningError.
    double lambda_cap = 1e-6;
    double lambda_factor = 100.0;
    /// Retry a pivoted LDLT at the same lambda before escalating. Keeps the
    /// effective regularization at its nominal value on gram matrices that
    /// are numerically semidefinite (Gauss kernel at dense node sets).
    bool robust_fallback = true;
    /// Iterative refinement sweeps after the factorized solve (residual
    /// accumulated in extended precision).
    int refinement_steps = 2;
};

/// Solves (A + lambda I) c = f for the kernel coefficients.
/// Throws ParameterError on size mismatch and ConditioningError when no
/// factorization succeeds up to lambda_cap.
Interpolant fit(const NodeSet& nodes, const Eigen::VectorXd& values, const KernelSpec& spec,
                const std::optional<ScalingFunction>& psi, const FitOptions& options = {});

Interpolant fit(const NodeSet& nodes, const Eigen::VectorXd& values, const KernelSpec& spec,
                const std::optional<ScalingFunction>& psi, double lambda);

/// V(p) for every point; parallelizes over evaluation points.
Eigen::VectorXd evaluate(const Interpolant& interp, const NodeSet& points);

/// max_i |V(x_i) - f_i| over the training nodes.
double max_node_residual(const Interpolant& interp);

/// Root-mean-square deviation between two equally long vectors.
double rmse(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// |truth - approx|_1 / |truth|_1. Throws DomainError when |truth|_1 = 0.
double rel_l1(const Eigen::VectorXd& approx, const Eigen::VectorXd& truth);

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    /// Per-point residuals log(err_i) - (intercept + slope log(h_i)).
    std::vector<double> residuals;
};

/// Least-squares slope of log(err) against log(h). All entries must be
/// strictly positive, at least two points.
LogLogFit loglog_fit(const std::vector<double>& h, const std::vector<double>& err);
double loglog_slope(const std::vector<double>& h, const std::vector<double>& err);

} // namespace vsdk

#endif
