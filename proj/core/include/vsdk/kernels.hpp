#ifndef VSDK_KERNELS_HPP
#define VSDK_KERNELS_HPP

#include <Eigen/Core>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vsdk/geometry.hpp"

namespace vsdk {

enum class RbfFamily { Matern0, Matern2, Matern4, Gauss };

/// Radial basis function selector plus an optional uniform distance scale
/// (distances are divided by `scale` before applying phi; default 1 keeps
/// the plain textbook profiles).
struct KernelSpec {
    RbfFamily family = RbfFamily::Matern0;
    double scale = 1.0;
};

/// Lowercase names used in CLI flags and config/report files:
/// matern0, matern2, matern4, gauss.
std::string kernel_name(RbfFamily family);
RbfFamily kernel_from_name(const std::string& name);

/// phi_family(r / scale). Strictly positive and nonincreasing in r.
/// Throws DomainError for negative r.
double rbf_eval(const KernelSpec& spec, double r);

enum class ScalingKind { Constant, PhantomScaled, Classifier };

/// Piecewise-constant scaling map psi: Omega -> {alpha_1, ..., alpha_n}.
/// Evaluation is type-erased so phantom-derived and classifier-derived maps
/// can be built without this header knowing about either. Immutable after
/// construction and safe for concurrent evaluation.
class ScalingFunction {
public:
    using EvalFn = std::function<double(std::span<const double>)>;

    ScalingFunction(ScalingKind kind, EvalFn fn, std::vector<double> value_set)
        : kind_(kind), fn_(std::move(fn)), values_(std::move(value_set)) {}

    static ScalingFunction constant(double alpha) {
        return ScalingFunction(ScalingKind::Constant,
                               [alpha](std::span<const double>) { return alpha; }, {alpha});
    }

    double operator()(std::span<const double> x) const { return fn_(x); }
    ScalingKind kind() const { return kind_; }

    /// The declared finite value set {alpha_1, ..., alpha_n}.
    const std::vector<double>& values() const { return values_; }

private:
    ScalingKind kind_;
    EvalFn fn_;
    std::vector<double> values_;
};

/// Squared Euclidean distance, accumulated coordinate by coordinate. All
/// kernel evaluations funnel through this one function so that a scaled
/// kernel on Omega and the plain kernel on lifted graph points produce
/// bit-identical results.
double squared_distance(std::span<const double> x, std::span<const double> y);

/// K_psi(x, y) = phi(sqrt(|x-y|^2 + |psi(x)-psi(y)|^2)); psi == nullptr gives
/// the plain radial kernel phi(|x-y|).
double vsdk_eval(const KernelSpec& spec, const ScalingFunction* psi,
                 std::span<const double> x, std::span<const double> y);

/// Same kernel with psi values supplied by the caller (used by the assembly
/// routines, which evaluate psi once per node).
double vsdk_eval_cached(const KernelSpec& spec, std::span<const double> x, double psi_x,
                        std::span<const double> y, double psi_y);

/// Evaluates psi at every node. Empty vector when psi == nullptr.
std::vector<double> scaling_values(const ScalingFunction* psi, const NodeSet& nodes);

/// Appends psi(x) as an extra coordinate to every node, mapping Omega into
/// the graph of psi in R^(d+1).
NodeSet lift(const NodeSet& nodes, const ScalingFunction& psi);

/// Symmetric kernel matrix A_ij = K_psi(x_i, x_j). Only the lower triangle is
/// computed and mirrored, so A == A^T holds exactly. Entries equal, bit for
/// bit, the plain-kernel matrix on the lifted nodes.
Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const ScalingFunction* psi,
                            const NodeSet& nodes);

/// Rectangular cross-kernel matrix B_ij = K_psi(p_i, x_j) between evaluation
/// points and nodes.
Eigen::MatrixXd kernel_cross_matrix(const KernelSpec& spec, const ScalingFunction* psi,
                                    const NodeSet& points, const NodeSet& nodes);

} // namespace vsdk

#endif
