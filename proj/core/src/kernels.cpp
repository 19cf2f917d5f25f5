#include "vsdk/kernels.hpp"

#include <cmath>

#include "vsdk/errors.hpp"
#include "vsdk/parallel.hpp"

namespace vsdk {

std::string kernel_name(RbfFamily family) {
    switch (family) {
        case RbfFamily::Matern0: return "matern0";
        case RbfFamily::Matern2: return "matern2";
        case RbfFamily::Matern4: return "matern4";
        case RbfFamily::Gauss: return "gauss";
    }
    return "unknown";
}

RbfFamily kernel_from_name(const std::string& name) {
    if (name == "matern0") return RbfFamily::Matern0;
    if (name == "matern2") return RbfFamily::Matern2;
    if (name == "matern4") return RbfFamily::Matern4;
    if (name == "gauss") return RbfFamily::Gauss;
    throw ParameterError("unknown kernel name: " + name +
                         " (expected matern0|matern2|matern4|gauss)");
}

namespace {

inline double phi(RbfFamily family, double r) {
    switch (family) {
        case RbfFamily::Matern0: return std::exp(-r);
        case RbfFamily::Matern2: return (1.0 + r) * std::exp(-r);
        case RbfFamily::Matern4: return (3.0 + 3.0 * r + r * r) * std::exp(-r);
        case RbfFamily::Gauss: return std::exp(-r * r);
    }
    return 0.0;
}

} // namespace

double rbf_eval(const KernelSpec& spec, double r) {
    if (r < 0.0) throw DomainError("rbf_eval: negative radius");
    return phi(spec.family, r / spec.scale);
}

double squared_distance(std::span<const double> x, std::span<const double> y) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double d = x[k] - y[k];
        s += d * d;
    }
    return s;
}

double vsdk_eval_cached(const KernelSpec& spec, std::span<const double> x, double psi_x,
                        std::span<const double> y, double psi_y) {
    // Materialize the lifted points and reuse squared_distance verbatim: the
    // scaled kernel is then bit-identical to the plain kernel on the graph.
    double xl[4], yl[4];
    const std::size_t d = x.size();
    if (d + 1 > 4) throw ParameterError("vsdk_eval: scaled kernels support dim <= 3");
    for (std::size_t k = 0; k < d; ++k) {
        xl[k] = x[k];
        yl[k] = y[k];
    }
    xl[d] = psi_x;
    yl[d] = psi_y;
    const double s = squared_distance({xl, d + 1}, {yl, d + 1});
    return phi(spec.family, std::sqrt(s) / spec.scale);
}

double vsdk_eval(const KernelSpec& spec, const ScalingFunction* psi,
                 std::span<const double> x, std::span<const double> y) {
    if (!psi) return phi(spec.family, std::sqrt(squared_distance(x, y)) / spec.scale);
    return vsdk_eval_cached(spec, x, (*psi)(x), y, (*psi)(y));
}

std::vector<double> scaling_values(const ScalingFunction* psi, const NodeSet& nodes) {
    if (!psi) return {};
    std::vector<double> v(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) v[i] = (*psi)(nodes.point(i));
    return v;
}

NodeSet lift(const NodeSet& nodes, const ScalingFunction& psi) {
    NodeSet::Storage out(nodes.size(), nodes.dim() + 1);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        for (int k = 0; k < nodes.dim(); ++k) out(static_cast<Eigen::Index>(i), k) = nodes.coord(i, k);
        out(static_cast<Eigen::Index>(i), nodes.dim()) = psi(nodes.point(i));
    }
    return NodeSet(std::move(out));
}

Eigen::MatrixXd gram_matrix(const KernelSpec& spec, const ScalingFunction* psi,
                            const NodeSet& nodes) {
    const std::size_t n = nodes.size();
    const std::vector<double> pv = scaling_values(psi, nodes);
    Eigen::MatrixXd A(n, n);
    detail::parallel_for(n, [&](std::size_t rb, std::size_t re) {
        for (std::size_t i = rb; i < re; ++i) {
            const auto xi = nodes.point(i);
            for (std::size_t j = 0; j <= i; ++j) {
                A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    psi ? vsdk_eval_cached(spec, xi, pv[i], nodes.point(j), pv[j])
                        : phi(spec.family,
                              std::sqrt(squared_distance(xi, nodes.point(j))) / spec.scale);
            }
        }
    }, 64);
    A.triangularView<Eigen::StrictlyUpper>() = A.transpose();
    return A;
}

Eigen::MatrixXd kernel_cross_matrix(const KernelSpec& spec, const ScalingFunction* psi,
                                    const NodeSet& points, const NodeSet& nodes) {
    const std::size_t m = points.size(), n = nodes.size();
    const std::vector<double> pv_pts = scaling_values(psi, points);
    const std::vector<double> pv_nds = scaling_values(psi, nodes);
    Eigen::MatrixXd B(m, n);
    detail::parallel_for(m, [&](std::size_t rb, std::size_t re) {
        for (std::size_t i = rb; i < re; ++i) {
            const auto pi = points.point(i);
            for (std::size_t j = 0; j < n; ++j) {
                B(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    psi ? vsdk_eval_cached(spec, pi, pv_pts[i], nodes.point(j), pv_nds[j])
                        : phi(spec.family,
                              std::sqrt(squared_distance(pi, nodes.point(j))) / spec.scale);
            }
        }
    }, 16);
    return B;
}

} // namespace vsdk
