#include "vsdk/interpolation.hpp"

#include <Eigen/Cholesky>
#include <cmath>
#include <iostream>

#include "vsdk/errors.hpp"
#include "vsdk/parallel.hpp"

namespace vsdk {

namespace {

// Residual r = f - (A + lambda I) c with long-double accumulation.
Eigen::VectorXd residual_ext(const Eigen::MatrixXd& A, double lambda, const Eigen::VectorXd& c,
                             const Eigen::VectorXd& f) {
    const Eigen::Index n = A.rows();
    Eigen::VectorXd r(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        long double acc = 0.0L;
        for (Eigen::Index j = 0; j < n; ++j)
            acc += static_cast<long double>(A(i, j)) * static_cast<long double>(c(j));
        acc += static_cast<long double>(lambda) * static_cast<long double>(c(i));
        r(i) = static_cast<double>(static_cast<long double>(f(i)) - acc);
    }
    return r;
}

template <typename Solver>
Eigen::VectorXd solve_refined(const Solver& solver, const Eigen::MatrixXd& A, double lambda,
                              const Eigen::VectorXd& f, int steps) {
    Eigen::VectorXd c = solver.solve(f);
    for (int s = 0; s < steps; ++s) {
        const Eigen::VectorXd r = residual_ext(A, lambda, c, f);
        const double rn = r.lpNorm<Eigen::Infinity>();
        if (!(rn > 0.0) || !std::isfinite(rn)) break;
        const Eigen::VectorXd dc = solver.solve(r);
        const Eigen::VectorXd c2 = c + dc;
        const double rn2 = residual_ext(A, lambda, c2, f).lpNorm<Eigen::Infinity>();
        if (rn2 >= rn) break;
        c = c2;
    }
    return c;
}

} // namespace

Interpolant fit(const NodeSet& nodes, const Eigen::VectorXd& values, const KernelSpec& spec,
                const std::optional<ScalingFunction>& psi, const FitOptions& options) {
    const Eigen::Index n = static_cast<Eigen::Index>(nodes.size());
    if (values.size() != n)
        throw ParameterError("fit: values/nodes length mismatch (" +
                             std::to_string(values.size()) + " vs " + std::to_string(n) + ")");
    if (n == 0) throw ParameterError("fit: empty node set");

    Interpolant interp;
    interp.nodes = nodes;
    interp.spec = spec;
    interp.psi = psi;
    interp.training_values = values;
    interp.psi_node_values = scaling_values(psi ? &*psi : nullptr, nodes);
    interp.duplicate_nodes = nodes.has_duplicates();
    if (interp.duplicate_nodes)
        std::cerr << "vsdk: warning: duplicate interpolation nodes, kernel matrix is singular\n";

    const Eigen::MatrixXd A = gram_matrix(spec, psi ? &*psi : nullptr, nodes);

    double lambda = options.lambda;
    for (;;) {
        Eigen::MatrixXd B = A;
        B.diagonal().array() += lambda;

        Eigen::LLT<Eigen::MatrixXd> llt(B);
        if (llt.info() == Eigen::Success) {
            Eigen::VectorXd c = solve_refined(llt, A, lambda, values, options.refinement_steps);
            if (c.allFinite()) {
                interp.coefficients = std::move(c);
                interp.lambda = lambda;
                interp.factorization = "llt";
                return interp;
            }
        }
        if (options.robust_fallback) {
            Eigen::LDLT<Eigen::MatrixXd> ldlt(B);
            if (ldlt.info() == Eigen::Success) {
                Eigen::VectorXd c =
                    solve_refined(ldlt, A, lambda, values, options.refinement_steps);
                if (c.allFinite()) {
                    interp.coefficients = std::move(c);
                    interp.lambda = lambda;
                    interp.factorization = "ldlt";
                    return interp;
                }
            }
        }
        if (lambda >= options.lambda_cap)
            throw ConditioningError("fit: factorization failed up to lambda = " +
                                        std::to_string(lambda),
                                    lambda);
        lambda = (lambda == 0.0) ? options.lambda : lambda * options.lambda_factor;
        if (lambda > options.lambda_cap) lambda = options.lambda_cap;
    }
}

Interpolant fit(const NodeSet& nodes, const Eigen::VectorXd& values, const KernelSpec& spec,
                const std::optional<ScalingFunction>& psi, double lambda) {
    FitOptions opt;
    opt.lambda = lambda;
    if (lambda > opt.lambda_cap) opt.lambda_cap = lambda;
    return fit(nodes, values, spec, psi, opt);
}

Eigen::VectorXd evaluate(const Interpolant& interp, const NodeSet& points) {
    const std::size_t m = points.size();
    const std::size_t n = interp.nodes.size();
    const ScalingFunction* psi = interp.psi ? &*interp.psi : nullptr;
    Eigen::VectorXd out(m);
    detail::parallel_for(m, [&](std::size_t pb, std::size_t pe) {
        for (std::size_t p = pb; p < pe; ++p) {
            const auto xp = points.point(p);
            const double psi_p = psi ? (*psi)(xp) : 0.0;
            double acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                const double kv =
                    psi ? vsdk_eval_cached(interp.spec, xp, psi_p, interp.nodes.point(k),
                                           interp.psi_node_values[k])
                        : vsdk_eval(interp.spec, nullptr, xp, interp.nodes.point(k));
                acc += interp.coefficients(static_cast<Eigen::Index>(k)) * kv;
            }
            out(static_cast<Eigen::Index>(p)) = acc;
        }
    }, 8);
    return out;
}

double max_node_residual(const Interpolant& interp) {
    const Eigen::VectorXd at_nodes = evaluate(interp, interp.nodes);
    return (at_nodes - interp.training_values).lpNorm<Eigen::Infinity>();
}

double rmse(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
    if (a.size() != b.size()) throw ParameterError("rmse: length mismatch");
    if (a.size() == 0) throw ParameterError("rmse: empty vectors");
    return std::sqrt((a - b).squaredNorm() / static_cast<double>(a.size()));
}

double rel_l1(const Eigen::VectorXd& approx, const Eigen::VectorXd& truth) {
    if (approx.size() != truth.size()) throw ParameterError("rel_l1: length mismatch");
    const double denom = truth.lpNorm<1>();
    if (!(denom > 0.0)) throw DomainError("rel_l1: truth has zero L1 norm");
    return (truth - approx).lpNorm<1>() / denom;
}

LogLogFit loglog_fit(const std::vector<double>& h, const std::vector<double>& err) {
    if (h.size() != err.size()) throw ParameterError("loglog_fit: length mismatch");
    if (h.size() < 2) throw ParameterError("loglog_fit: need at least two points");
    const std::size_t n = h.size();
    std::vector<double> lx(n), ly(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(h[i] > 0.0) || !(err[i] > 0.0))
            throw DomainError("loglog_fit: entries must be strictly positive");
        lx[i] = std::log(h[i]);
        ly[i] = std::log(err[i]);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw DomainError("loglog_fit: all h values coincide");
    LogLogFit out;
    out.slope = sxy / sxx;
    out.intercept = my - out.slope * mx;
    out.residuals.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        out.residuals[i] = ly[i] - (out.intercept + out.slope * lx[i]);
    return out;
}

double loglog_slope(const std::vector<double>& h, const std::vector<double>& err) {
    return loglog_fit(h, err).slope;
}

} // namespace vsdk
