#include "vsdk/segmentation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <utility>

#include "vsdk/errors.hpp"
#include "vsdk/interpolation.hpp"

namespace vsdk {

namespace {

std::vector<int> distinct_classes(const std::vector<int>& labels) {
    std::set<int> s(labels.begin(), labels.end());
    return {s.begin(), s.end()};
}

// Uniform double in [0,1) from the raw engine stream; avoids the
// implementation-defined draw counts of <random> distributions so a seed
// pins the exact sampling sequence.
double u01(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

NodeSet select_rows(const NodeSet& nodes, const std::vector<std::size_t>& idx) {
    NodeSet::Storage pts(static_cast<Eigen::Index>(idx.size()), nodes.dim());
    for (std::size_t r = 0; r < idx.size(); ++r)
        pts.row(static_cast<Eigen::Index>(r)) =
            nodes.matrix().row(static_cast<Eigen::Index>(idx[r]));
    return NodeSet(std::move(pts), nodes.bounds());
}

// SMO (maximal-violating-pair working set) on the dual
//   min_a 1/2 a^T (zz^T .* K) a - sum(a)   s.t.  0 <= a <= C, sum(a z) = 0.
// With g_t = sum_s a_s z_s K_ts the per-point violation value is
// r_t = z_t - g_t; optimality is m - M <= tol where m maxes r over the set
// allowed to grow along +z and M mins it over the set allowed to grow
// along -z. Any margin point then pins the bias to b = r_t up to tol.
SvmModel train_binary(const NodeSet& nodes, const std::vector<int>& z, const Eigen::MatrixXd& K,
                      const KernelSpec& spec, double C, const TrainOptions& opt) {
    const std::size_t n = nodes.size();
    const auto ni = static_cast<Eigen::Index>(n);
    Eigen::VectorXd alpha = Eigen::VectorXd::Zero(ni);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(ni);
    Eigen::VectorXd zd(ni);
    for (std::size_t t = 0; t < n; ++t) zd(static_cast<Eigen::Index>(t)) = z[t];

    SvmModel model;
    model.spec = spec;
    model.C = C;

    double m = 0.0, M = 0.0;
    std::size_t iter = 0;
    for (;; ++iter) {
        m = -std::numeric_limits<double>::infinity();
        M = std::numeric_limits<double>::infinity();
        Eigen::Index i = -1, j = -1;
        for (Eigen::Index t = 0; t < ni; ++t) {
            const double r = zd(t) - g(t);
            const bool up = (zd(t) > 0.0) ? (alpha(t) < C) : (alpha(t) > 0.0);
            const bool low = (zd(t) > 0.0) ? (alpha(t) > 0.0) : (alpha(t) < C);
            if (up && r > m) {
                m = r;
                i = t;
            }
            if (low && r < M) {
                M = r;
                j = t;
            }
        }
        if (i < 0 || j < 0 || m - M <= opt.tol) break;
        if (iter >= opt.max_iter)
            throw ConvergenceError("svm_train: SMO exceeded " + std::to_string(opt.max_iter) +
                                   " iterations (KKT violation " + std::to_string(m - M) + ")");

        double eta = K(i, i) + K(j, j) - 2.0 * K(i, j);
        if (eta < 1e-12) eta = 1e-12;
        // Step along alpha_i += z_i t, alpha_j -= z_j t (preserves sum(a z));
        // unconstrained optimum t* = (m - M)/eta > 0, clipped to the box.
        const double hi_i = (zd(i) > 0.0) ? C - alpha(i) : alpha(i);
        const double hi_j = (zd(j) > 0.0) ? alpha(j) : C - alpha(j);
        const double t = std::min((m - M) / eta, std::min(hi_i, hi_j));
        alpha(i) = std::clamp(alpha(i) + zd(i) * t, 0.0, C);
        alpha(j) = std::clamp(alpha(j) - zd(j) * t, 0.0, C);
        g += t * (K.col(i) - K.col(j));
        if (opt.record_objective)
            model.objective.push_back(alpha.sum() -
                                      0.5 * (alpha.array() * zd.array() * g.array()).sum());
    }
    model.iterations = iter;
    model.final_violation = m - M;

    // Bias from margin support vectors (0 < alpha < C); if every support
    // vector sits on the box, fall back to the midpoint of [M, m].
    double bias_sum = 0.0;
    std::size_t bias_n = 0;
    for (Eigen::Index t = 0; t < ni; ++t)
        if (alpha(t) > 0.0 && alpha(t) < C) {
            bias_sum += zd(t) - g(t);
            ++bias_n;
        }
    if (bias_n > 0) {
        model.bias = bias_sum / static_cast<double>(bias_n);
    } else {
        model.bias = 0.5 * (m + M);
        model.bias_from_midpoint = true;
    }

    std::vector<std::size_t> sv;
    for (Eigen::Index t = 0; t < ni; ++t)
        if (alpha(t) > 0.0) sv.push_back(static_cast<std::size_t>(t));
    model.support = select_rows(nodes, sv);
    model.beta.resize(static_cast<Eigen::Index>(sv.size()));
    model.z.resize(sv.size());
    for (std::size_t r = 0; r < sv.size(); ++r) {
        model.beta(static_cast<Eigen::Index>(r)) = alpha(static_cast<Eigen::Index>(sv[r]));
        model.z[r] = z[sv[r]];
    }
    return model;
}

void check_labeled(const LabeledData& data) {
    if (data.labels.size() != data.nodes.size())
        throw ParameterError("svm_train: labels/nodes length mismatch (" +
                             std::to_string(data.labels.size()) + " vs " +
                             std::to_string(data.nodes.size()) + ")");
    if (data.nodes.empty()) throw ParameterError("svm_train: empty data");
}

} // namespace

double svm_decision(const SvmModel& model, std::span<const double> p) {
    double acc = model.bias;
    for (std::size_t i = 0; i < model.support.size(); ++i)
        acc += model.beta(static_cast<Eigen::Index>(i)) * static_cast<double>(model.z[i]) *
               vsdk_eval(model.spec, nullptr, p, model.support.point(i));
    return acc;
}

int svm_decide(const SvmModel& model, std::span<const double> p) {
    return svm_decision(model, p) >= 0.0 ? 1 : -1;
}

SvmModel svm_train(const LabeledData& data, const KernelSpec& spec, double C,
                   const TrainOptions& options) {
    check_labeled(data);
    if (!(C > 0.0)) throw ParameterError("svm_train: C must be positive");
    const std::vector<int> classes = distinct_classes(data.labels);
    if (classes.size() != 2)
        throw ParameterError("svm_train: need exactly two classes, got " +
                             std::to_string(classes.size()));
    std::vector<int> z(data.labels.size());
    for (std::size_t i = 0; i < z.size(); ++i) z[i] = (data.labels[i] == classes[0]) ? -1 : 1;
    const Eigen::MatrixXd K = gram_matrix(spec, nullptr, data.nodes);
    return train_binary(data.nodes, z, K, spec, C, options);
}

std::size_t MulticlassSvm::classify_index(std::span<const double> p) const {
    std::size_t best = 0;
    double best_h = -std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < models.size(); ++j) {
        const double h = svm_decision(models[j], p);
        if (h > best_h) {
            best_h = h;
            best = j;
        }
    }
    return best;
}

int MulticlassSvm::classify(std::span<const double> p) const {
    return classes[classify_index(p)];
}

MulticlassSvm svm_train_multiclass(const LabeledData& data, const KernelSpec& spec, double C,
                                   const TrainOptions& options) {
    check_labeled(data);
    if (!(C > 0.0)) throw ParameterError("svm_train: C must be positive");
    MulticlassSvm ensemble;
    ensemble.classes = distinct_classes(data.labels);
    if (ensemble.classes.size() < 2)
        throw ParameterError("svm_train_multiclass: need at least two classes");
    const Eigen::MatrixXd K = gram_matrix(spec, nullptr, data.nodes);
    for (int cls : ensemble.classes) {
        std::vector<int> z(data.labels.size());
        for (std::size_t i = 0; i < z.size(); ++i) z[i] = (data.labels[i] == cls) ? 1 : -1;
        ensemble.models.push_back(train_binary(data.nodes, z, K, spec, C, options));
    }
    return ensemble;
}

std::vector<int> labels_threshold(const Eigen::VectorXd& values,
                                  const std::vector<double>& thresholds) {
    if (thresholds.size() < 2)
        throw ParameterError("labels_threshold: need at least two thresholds");
    if (!std::is_sorted(thresholds.begin(), thresholds.end()) ||
        std::adjacent_find(thresholds.begin(), thresholds.end()) != thresholds.end())
        throw ParameterError("labels_threshold: thresholds must be strictly ascending");
    std::vector<int> labels(static_cast<std::size_t>(values.size()));
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        const double v = values(i);
        const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), v);
        const auto bin = static_cast<std::size_t>(it - thresholds.begin());
        if (bin == 0 || bin == thresholds.size())
            throw DomainError("labels_threshold: value " + std::to_string(v) + " at index " +
                              std::to_string(i) + " outside [a0, an)");
        labels[static_cast<std::size_t>(i)] = static_cast<int>(bin);
    }
    return labels;
}

std::vector<int> labels_rbf_coeff(const NodeSet& nodes, const Eigen::VectorXd& values,
                                  const KernelSpec& spec, const std::vector<double>& thresholds) {
    const Interpolant interp = fit(nodes, values, spec, std::nullopt);
    return labels_threshold(interp.coefficients.cwiseAbs(), thresholds);
}

KmeansResult kmeans_1d(const Eigen::VectorXd& values, int k, std::uint64_t seed) {
    const std::size_t n = static_cast<std::size_t>(values.size());
    if (n == 0) throw ParameterError("kmeans_1d: empty values");
    if (k < 1) throw ParameterError("kmeans_1d: k must be positive");
    {
        std::set<double> distinct(values.data(), values.data() + values.size());
        if (static_cast<std::size_t>(k) > distinct.size())
            throw ParameterError("kmeans_1d: k = " + std::to_string(k) + " exceeds " +
                                 std::to_string(distinct.size()) + " distinct values");
    }

    // k-means++ style seeding: first center uniform, then D^2-weighted picks.
    // Duplicates of chosen centers carry zero weight, so centers stay distinct.
    std::mt19937_64 eng(seed);
    std::vector<double> centers;
    centers.reserve(static_cast<std::size_t>(k));
    centers.push_back(values(static_cast<Eigen::Index>(
        std::min(n - 1, static_cast<std::size_t>(u01(eng) * static_cast<double>(n))))));
    std::vector<double> d2(n);
    while (centers.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (double c : centers) {
                const double d = values(static_cast<Eigen::Index>(i)) - c;
                best = std::min(best, d * d);
            }
            d2[i] = best;
            total += best;
        }
        const double x = u01(eng) * total;
        double cum = 0.0;
        std::size_t pick = n;
        for (std::size_t i = 0; i < n; ++i) {
            cum += d2[i];
            if (d2[i] > 0.0 && cum > x) {
                pick = i;
                break;
            }
        }
        if (pick == n) { // floating-point tail: last strictly-positive weight
            for (std::size_t i = n; i-- > 0;)
                if (d2[i] > 0.0) {
                    pick = i;
                    break;
                }
        }
        centers.push_back(values(static_cast<Eigen::Index>(pick)));
    }

    KmeansResult res;
    const int max_pass = 300;
    std::vector<int> assign(n, -1);
    for (int pass = 0; pass < max_pass; ++pass) {
        bool changed = false;
        for (std::size_t i = 0; i < n; ++i) {
            int best = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = std::abs(values(static_cast<Eigen::Index>(i)) -
                                          centers[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best = c;
                }
            }
            if (assign[i] != best) {
                assign[i] = best;
                changed = true;
            }
        }
        std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
        std::vector<std::size_t> count(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            sum[static_cast<std::size_t>(assign[i])] += values(static_cast<Eigen::Index>(i));
            ++count[static_cast<std::size_t>(assign[i])];
        }
        for (int c = 0; c < k; ++c)
            if (count[static_cast<std::size_t>(c)] > 0) // empty cluster keeps its center
                centers[static_cast<std::size_t>(c)] =
                    sum[static_cast<std::size_t>(c)] /
                    static_cast<double>(count[static_cast<std::size_t>(c)]);
        double j2 = 0.0, j1 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = values(static_cast<Eigen::Index>(i)) -
                             centers[static_cast<std::size_t>(assign[i])];
            j2 += d * d;
            j1 += std::abs(d);
        }
        res.objective_l2.push_back(j2);
        res.objective_l1.push_back(j1);
        res.iterations = pass + 1;
        if (!changed) break;
    }

    // Renumber clusters 1..k by ascending center value.
    std::vector<int> order(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c) order[static_cast<std::size_t>(c)] = c;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return centers[static_cast<std::size_t>(a)] < centers[static_cast<std::size_t>(b)];
    });
    std::vector<int> rank(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r) rank[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])] = r;
    res.labels.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        res.labels[i] = rank[static_cast<std::size_t>(assign[i])] + 1;
    res.centers.resize(static_cast<std::size_t>(k));
    for (int r = 0; r < k; ++r)
        res.centers[static_cast<std::size_t>(r)] =
            centers[static_cast<std::size_t>(order[static_cast<std::size_t>(r)])];
    return res;
}

std::vector<int> labels_kmeans(const Eigen::VectorXd& values, int k, std::uint64_t seed) {
    return kmeans_1d(values, k, seed).labels;
}

std::vector<double> default_alphas(std::size_t n) {
    std::vector<double> a(n);
    for (std::size_t j = 0; j < n; ++j) a[j] = 0.5 * static_cast<double>(j);
    return a;
}

ScalingFunction build_scaling(const LabeledData& data, const KernelSpec& spec, double C,
                              const std::vector<double>& alphas, const TrainOptions& options) {
    check_labeled(data);
    const std::vector<int> classes = distinct_classes(data.labels);
    if (classes.size() < 2)
        throw ParameterError("build_scaling: need at least two classes");
    if (alphas.size() != classes.size())
        throw ParameterError("build_scaling: " + std::to_string(alphas.size()) +
                             " alphas for " + std::to_string(classes.size()) + " classes");
    {
        std::set<double> s(alphas.begin(), alphas.end());
        if (s.size() != alphas.size())
            throw ParameterError("build_scaling: alphas must be pairwise distinct");
    }

    std::vector<double> value_set = alphas;
    std::sort(value_set.begin(), value_set.end());

    if (classes.size() == 2) {
        auto model = std::make_shared<const SvmModel>(svm_train(data, spec, C, options));
        const double a_lo = alphas[0], a_hi = alphas[1];
        return ScalingFunction(
            ScalingKind::Classifier,
            [model, a_lo, a_hi](std::span<const double> x) {
                return svm_decide(*model, x) > 0 ? a_hi : a_lo;
            },
            std::move(value_set));
    }
    auto ensemble =
        std::make_shared<const MulticlassSvm>(svm_train_multiclass(data, spec, C, options));
    std::vector<double> by_class = alphas;
    return ScalingFunction(
        ScalingKind::Classifier,
        [ensemble, by_class](std::span<const double> x) {
            return by_class[ensemble->classify_index(x)];
        },
        std::move(value_set));
}

} // namespace vsdk
