// Acceptance gate for the toolkit. Runs the full experiment battery and
// prints one PASS/FAIL line per criterion with the measured numbers; the
// exit status is the number of failed criteria, so the test runner fails
// whenever any criterion does.
//
// Criteria, in print order:
//   1  convergence slopes per kernel (scaled vs plain) on the default sweep
//   2  slope separation and smoothness-order monotonicity
//   3  segmentation pipeline beats the plain kernel on the geometric phantom
//   4  scaled gram matrices equal plain gram matrices on lifted nodes, bitwise
//   5  node residuals of every regularized fit stay below 1e-6 * (1 + max|f|)
//   6  closed-form fill distance vs a 2001^2 brute force, plus its bounds
//   7  Lissajous node counts 2n(n+1) + 2n + 1
//   8  SVM training on random separable fixtures (accuracy, duality, KKT)
//   9  k-means objective monotonicity and geometric-phantom cluster means
//   10 scaling-perturbation study: error grows with the offset
//   11 constant-scaling runs reproduce the plain kernel on a 50^2 grid

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "vsdk/experiments.hpp"
#include "vsdk/geometry.hpp"
#include "vsdk/interpolation.hpp"
#include "vsdk/kernels.hpp"
#include "vsdk/phantoms.hpp"
#include "vsdk/segmentation.hpp"

using namespace vsdk;
using Clock = std::chrono::steady_clock;

namespace {

struct Criterion {
    bool pass = true;
    std::string detail;
};

std::array<Criterion, 12> gate; // 1-based

void note(int id, bool ok, const std::string& detail) {
    gate[id].pass = gate[id].pass && ok;
    if (!gate[id].detail.empty()) gate[id].detail += "; ";
    gate[id].detail += detail;
}

std::string fmt(double v, int prec = 4) {
    std::ostringstream os;
    os.precision(prec);
    os << v;
    return os.str();
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Residuals of every regularized solve performed anywhere in this run,
// audited at the end against 1e-6 * (1 + max|f|).
struct ResidualAudit {
    std::size_t count = 0;
    std::vector<std::string> violators;
    double worst_ratio = 0.0;
    std::string worst_label;

    void add(const std::string& label, double residual, double max_abs_f) {
        const double bound = 1e-6 * (1.0 + max_abs_f);
        const double ratio = residual / bound;
        ++count;
        if (residual > bound) violators.push_back(label + " (" + fmt(ratio, 3) + "x)");
        if (ratio > worst_ratio) {
            worst_ratio = ratio;
            worst_label = label;
        }
    }
};

ResidualAudit residuals;

// ------------------------------------------------------------ criteria 1, 2, 5

void run_slope_battery() {
    const auto t0 = Clock::now();
    const std::array<RbfFamily, 4> kernels = {RbfFamily::Matern0, RbfFamily::Matern2,
                                              RbfFamily::Matern4, RbfFamily::Gauss};
    std::map<RbfFamily, double> vsdk_slope, rbf_slope;

    for (RbfFamily family : kernels) {
        for (Mode mode : {Mode::VsdkKnown, Mode::Rbf}) {
            ConvergenceConfig config;
            config.spec = {family, 1.0};
            config.mode = mode;
            config.lambda = 1e-12;
            config.grid_m = 150;
            config.psi_factor = 0.5;
            config.sweep = default_sweep();
            const ConvergenceResult res = run_convergence(config);
            (mode == Mode::VsdkKnown ? vsdk_slope : rbf_slope)[family] = res.slope;
            for (const auto& p : res.pairs)
                residuals.add(kernel_name(family) + "/" + mode_name(mode) + " n=" +
                                  std::to_string(p.n1),
                              p.max_node_residual, 1.0);
        }
    }
    const double elapsed = seconds_since(t0);

    const std::map<RbfFamily, std::pair<double, double>> pinned = {
        {RbfFamily::Matern0, {2.3609 - 0.5, 2.3609 + 0.5}},
        {RbfFamily::Matern2, {2.9918 - 0.5, 2.9918 + 0.5}},
        {RbfFamily::Matern4, {3.6521 - 0.5, 3.6521 + 0.5}},
    };
    std::string summary = "slopes";
    bool ok1 = true;
    for (RbfFamily family : kernels) {
        const double sv = vsdk_slope[family], sr = rbf_slope[family];
        summary += " " + kernel_name(family) + "=(" + fmt(sv) + "," + fmt(sr) + ")";
        if (family == RbfFamily::Gauss) {
            ok1 = ok1 && sv >= 4.5;
        } else {
            const auto [lo, hi] = pinned.at(family);
            ok1 = ok1 && sv >= lo && sv <= hi;
        }
        ok1 = ok1 && sr >= 0.15 && sr <= 0.45;
    }
    note(1, ok1, summary + " [" + fmt(elapsed, 3) + " s]");

    const auto r2 = [](double s) { return std::round(s * 100.0) / 100.0; };
    bool ok2 = true;
    for (RbfFamily family : kernels)
        ok2 = ok2 && r2(vsdk_slope[family]) > r2(rbf_slope[family]);
    ok2 = ok2 && r2(vsdk_slope[RbfFamily::Matern0]) < r2(vsdk_slope[RbfFamily::Matern2]);
    ok2 = ok2 && r2(vsdk_slope[RbfFamily::Matern2]) < r2(vsdk_slope[RbfFamily::Matern4]);
    ok2 = ok2 && r2(vsdk_slope[RbfFamily::Matern4]) < r2(vsdk_slope[RbfFamily::Gauss]);
    note(2, ok2,
         "scaled > plain per kernel and scaled slopes ordered matern0 < matern2 < "
         "matern4 < gauss (2-decimal rounding)");
}

// ----------------------------------------------------------------- criterion 3

void run_pipeline_comparison() {
    PipelineConfig config;
    config.spec = {RbfFamily::Matern0, 1.0};
    config.lambda = 1e-12;
    config.grid_m = 150;
    config.phantom = PhantomKind::Geometric;
    config.nodes = {33, 32, 2};
    config.labeling = LabelStrategy::Kmeans;
    config.kmeans_k = 4;
    config.svm_spec = {RbfFamily::Gauss, 1.0};
    config.svm_c = 10.0;

    config.mode = Mode::VsdkSegment;
    const PipelineResult seg = run_pipeline(config);
    config.mode = Mode::Rbf;
    const PipelineResult plain = run_pipeline(config);
    residuals.add("pipeline/vsdk-segment", seg.max_node_residual, 2.0);
    residuals.add("pipeline/rbf", plain.max_node_residual, 2.0);

    const double ev = seg.rel_l1.value_or(1e9), er = plain.rel_l1.value_or(1e9);
    const bool ok = ev < er && ev >= 0.02 && ev <= 0.35 && er >= 0.02 && er <= 0.35;
    note(3, ok, "rel_l1 segmented=" + fmt(ev) + " plain=" + fmt(er) + " on 150^2 grid");
}

// ----------------------------------------------------------------- criterion 4

ScalingFunction random_scaling(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> alpha(0.0, 2.0), cut(-0.5, 0.5);
    std::uniform_int_distribution<int> shape(0, 2);
    switch (shape(rng)) {
        case 0: {
            const double a = alpha(rng), b = alpha(rng), t = cut(rng);
            return ScalingFunction(
                ScalingKind::Classifier,
                [a, b, t](std::span<const double> p) { return p[0] < t ? a : b; }, {a, b});
        }
        case 1: {
            const double a = alpha(rng), b = alpha(rng), c = alpha(rng), d = alpha(rng);
            const double tx = cut(rng), ty = cut(rng);
            return ScalingFunction(ScalingKind::Classifier,
                                   [=](std::span<const double> p) {
                                       return p[0] < tx ? (p[1] < ty ? a : b)
                                                        : (p[1] < ty ? c : d);
                                   },
                                   {a, b, c, d});
        }
        default: {
            auto phantom = std::make_shared<const Phantom>(
                shape(rng) == 0 ? Phantom::shepp_logan() : Phantom::geometric());
            return make_phantom_scaling(phantom, 0.5 + alpha(rng) / 2.0);
        }
    }
}

void run_lifting_checks() {
    std::mt19937_64 rng(20240404);
    std::uniform_int_distribution<int> count(15, 45), kernel(0, 3);
    std::uniform_real_distribution<double> coord(-1.0, 1.0);
    bool ok = true;
    for (int fixture = 0; fixture < 20; ++fixture) {
        const int n = count(rng);
        NodeSet::Storage pts(n, 2);
        for (int i = 0; i < n; ++i) {
            pts(i, 0) = coord(rng);
            pts(i, 1) = coord(rng);
        }
        const NodeSet nodes{std::move(pts)};
        const KernelSpec spec{static_cast<RbfFamily>(kernel(rng)), 1.0};
        const ScalingFunction psi = random_scaling(rng);

        const Eigen::MatrixXd scaled = gram_matrix(spec, &psi, nodes);
        const Eigen::MatrixXd lifted = gram_matrix(spec, nullptr, lift(nodes, psi));
        ok = ok && (scaled.array() == lifted.array()).all();
    }
    note(4, ok, "20 random fixtures, scaled gram == lifted plain gram entrywise");
}

// ----------------------------------------------------------------- criterion 6

void run_fill_distance_checks() {
    const auto t0 = Clock::now();
    int diff_violations = 0, bound_violations = 0;
    double worst_diff = 0.0;
    int worst_n = 0;
    for (int n = 2; n <= 40; ++n) {
        const double closed = fill_distance_closed(n, n + 1);
        const double brute = fill_distance_brute(lissajous_nodes({n, n + 1, 2}), 2001);
        const double diff = std::abs(closed - brute);
        if (diff > 2e-3) ++diff_violations;
        if (diff > worst_diff) {
            worst_diff = diff;
            worst_n = n;
        }
        const double lower =
            0.5 * std::max(std::sin(M_PI / n), std::sin(M_PI / (n + 1)));
        const double upper = std::max(M_PI / (2.0 * n), M_PI / (2.0 * (n + 1)));
        if (closed < lower || closed > upper) ++bound_violations;
    }
    const bool ok = diff_violations == 0 && bound_violations == 0;
    note(6, ok,
         "closed vs brute(2001^2): " + std::to_string(diff_violations) +
             "/39 pairs exceed 2e-3, worst |diff|=" + fmt(worst_diff) + " at n=" +
             std::to_string(worst_n) + "; bounds violated for " +
             std::to_string(bound_violations) + "/39 [" + fmt(seconds_since(t0), 3) +
             " s]");
}

// ----------------------------------------------------------------- criterion 7

void run_count_checks() {
    bool ok = true;
    for (int n = 2; n <= 40; ++n) {
        const std::size_t expected = static_cast<std::size_t>(2 * n * (n + 1) + 2 * n + 1);
        ok = ok && lissajous_nodes({n, n + 1, 2}).size() == expected;
    }
    note(7, ok, "|LS(n,n+1)| == 2n(n+1)+2n+1 for n in 2..40");
}

// ----------------------------------------------------------------- criterion 8

void run_svm_checks() {
    std::mt19937_64 rng(977);
    std::uniform_real_distribution<double> center(-0.6, 0.6), unit(0.0, 1.0);
    std::uniform_int_distribution<int> count(8, 25), kernel(0, 3);
    bool ok = true;
    std::string first_failure;

    for (int fixture = 0; fixture < 50 && ok; ++fixture) {
        // Two disc-shaped classes with a guaranteed corridor between them.
        const double cx = center(rng), cy = center(rng);
        const double angle = 2.0 * M_PI * unit(rng);
        const double gap = 0.55 + 0.3 * unit(rng);
        const double dx = std::cos(angle) * gap, dy = std::sin(angle) * gap;
        const int na = count(rng), nb = count(rng);

        NodeSet::Storage pts(na + nb, 2);
        std::vector<int> labels(static_cast<std::size_t>(na + nb));
        for (int i = 0; i < na + nb; ++i) {
            const bool second = i >= na;
            const double r = 0.15 * std::sqrt(unit(rng));
            const double a = 2.0 * M_PI * unit(rng);
            pts(i, 0) = (second ? cx + dx : cx) + r * std::cos(a);
            pts(i, 1) = (second ? cy + dy : cy) + r * std::sin(a);
            labels[static_cast<std::size_t>(i)] = second ? 2 : 1;
        }
        const LabeledData data{NodeSet{std::move(pts)}, labels};
        const KernelSpec spec{static_cast<RbfFamily>(kernel(rng)), 1.0};

        TrainOptions options;
        options.record_objective = true;
        const SvmModel model = svm_train(data, spec, 10.0, options);

        int correct = 0;
        for (std::size_t i = 0; i < data.nodes.size(); ++i) {
            const int truth = labels[i] == 1 ? -1 : 1;
            if (svm_decide(model, data.nodes.point(i)) == truth) ++correct;
        }
        const bool accurate = correct == na + nb;

        double dual_balance = 0.0;
        bool box_ok = true;
        double kkt_worst = 0.0;
        for (std::size_t s = 0; s < model.support.size(); ++s) {
            const double beta = model.beta(static_cast<Eigen::Index>(s));
            dual_balance += beta * model.z[s];
            box_ok = box_ok && beta >= 0.0 && beta <= model.C;
            if (beta < model.C - 1e-12) {
                const double margin =
                    model.z[s] * svm_decision(model, model.support.point(s));
                kkt_worst = std::max(kkt_worst, std::abs(margin - 1.0));
            }
        }
        bool objective_ok = true;
        for (std::size_t i = 1; i < model.objective.size(); ++i)
            objective_ok = objective_ok &&
                           model.objective[i] >=
                               model.objective[i - 1] -
                                   1e-12 * (1.0 + std::abs(model.objective[i - 1]));

        const bool fixture_ok = accurate && std::abs(dual_balance) <= 1e-2 && box_ok &&
                                kkt_worst <= 1e-3 + 1e-12 && objective_ok;
        if (!fixture_ok && first_failure.empty()) {
            std::ostringstream os;
            os << "fixture " << fixture << " (" << kernel_name(spec.family)
               << "): accuracy " << correct << "/" << (na + nb) << ", |sum beta z|="
               << fmt(std::abs(dual_balance)) << ", kkt=" << fmt(kkt_worst)
               << (box_ok ? "" : ", box violated")
               << (objective_ok ? "" : ", objective decreased");
            first_failure = os.str();
        }
        ok = ok && fixture_ok;
    }
    note(8, ok,
         ok ? "50 separable fixtures: accuracy 100%, duality/box/KKT within tolerance"
            : first_failure);
}

// ----------------------------------------------------------------- criterion 9

void run_kmeans_checks() {
    bool monotone = true;
    const auto check_monotone = [&](const KmeansResult& res) {
        for (std::size_t i = 1; i < res.objective_l2.size(); ++i)
            monotone = monotone && res.objective_l2[i] <= res.objective_l2[i - 1] + 1e-12;
    };

    const NodeSet nodes = lissajous_nodes({33, 32, 2});
    const Eigen::VectorXd geo = sample_phantom(Phantom::geometric(), nodes);
    const Eigen::VectorXd sl = sample_phantom(Phantom::shepp_logan(), nodes);
    for (int k = 2; k <= 5; ++k) {
        check_monotone(kmeans_1d(geo, std::min(k, 4), 0));
        check_monotone(kmeans_1d(sl, k, 0));
    }
    std::mt19937_64 rng(5150);
    std::uniform_real_distribution<double> value(0.0, 3.0);
    for (int fixture = 0; fixture < 10; ++fixture) {
        Eigen::VectorXd v(200);
        for (int i = 0; i < 200; ++i) v(i) = value(rng);
        check_monotone(kmeans_1d(v, 3, static_cast<std::uint64_t>(fixture)));
    }

    const KmeansResult res = kmeans_1d(geo, 4, 0);
    const std::array<double, 4> expected = {0.0, 1.0, 1.5, 2.0};
    bool centers_ok = res.centers.size() == 4;
    std::string centers = "centers";
    for (std::size_t i = 0; i < res.centers.size() && i < 4; ++i) {
        centers += " " + fmt(res.centers[i]);
        centers_ok = centers_ok && std::abs(res.centers[i] - expected[i]) <= 0.05;
    }
    note(9, monotone && centers_ok,
         "objective non-increasing on all fixtures; geometric " + centers +
             " vs {0, 1, 1.5, 2}");
}

// ---------------------------------------------------------------- criterion 10

void run_perturbation_checks() {
    PerturbationConfig config; // defaults: matern0, offsets {0, 0.05, 0.15, 0.3}
    config.grid_m = 150;
    const PerturbationResult res = run_perturbation(config);
    bool monotone = true;
    std::string trail = "rel_l1";
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        trail += " " + fmt(res.rows[i].rel_l1);
        if (i > 0) monotone = monotone && res.rows[i].rel_l1 >= res.rows[i - 1].rel_l1;
        residuals.add("perturbation offset " + fmt(res.rows[i].offset),
                      res.rows[i].max_node_residual, 2.0);
    }
    note(10, monotone && res.rows.size() == 4, trail + " across offsets 0/0.05/0.15/0.3");
}

// ---------------------------------------------------------------- criterion 11

void run_constant_scaling_checks() {
    const NodeSet nodes = lissajous_nodes({10, 11, 2});
    const Eigen::VectorXd values = sample_phantom(Phantom::geometric(), nodes);
    const NodeSet grid = uniform_grid(50);
    double worst = 0.0;
    for (RbfFamily family :
         {RbfFamily::Matern0, RbfFamily::Matern2, RbfFamily::Matern4, RbfFamily::Gauss}) {
        const KernelSpec spec{family, 1.0};
        const Interpolant plain = fit(nodes, values, spec, std::nullopt, 1e-12);
        const Interpolant scaled =
            fit(nodes, values, spec, ScalingFunction::constant(0.7), 1e-12);
        residuals.add("const-psi/" + kernel_name(family), max_node_residual(scaled), 2.0);
        const Eigen::VectorXd diff = evaluate(plain, grid) - evaluate(scaled, grid);
        worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
    note(11, worst <= 1e-12,
         "max |constant-psi - plain| = " + fmt(worst) + " on 50^2 grid, all kernels");
}

} // namespace

int main() {
    const auto t0 = Clock::now();

    run_slope_battery();
    run_pipeline_comparison();
    run_lifting_checks();
    run_fill_distance_checks();
    run_count_checks();
    run_svm_checks();
    run_kmeans_checks();
    run_perturbation_checks();
    run_constant_scaling_checks();

    std::string audit = std::to_string(residuals.count) +
                        " fits audited, worst residual/bound = " +
                        fmt(residuals.worst_ratio) + " (" + residuals.worst_label + "), " +
                        std::to_string(residuals.violators.size()) + " over bound";
    if (!residuals.violators.empty()) {
        audit += ":";
        for (const auto& v : residuals.violators) audit += " " + v;
    }
    note(5, residuals.violators.empty(), audit);

    int failures = 0;
    for (int id = 1; id <= 11; ++id) {
        const Criterion& c = gate[id];
        std::cout << (c.pass ? "PASS" : "FAIL") << " criterion " << id << ": " << c.detail
                  << "\n";
        if (!c.pass) ++failures;
    }
    std::cout << (failures == 0 ? "acceptance clean" : "acceptance has failures")
              << " (" << failures << " failed, " << fmt(seconds_since(t0), 4)
              << " s total)\n";
    return failures;
}
