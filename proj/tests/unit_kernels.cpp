#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "vsdk/errors.hpp"
#include "vsdk/geometry.hpp"
#include "vsdk/kernels.hpp"
#include "vsdk/phantoms.hpp"

using namespace vsdk;

namespace {

NodeSet random_nodes(std::size_t n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    NodeSet::Storage pts(static_cast<Eigen::Index>(n), 2);
    for (Eigen::Index i = 0; i < pts.rows(); ++i) {
        pts(i, 0) = u(rng);
        pts(i, 1) = u(rng);
    }
    return NodeSet(std::move(pts), BoundingBox{-1.0, 1.0});
}

} // namespace

TEST_CASE("rbf profile values") {
    CHECK(rbf_eval({RbfFamily::Gauss}, 0.0) == 1.0);
    CHECK(rbf_eval({RbfFamily::Matern0}, 0.0) == 1.0);
    CHECK(rbf_eval({RbfFamily::Matern2}, 0.0) == 1.0);
    CHECK(rbf_eval({RbfFamily::Matern4}, 0.0) == 3.0);

    const double e1 = std::exp(-1.0);
    CHECK(rbf_eval({RbfFamily::Matern0}, 1.0) == doctest::Approx(e1).epsilon(1e-15));
    CHECK(rbf_eval({RbfFamily::Matern2}, 1.0) ==
          doctest::Approx(0.7357588823428847).epsilon(1e-15));
    CHECK(rbf_eval({RbfFamily::Matern4}, 1.0) ==
          doctest::Approx(2.5751560882000963).epsilon(1e-15));
    CHECK(rbf_eval({RbfFamily::Gauss}, 0.5) ==
          doctest::Approx(0.7788007830714049).epsilon(1e-15));
}

TEST_CASE("rbf profiles are positive and nonincreasing") {
    for (RbfFamily fam :
         {RbfFamily::Matern0, RbfFamily::Matern2, RbfFamily::Matern4, RbfFamily::Gauss}) {
        CAPTURE(kernel_name(fam));
        double prev = rbf_eval({fam}, 0.0);
        for (double r = 0.1; r <= 6.0; r += 0.1) {
            const double v = rbf_eval({fam}, r);
            CHECK(v > 0.0);
            CHECK(v <= prev + 1e-15);
            prev = v;
        }
    }
}

TEST_CASE("rbf domain and scale") {
    CHECK_THROWS_AS(rbf_eval({RbfFamily::Gauss}, -0.1), DomainError);
    // distances are divided by the scale before applying phi
    CHECK(rbf_eval({RbfFamily::Matern0, 2.0}, 2.0) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("kernel names round-trip") {
    for (RbfFamily fam :
         {RbfFamily::Matern0, RbfFamily::Matern2, RbfFamily::Matern4, RbfFamily::Gauss}) {
        CHECK(kernel_from_name(kernel_name(fam)) == fam);
    }
    CHECK(kernel_name(RbfFamily::Gauss) == "gauss");
    CHECK_THROWS_AS(kernel_from_name("wendland"), ParameterError);
}

TEST_CASE("squared distance") {
    const double a[2] = {0.0, 0.0};
    const double b[2] = {3.0, 4.0};
    CHECK(squared_distance(a, b) == 25.0);
    CHECK(squared_distance(a, a) == 0.0);
}

TEST_CASE("vsdk_eval reduces to the plain kernel") {
    const double x[2] = {-0.3, 0.2};
    const double y[2] = {0.5, -0.1};
    const ScalingFunction psi = ScalingFunction::constant(4.2);
    for (RbfFamily fam :
         {RbfFamily::Matern0, RbfFamily::Matern2, RbfFamily::Matern4, RbfFamily::Gauss}) {
        const KernelSpec spec{fam};
        CHECK(vsdk_eval(spec, nullptr, x, y) == vsdk_eval(spec, &psi, x, y));
        // symmetry
        CHECK(vsdk_eval(spec, &psi, x, y) == vsdk_eval(spec, &psi, y, x));
        // zero distance gives phi(0) regardless of psi
        CHECK(vsdk_eval(spec, &psi, x, x) == rbf_eval(spec, 0.0));
    }
}

TEST_CASE("vsdk_eval with a discontinuous scaling") {
    // psi jumps from 0 to 1 across x = 0; points straddle the jump.
    const ScalingFunction psi(
        ScalingKind::PhantomScaled,
        [](std::span<const double> p) { return p[0] < 0.0 ? 0.0 : 1.0; }, {0.0, 1.0});
    const double x[2] = {-0.1, 0.0};
    const double y[2] = {0.1, 0.0};
    const double expected = std::exp(-std::sqrt(0.04 + 1.0));
    CHECK(vsdk_eval({RbfFamily::Matern0}, &psi, x, y) ==
          doctest::Approx(expected).epsilon(1e-15));
    CHECK(expected == doctest::Approx(0.3606656587941864).epsilon(1e-15));

    // the same evaluation through cached psi values
    CHECK(vsdk_eval_cached({RbfFamily::Matern0}, x, 0.0, y, 1.0) ==
          vsdk_eval({RbfFamily::Matern0}, &psi, x, y));
}

TEST_CASE("lift appends psi as a coordinate") {
    const NodeSet nodes = random_nodes(7, 11u);
    const ScalingFunction psi(
        ScalingKind::PhantomScaled,
        [](std::span<const double> p) { return p[1] < 0.0 ? 0.5 : 1.5; }, {0.5, 1.5});
    const NodeSet lifted = lift(nodes, psi);
    REQUIRE(lifted.dim() == 3);
    REQUIRE(lifted.size() == nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) {
        CHECK(lifted.coord(i, 0) == nodes.coord(i, 0));
        CHECK(lifted.coord(i, 1) == nodes.coord(i, 1));
        CHECK(lifted.coord(i, 2) == psi(nodes.point(i)));
    }
}

TEST_CASE("scaling_values") {
    const NodeSet nodes = random_nodes(5, 3u);
    CHECK(scaling_values(nullptr, nodes).empty());
    const ScalingFunction psi = ScalingFunction::constant(0.25);
    const std::vector<double> vals = scaling_values(&psi, nodes);
    REQUIRE(vals.size() == 5);
    for (double v : vals) CHECK(v == 0.25);
}

TEST_CASE("gram matrix is exactly symmetric with phi(0) diagonal") {
    const NodeSet nodes = random_nodes(12, 17u);
    const auto phantom = std::make_shared<Phantom>(Phantom::geometric());
    const ScalingFunction psi = make_phantom_scaling(phantom, 1.0);
    for (RbfFamily fam : {RbfFamily::Matern0, RbfFamily::Gauss}) {
        const KernelSpec spec{fam};
        const Eigen::MatrixXd a = gram_matrix(spec, &psi, nodes);
        CHECK(a == a.transpose());
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            CHECK(a(i, i) == rbf_eval(spec, 0.0));
    }
}

TEST_CASE("gram matrix equals the lifted plain gram matrix bitwise") {
    const NodeSet nodes = random_nodes(20, 23u);
    const auto phantom = std::make_shared<Phantom>(Phantom::geometric());
    const ScalingFunction psi = make_phantom_scaling(phantom, 0.5);
    const NodeSet lifted = lift(nodes, psi);
    for (RbfFamily fam :
         {RbfFamily::Matern0, RbfFamily::Matern2, RbfFamily::Matern4, RbfFamily::Gauss}) {
        CAPTURE(kernel_name(fam));
        const KernelSpec spec{fam};
        const Eigen::MatrixXd scaled = gram_matrix(spec, &psi, nodes);
        const Eigen::MatrixXd plain = gram_matrix(spec, nullptr, lifted);
        CHECK(scaled == plain);
    }
}

TEST_CASE("coincident projections with different psi values") {
    // two nodes at the same planar position separated only in psi
    NodeSet::Storage pts(2, 2);
    pts << 0.2, 0.2, 0.2, 0.2;
    const NodeSet nodes{std::move(pts)};
    std::size_t which = 0;
    const ScalingFunction psi(
        ScalingKind::Classifier,
        [&which](std::span<const double>) { return which++ == 0 ? 0.0 : 1.0; }, {0.0, 1.0});
    const Eigen::MatrixXd a = gram_matrix({RbfFamily::Matern0}, &psi, nodes);
    CHECK(a(0, 1) == doctest::Approx(std::exp(-1.0)).epsilon(1e-15));
}

TEST_CASE("cross matrix matches pointwise evaluation") {
    const NodeSet nodes = random_nodes(6, 5u);
    const NodeSet points = random_nodes(9, 7u);
    const ScalingFunction psi(
        ScalingKind::PhantomScaled,
        [](std::span<const double> p) { return p[0] + p[1] < 0.0 ? 0.0 : 1.0; }, {0.0, 1.0});
    const KernelSpec spec{RbfFamily::Matern2};
    const Eigen::MatrixXd b = kernel_cross_matrix(spec, &psi, points, nodes);
    REQUIRE(b.rows() == 9);
    REQUIRE(b.cols() == 6);
    for (Eigen::Index i = 0; i < b.rows(); ++i)
        for (Eigen::Index j = 0; j < b.cols(); ++j)
            CHECK(b(i, j) == vsdk_eval(spec, &psi,
                                       points.point(static_cast<std::size_t>(i)),
                                       nodes.point(static_cast<std::size_t>(j))));
}
