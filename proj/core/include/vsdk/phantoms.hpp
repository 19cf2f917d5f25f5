#ifndef VSDK_PHANTOMS_HPP
#define VSDK_PHANTOMS_HPP

#include <Eigen/Core>
#include <memory>
#include <string>
#include <vector>

#include "vsdk/geometry.hpp"
#include "vsdk/kernels.hpp"

namespace vsdk {

/// One ellipse of the Shepp-Logan table: center, semi-axes, ccw rotation in
/// degrees, additive intensity.
struct SheppLoganEllipse {
    double cx, cy;
    double a, b;
    double angle_deg;
    double intensity;
};

struct GeometricParams {
    // ellipse E
    double e_cx = -0.4, e_cy = 0.45, e_a = 0.35, e_b = 0.25;
    // axis-aligned rectangle R
    double r_x0 = 0.05, r_x1 = 0.75, r_y0 = 0.25, r_y1 = 0.65;
    // bounded parabola region P: y <= p_y0 - p_a (x - p_x0)^2, y >= p_ymin,
    // |x - p_x0| <= p_halfwidth
    double p_x0 = 0.1, p_y0 = -0.25, p_a = 1.5, p_ymin = -0.85, p_halfwidth = 0.55;
    double w_e = 1.0, w_r = 1.5, w_p = 2.0;
};

enum class PhantomKind { SheppLogan, Geometric };

/// Piecewise-constant test images on [-1,1]^2, evaluable at arbitrary points.
/// Boundary points count as inside (closed shapes), evaluation is pure and
/// bit-reproducible.
class Phantom {
public:
    static Phantom shepp_logan();
    static Phantom geometric(const GeometricParams& params = GeometricParams{});

    double operator()(double x, double y) const;
    double operator()(std::span<const double> p) const { return (*this)(p[0], p[1]); }

    PhantomKind kind() const { return kind_; }
    const std::vector<SheppLoganEllipse>& ellipses() const { return ellipses_; }
    const GeometricParams& geometric_params() const { return geom_; }

    /// All values the phantom can attain (sums over overlapping shapes).
    const std::vector<double>& value_set() const { return value_set_; }

private:
    Phantom() = default;
    PhantomKind kind_ = PhantomKind::SheppLogan;
    std::vector<SheppLoganEllipse> ellipses_;
    GeometricParams geom_;
    std::vector<double> value_set_;
};

/// Identifier of the pinned Shepp-Logan parameter set.
std::string shepp_logan_variant();

double shepp_logan_eval(double x, double y);
double geometric_eval(double x, double y);

/// Pointwise evaluation on a node set; on a uniform_grid this is the
/// rasterization used for figures and error grids.
Eigen::VectorXd sample_phantom(const Phantom& ph, const NodeSet& nodes);

/// Scaling function psi = factor * phantom. Piecewise constant because the
/// phantom is.
ScalingFunction make_phantom_scaling(std::shared_ptr<const Phantom> ph, double factor);

} // namespace vsdk

#endif
