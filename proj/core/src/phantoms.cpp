#include "vsdk/phantoms.hpp"

#include <algorithm>
#include <cmath>

#include "vsdk/errors.hpp"

namespace vsdk {

namespace {

// Contrast-enhanced ("modified") Shepp-Logan head table, the common display
// variant. Intensities already sum into [0,1], so the affine display rescale
// is the identity. Columns: cx, cy, a, b, angle, intensity.
constexpr SheppLoganEllipse kSheppLogan[10] = {
    {0.0, 0.0, 0.69, 0.92, 0.0, 1.0},
    {0.0, -0.0184, 0.6624, 0.874, 0.0, -0.8},
    {0.22, 0.0, 0.11, 0.31, -18.0, -0.2},
    {-0.22, 0.0, 0.16, 0.41, 18.0, -0.2},
    {0.0, 0.35, 0.21, 0.25, 0.0, 0.1},
    {0.0, 0.1, 0.046, 0.046, 0.0, 0.1},
    {0.0, -0.1, 0.046, 0.046, 0.0, 0.1},
    {-0.08, -0.605, 0.046, 0.023, 0.0, 0.1},
    {0.0, -0.606, 0.023, 0.023, 0.0, 0.1},
    {0.06, -0.605, 0.023, 0.046, 0.0, 0.1},
};

inline bool inside_ellipse(const SheppLoganEllipse& e, double x, double y) {
    const double th = e.angle_deg * M_PI / 180.0;
    const double ct = std::cos(th), st = std::sin(th);
    const double dx = x - e.cx, dy = y - e.cy;
    const double u = (ct * dx + st * dy) / e.a;
    const double v = (-st * dx + ct * dy) / e.b;
    return u * u + v * v <= 1.0;
}

} // namespace

std::string shepp_logan_variant() { return "modified-shepp-logan-v1"; }

Phantom Phantom::shepp_logan() {
    Phantom p;
    p.kind_ = PhantomKind::SheppLogan;
    p.ellipses_.assign(std::begin(kSheppLogan), std::end(kSheppLogan));
    // Attainable gray levels. Besides the obvious ones (background 0, skull 1,
    // brain 0.2, ventricles 0, small features 0.3) two overlaps contribute:
    // the big top feature dips into the left ventricle (0.1) and intersects
    // the upper central disk (0.4).
    p.value_set_ = {0.0, 0.1, 0.2, 0.3, 0.4, 1.0};
    return p;
}

Phantom Phantom::geometric(const GeometricParams& params) {
    Phantom p;
    p.kind_ = PhantomKind::Geometric;
    p.geom_ = params;
    p.value_set_ = {0.0, params.w_e, params.w_r, params.w_p};
    std::sort(p.value_set_.begin(), p.value_set_.end());
    return p;
}

double Phantom::operator()(double x, double y) const {
    if (kind_ == PhantomKind::SheppLogan) {
        // Table intensities are exact tenths; accumulating them as scaled
        // integers keeps every gray level exact (0.2 instead of 0.2 - ulp),
        // which the piecewise-constant scaling functions rely on.
        long long tenths = 0;
        for (const auto& e : ellipses_) {
            if (inside_ellipse(e, x, y)) tenths += std::llround(e.intensity * 10.0);
        }
        return static_cast<double>(tenths) / 10.0;
    }
    const GeometricParams& g = geom_;
    double v = 0.0;
    {
        const double u = (x - g.e_cx) / g.e_a;
        const double w = (y - g.e_cy) / g.e_b;
        if (u * u + w * w <= 1.0) v += g.w_e;
    }
    if (x >= g.r_x0 && x <= g.r_x1 && y >= g.r_y0 && y <= g.r_y1) v += g.w_r;
    {
        const double dx = x - g.p_x0;
        if (std::abs(dx) <= g.p_halfwidth && y >= g.p_ymin && y <= g.p_y0 - g.p_a * dx * dx)
            v += g.w_p;
    }
    return v;
}

double shepp_logan_eval(double x, double y) {
    static const Phantom p = Phantom::shepp_logan();
    return p(x, y);
}

double geometric_eval(double x, double y) {
    static const Phantom p = Phantom::geometric();
    return p(x, y);
}

Eigen::VectorXd sample_phantom(const Phantom& ph, const NodeSet& nodes) {
    Eigen::VectorXd v(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i)
        v(static_cast<Eigen::Index>(i)) = ph(nodes.coord(i, 0), nodes.coord(i, 1));
    return v;
}

ScalingFunction make_phantom_scaling(std::shared_ptr<const Phantom> ph, double factor) {
    if (!ph) throw ParameterError("make_phantom_scaling: null phantom");
    std::vector<double> values;
    values.reserve(ph->value_set().size());
    for (double v : ph->value_set()) values.push_back(factor * v);
    return ScalingFunction(
        ScalingKind::PhantomScaled,
        [ph, factor](std::span<const double> p) { return factor * (*ph)(p[0], p[1]); },
        std::move(values));
}

} // namespace vsdk
