#ifndef VSDK_GEOMETRY_HPP
#define VSDK_GEOMETRY_HPP

#include <Eigen/Core>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace vsdk {

/// Axis-aligned bounding box, the same extent in every dimension.
struct BoundingBox {
    double lo = -1.0;
    double hi = 1.0;
};

/// An ordered set of d-dimensional points. Rows of the storage matrix are
/// points, so a single point is a contiguous span of doubles.
class NodeSet {
public:
    using Storage = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    explicit NodeSet(int dim = 2) : dim_(dim), pts_(0, dim) {}
    NodeSet(Storage pts, std::optional<BoundingBox> box = std::nullopt)
        : dim_(static_cast<int>(pts.cols())), pts_(std::move(pts)), box_(box) {}

    int dim() const { return dim_; }
    std::size_t size() const { return static_cast<std::size_t>(pts_.rows()); }
    bool empty() const { return pts_.rows() == 0; }

    std::span<const double> point(std::size_t i) const {
        return {pts_.data() + i * static_cast<std::size_t>(dim_), static_cast<std::size_t>(dim_)};
    }
    double coord(std::size_t i, int k) const { return pts_(static_cast<Eigen::Index>(i), k); }

    const Storage& matrix() const { return pts_; }
    Storage& matrix() { return pts_; }

    const std::optional<BoundingBox>& bounds() const { return box_; }
    void set_bounds(BoundingBox b) { box_ = b; }

    void append(std::span<const double> p);

    /// True when every point lies inside the declared bounding box. Sets with
    /// no declared box (e.g. lifted graph nodes) report true.
    bool within_bounds() const;

    /// Exact duplicate check, O(N log N).
    bool has_duplicates() const;

private:
    int dim_;
    Storage pts_;
    std::optional<BoundingBox> box_;
};

/// Frequencies and family selector of a Lissajous generating curve.
/// eps = 2 is the non-degenerate family used as sampling trajectories;
/// eps = 1 curves are degenerate (traced twice per period).
struct LissajousParams {
    int n1 = 2;
    int n2 = 3;
    int eps = 2;
};

/// Validates invariants (coprime frequencies, eps in {1,2}); throws
/// ParameterError otherwise.
void validate(const LissajousParams& params);

/// Distinct sample points of the Lissajous curve gamma(t) =
/// (cos(n2 t), cos(n1 t - (eps-1) pi / (2 n2))) at t_k = pi k / (eps n1 n2),
/// k = 0, ..., 2 eps n1 n2 - 1. Retraced samples are collapsed exactly (by
/// the integer congruence classes of the cosine arguments) and the first
/// occurrence wins, so ordering follows the sample index k.
/// For eps = 2 and n1 + n2 odd the count is 2 n1 n2 + n1 + n2.
NodeSet lissajous_nodes(const LissajousParams& params);

/// Closed-form fill distance of the eps = 2 Lissajous nodes in [-1,1]^2,
/// expressed through S_n = sin(pi/n). Requires n1, n2 >= 2 and coprime.
double fill_distance_closed(int n1, int n2);

/// Brute-force fill distance: max over an M x M evaluation grid covering
/// [-1,1]^2 of the distance to the nearest node. Oracle for the closed form.
double fill_distance_brute(const NodeSet& nodes, int grid_resolution);

/// M x M equispaced points covering [-1,1]^2 in row-major order
/// (x varies fastest). Requires M >= 2.
NodeSet uniform_grid(int M);

/// greatest common divisor helper exposed for validation code
long long gcd_ll(long long a, long long b);

} // namespace vsdk

#endif
