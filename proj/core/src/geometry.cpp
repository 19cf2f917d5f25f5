#include "vsdk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <set>
#include <utility>

#include "vsdk/errors.hpp"
#include "vsdk/parallel.hpp"

namespace vsdk {

long long gcd_ll(long long a, long long b) { return std::gcd(a, b); }

void NodeSet::append(std::span<const double> p) {
    if (static_cast<int>(p.size()) != dim_)
        throw ParameterError("NodeSet::append: point dimension mismatch");
    pts_.conservativeResize(pts_.rows() + 1, Eigen::NoChange);
    for (int k = 0; k < dim_; ++k) pts_(pts_.rows() - 1, k) = p[k];
}

bool NodeSet::within_bounds() const {
    if (!box_) return true;
    return (pts_.array() >= box_->lo).all() && (pts_.array() <= box_->hi).all();
}

bool NodeSet::has_duplicates() const {
    std::vector<std::size_t> idx(size());
    std::iota(idx.begin(), idx.end(), 0);
    auto less = [this](std::size_t a, std::size_t b) {
        for (int k = 0; k < dim_; ++k) {
            if (pts_(a, k) != pts_(b, k)) return pts_(a, k) < pts_(b, k);
        }
        return false;
    };
    std::sort(idx.begin(), idx.end(), less);
    for (std::size_t i = 1; i < idx.size(); ++i) {
        if (!less(idx[i - 1], idx[i]) && !less(idx[i], idx[i - 1])) return true;
    }
    return false;
}

void validate(const LissajousParams& params) {
    if (params.eps != 1 && params.eps != 2)
        throw ParameterError("lissajous: eps must be 1 or 2");
    if (params.n1 < 1 || params.n2 < 1)
        throw ParameterError("lissajous: frequencies must be positive");
    if (std::gcd(params.n1, params.n2) != 1)
        throw ParameterError("lissajous: frequencies must be relatively prime");
}

namespace {

// Fold an index into its cosine equivalence class: cos(pi*i/m) == cos(pi*i'/m)
// exactly when i == +/- i' (mod 2m), so min(i mod 2m, 2m - i mod 2m) is a
// canonical representative.  Deduplicating on these integer classes collapses
// retraced curve samples exactly, which coordinate rounding cannot guarantee.
int fold(long long i, int two_m) {
    int r = static_cast<int>(((i % two_m) + two_m) % two_m);
    return std::min(r, two_m - r);
}

} // namespace

NodeSet lissajous_nodes(const LissajousParams& params) {
    validate(params);
    const int n1 = params.n1, n2 = params.n2, eps = params.eps;
    const int total = 2 * eps * n1 * n2;
    const double phase = (eps - 1) * M_PI / (2.0 * n2);

    // Sample k has x = cos(pi*k/(eps*n1)) and y = cos(pi*(k - (eps-1))/(eps*n2)),
    // so the point is determined by the pair of folded index classes.
    std::set<std::pair<int, int>> seen;
    NodeSet::Storage pts(total, 2);
    Eigen::Index count = 0;
    for (int k = 0; k < total; ++k) {
        const int cx = fold(k, 2 * eps * n1);
        const int cy = fold(k - (eps - 1), 2 * eps * n2);
        if (!seen.insert({cx, cy}).second) continue;
        const double t = M_PI * k / (static_cast<double>(eps) * n1 * n2);
        pts(count, 0) = std::cos(n2 * t);
        pts(count, 1) = std::cos(n1 * t - phase);
        ++count;
    }
    pts.conservativeResize(count, Eigen::NoChange);
    return NodeSet(std::move(pts), BoundingBox{-1.0, 1.0});
}

double fill_distance_closed(int n1, int n2) {
    if (n1 < 2 || n2 < 2)
        throw ParameterError("fill_distance_closed: frequencies must be >= 2");
    if (std::gcd(n1, n2) != 1)
        throw ParameterError("fill_distance_closed: frequencies must be relatively prime");
    auto S = [](int n) { return std::sin(M_PI / n); };
    const double s1 = S(n1), s2 = S(n2);
    const double d1 = S(2 * n1), d2 = S(2 * n2);
    const double a = (d1 * d1 + d2 * d2 - s1 * d1) / d2;
    const double b = (d1 * d1 + d2 * d2 - s2 * d2) / d1;
    return 0.5 * std::max(std::sqrt(s1 * s1 + a * a), std::sqrt(s2 * s2 + b * b));
}

double fill_distance_brute(const NodeSet& nodes, int grid_resolution) {
    if (nodes.empty()) throw DomainError("fill_distance_brute: empty node set");
    if (grid_resolution < 2)
        throw ParameterError("fill_distance_brute: grid resolution must be >= 2");

    const std::size_t n = nodes.size();
    const int res = grid_resolution;

    // Cell list over [-1,1]^2 so each grid query inspects a handful of nodes.
    const int ncell = std::max(1, static_cast<int>(std::sqrt(static_cast<double>(n))));
    const double cell = 2.0 / ncell;
    std::vector<std::vector<std::uint32_t>> cells(static_cast<std::size_t>(ncell) * ncell);
    auto cell_of = [&](double v) {
        int c = static_cast<int>((v + 1.0) / cell);
        return std::clamp(c, 0, ncell - 1);
    };
    for (std::size_t i = 0; i < n; ++i) {
        const int cx = cell_of(nodes.coord(i, 0));
        const int cy = cell_of(nodes.coord(i, 1));
        cells[static_cast<std::size_t>(cy) * ncell + cx].push_back(static_cast<std::uint32_t>(i));
    }

    auto nearest_sq = [&](double x, double y) {
        const int cx = cell_of(x), cy = cell_of(y);
        double best = std::numeric_limits<double>::infinity();
        for (int ring = 0; ring < 2 * ncell; ++ring) {
            for (int dy = -ring; dy <= ring; ++dy) {
                const int yy = cy + dy;
                if (yy < 0 || yy >= ncell) continue;
                const bool edge_row = (std::abs(dy) == ring);
                const int step = edge_row ? 1 : 2 * ring;
                for (int dx = -ring; dx <= ring; dx += (step == 0 ? 1 : step)) {
                    const int xx = cx + dx;
                    if (xx < 0 || xx >= ncell) continue;
                    for (std::uint32_t i : cells[static_cast<std::size_t>(yy) * ncell + xx]) {
                        const double ddx = x - nodes.coord(i, 0);
                        const double ddy = y - nodes.coord(i, 1);
                        best = std::min(best, ddx * ddx + ddy * ddy);
                    }
                    if (ring == 0) break;
                }
            }
            // nodes in ring >= r+1 are at least r*cell away
            if (best <= static_cast<double>(ring) * cell * static_cast<double>(ring) * cell)
                break;
        }
        return best;
    };

    const double spacing = 2.0 / (res - 1);
    std::vector<double> row_max(static_cast<std::size_t>(res), 0.0);
    detail::parallel_for(static_cast<std::size_t>(res), [&](std::size_t rb, std::size_t re) {
        for (std::size_t r = rb; r < re; ++r) {
            const double y = -1.0 + spacing * static_cast<double>(r);
            double m = 0.0;
            for (int c = 0; c < res; ++c) {
                const double x = -1.0 + spacing * c;
                m = std::max(m, nearest_sq(x, y));
            }
            row_max[r] = m;
        }
    }, 8);
    return std::sqrt(*std::max_element(row_max.begin(), row_max.end()));
}

NodeSet uniform_grid(int M) {
    if (M < 2) throw ParameterError("uniform_grid: M must be >= 2");
    NodeSet::Storage pts(static_cast<Eigen::Index>(M) * M, 2);
    const double spacing = 2.0 / (M - 1);
    Eigen::Index r = 0;
    for (int iy = 0; iy < M; ++iy) {
        const double y = -1.0 + spacing * iy;
        for (int ix = 0; ix < M; ++ix, ++r) {
            pts(r, 0) = -1.0 + spacing * ix;
            pts(r, 1) = y;
        }
    }
    return NodeSet(std::move(pts), BoundingBox{-1.0, 1.0});
}

} // namespace vsdk
