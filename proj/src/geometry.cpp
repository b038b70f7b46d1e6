#include "clusterdd/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace clusterdd {

Rect ClusterLayout::cell(int m) const {
    const int ix = m % grid_dim;
    const int iy = m / grid_dim;
    const Scalar w = cell_side();
    return Rect{ix * w, iy * w, (ix + 1) * w, (iy + 1) * w};
}

ClusterLayout make_layout(Scalar region_side, int grid_dim) {
    if (!(region_side > 0)) {
        throw std::invalid_argument("make_layout: region side must be positive");
    }
    if (grid_dim < 1) {
        throw std::invalid_argument("make_layout: grid dimension must be >= 1");
    }
    ClusterLayout layout;
    layout.region = Region{region_side};
    layout.grid_dim = grid_dim;
    const int m_total = grid_dim * grid_dim;
    layout.ch_positions.resize(m_total, 2);
    const Scalar w = region_side / grid_dim;
    for (int m = 0; m < m_total; ++m) {
        const int ix = m % grid_dim;
        const int iy = m / grid_dim;
        layout.ch_positions(m, 0) = (ix + 0.5) * w;
        layout.ch_positions(m, 1) = (iy + 0.5) * w;
    }
    layout.fc_position = Vec2{0.5 * region_side, 0.5 * region_side};
    return layout;
}

PointSample sample_ppp(const ClusterLayout& layout, const ArrayXd& intensity,
                       Rng& rng) {
    const int m_total = layout.clusters();
    if (intensity.size() != m_total) {
        throw std::invalid_argument(
            "sample_ppp: intensity list size must equal the cluster count");
    }
    for (int m = 0; m < m_total; ++m) {
        if (!(intensity[m] >= 0)) {
            throw std::invalid_argument("sample_ppp: intensities must be >= 0");
        }
    }
    PointSample sample;
    sample.clusters.resize(m_total);
    for (int m = 0; m < m_total; ++m) {
        const Rect cell = layout.cell(m);
        const std::int64_t count = rng.poisson(intensity[m] * cell.area());
        PointMatrix& pts = sample.clusters[m];
        pts.resize(count, 2);
        for (std::int64_t i = 0; i < count; ++i) {
            pts(i, 0) = rng.uniform(cell.x0, cell.x1);
            pts(i, 1) = rng.uniform(cell.y0, cell.y1);
        }
    }
    return sample;
}

PointSample sample_ppp(const ClusterLayout& layout, Scalar intensity, Rng& rng) {
    return sample_ppp(layout, ArrayXd::Constant(layout.clusters(), intensity),
                      rng);
}

int cluster_of(const Vec2& point, const ClusterLayout& layout) {
    const Scalar side = layout.region.side_length;
    if (!(point.x() >= 0 && point.x() <= side && point.y() >= 0 &&
          point.y() <= side)) {
        throw std::domain_error("cluster_of: point lies outside the region");
    }
    const Scalar w = layout.cell_side();
    const int k = layout.grid_dim;
    auto axis_index = [&](Scalar v) {
        int i = static_cast<int>(std::floor(v / w));
        if (i >= k) i = k - 1;
        // Edge tie-break: a coordinate exactly on an interior grid line
        // belongs to the lower cell.
        if (i > 0 && v == i * w) --i;
        return i;
    };
    return axis_index(point.y()) * k + axis_index(point.x());
}

Scalar circumscribed_radius(const ClusterLayout& layout) {
    return layout.cell_side() * std::sqrt(2.0) / 2.0;
}

}  // namespace clusterdd
