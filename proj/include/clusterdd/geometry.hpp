#pragma once

#include <vector>

#include "clusterdd/rng.hpp"
#include "clusterdd/types.hpp"

namespace clusterdd {

/// Square region of interest, axis-aligned with the origin at one corner.
struct Region {
    Scalar side_length = 0;
};

/// Equal square cells on a k x k grid partitioning the region, one cluster
/// head at each cell centroid and the fusion center at the region centroid.
struct ClusterLayout {
    Region region;
    int grid_dim = 0;
    PointMatrix ch_positions;  // M x 2, row m = centroid of cell m
    Vec2 fc_position = Vec2::Zero();

    int clusters() const { return grid_dim * grid_dim; }
    Scalar cell_side() const { return region.side_length / grid_dim; }
    Rect cell(int m) const;
};

/// Builds and validates a layout. Cells are indexed row-major from the
/// lower-left corner: m = iy * k + ix.
ClusterLayout make_layout(Scalar region_side, int grid_dim);

/// One realization of the deployment: node coordinates grouped by cluster.
struct PointSample {
    std::vector<PointMatrix> clusters;

    Index total() const {
        Index n = 0;
        for (const auto& c : clusters) n += c.rows();
        return n;
    }
};

/// Draws each cluster independently: a Poisson count with mean
/// intensity[m] * cell area, then positions i.i.d. uniform over the cell.
/// Zero intensity yields an empty cluster.
PointSample sample_ppp(const ClusterLayout& layout, const ArrayXd& intensity,
                       Rng& rng);

/// Convenience overload for a homogeneous deployment.
PointSample sample_ppp(const ClusterLayout& layout, Scalar intensity, Rng& rng);

/// Index of the cell containing the point. Points on shared cell edges go to
/// the lowest-index candidate cell, so assignment is deterministic.
/// Throws std::domain_error for points outside the region.
int cluster_of(const Vec2& point, const ClusterLayout& layout);

/// Radius of the disk circumscribing one cell: the CH-to-corner distance,
/// (cell side) * sqrt(2) / 2. Cells are congruent, so a single value.
Scalar circumscribed_radius(const ClusterLayout& layout);

}  // namespace clusterdd
