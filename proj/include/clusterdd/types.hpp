#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace clusterdd {

using Scalar = double;

using Vec2 = Eigen::Vector2d;
using ArrayXd = Eigen::ArrayXd;
using VectorXd = Eigen::VectorXd;
using MatrixXd = Eigen::MatrixXd;
using Index = Eigen::Index;

/// Point set as rows of (x, y).
using PointMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, 2>;

/// Per-cluster quantity indexed by hypothesis in the second dimension.
using ArrayX2d = Eigen::Array<Scalar, Eigen::Dynamic, 2>;

/// One binary local decision per point.
using DecisionArray = Eigen::Array<std::uint8_t, Eigen::Dynamic, 1>;

enum class Hypothesis : int { H0 = 0, H1 = 1 };

/// Axis-aligned rectangle [x0, x1] x [y0, y1].
struct Rect {
    Scalar x0 = 0;
    Scalar y0 = 0;
    Scalar x1 = 0;
    Scalar y1 = 0;

    Scalar width() const { return x1 - x0; }
    Scalar height() const { return y1 - y0; }
    Scalar area() const { return width() * height(); }
    Vec2 center() const { return {0.5 * (x0 + x1), 0.5 * (y0 + y1)}; }
    bool contains(const Vec2& p) const {
        return p.x() >= x0 && p.x() <= x1 && p.y() >= y0 && p.y() <= y1;
    }
};

}  // namespace clusterdd
