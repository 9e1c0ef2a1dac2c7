#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace crnet {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Point a, Point b)
{
    return std::hypot(a.x - b.x, a.y - b.y);
}

inline double distance_sq(Point a, Point b)
{
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return dx * dx + dy * dy;
}

struct Rect {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    double width() const { return x_max - x_min; }
    double height() const { return y_max - y_min; }
};

/// Corner-anchored, row-major lattice of test points covering a rectangle.
/// Point k sits at column k % nx, row k / nx, starting at (x_min, y_min).
class Lattice {
public:
    Lattice() = default;
    Lattice(Rect area, double resolution_m);

    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    std::size_t size() const { return nx_ * ny_; }
    double resolution() const { return resolution_; }
    const Rect& area() const { return area_; }

    Point point(std::size_t k) const
    {
        return {area_.x_min + static_cast<double>(k % nx_) * resolution_,
                area_.y_min + static_cast<double>(k / nx_) * resolution_};
    }

    std::vector<Point> points() const;

private:
    Rect area_{};
    double resolution_ = 1.0;
    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
};

} // namespace crnet
