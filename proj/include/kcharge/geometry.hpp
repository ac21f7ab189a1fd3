#pragma once

#include <cmath>

namespace kcharge {

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Point& a, const Point& b) = default;
};

inline double distance(const Point& a, const Point& b) {
    const double dx = a.x - b.x;
    const double dy = a.y - b.y;
    return std::sqrt(dx * dx + dy * dy);
}

// Disk membership test, boundary inclusive. Squared comparison keeps the
// boundary case exact when coordinates are exact.
inline bool within_range(const Point& center, const Point& q, double radius) {
    const double dx = center.x - q.x;
    const double dy = center.y - q.y;
    return dx * dx + dy * dy <= radius * radius;
}

}  // namespace kcharge
