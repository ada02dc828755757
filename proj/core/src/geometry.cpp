#include "groupsent/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>

namespace groupsent {

bool Box::valid() const noexcept {
    const bool finite = std::isfinite(x_min) && std::isfinite(y_min) && std::isfinite(x_max) &&
                        std::isfinite(y_max);
    return finite && x_min < x_max && y_min < y_max && x_min >= 0.0 && y_min >= 0.0;
}

Box make_box(double x_min, double y_min, double x_max, double y_max) {
    Box b{x_min, y_min, x_max, y_max};
    if (!b.valid()) throw InvalidInput("invalid box " + to_string(b));
    return b;
}

std::string to_string(const Box& b) {
    std::ostringstream os;
    os << '[' << b.x_min << ", " << b.y_min << ", " << b.x_max << ", " << b.y_max << ']';
    return os.str();
}

bool contains(const Box& outer, const Box& inner) noexcept {
    return inner.x_min >= outer.x_min && inner.y_min >= outer.y_min && inner.x_max <= outer.x_max &&
           inner.y_max <= outer.y_max;
}

double top_edge_center_distance(const Box& face, const Box& person) noexcept {
    const double dx = face.center_x() - person.center_x();
    const double dy = face.y_min - person.y_min;
    return std::hypot(dx, dy);
}

double area(const Box& b) noexcept { return b.width() * b.height(); }

double intersection_area(const Box& a, const Box& b) noexcept {
    const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
    const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
    if (w <= 0.0 || h <= 0.0) return 0.0;
    return w * h;
}

double iou(const Box& a, const Box& b) noexcept {
    const double inter = intersection_area(a, b);
    if (inter <= 0.0) return 0.0;
    return inter / (area(a) + area(b) - inter);
}

double norm(Vec2 a) noexcept { return std::hypot(a.x, a.z); }

namespace {

constexpr double kDiag = 0.70710678118654752440;

constexpr std::array<Vec2, kDirectionCount> kUnitVectors{{
    {0.0, -1.0},
    {kDiag, -kDiag},
    {1.0, 0.0},
    {kDiag, kDiag},
    {0.0, 1.0},
    {-kDiag, kDiag},
    {-1.0, 0.0},
    {-kDiag, -kDiag},
}};

constexpr std::array<std::string_view, kDirectionCount> kNames{"N", "NE", "E", "SE", "S", "SW", "W", "NW"};

}  // namespace

Vec2 unit_vector(Direction d) noexcept { return kUnitVectors[static_cast<std::size_t>(d)]; }

std::string_view direction_name(Direction d) noexcept { return kNames[static_cast<std::size_t>(d)]; }

Direction direction_from_index(int index) {
    if (index < 0 || index >= kDirectionCount)
        throw InvalidInput("direction index out of range: " + std::to_string(index));
    return static_cast<Direction>(index);
}

std::optional<Direction> parse_direction(std::string_view name) noexcept {
    for (std::size_t i = 0; i < kNames.size(); ++i)
        if (kNames[i] == name) return static_cast<Direction>(i);
    return std::nullopt;
}

}  // namespace groupsent
