#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace groupsent {

/// Thrown for any malformed input: bad boxes, bad files, bad configuration.
class InvalidInput : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Closed axis-aligned rectangle in pixel coordinates (origin top-left, y down).
struct Box {
    double x_min = 0.0;
    double y_min = 0.0;
    double x_max = 0.0;
    double y_max = 0.0;

    [[nodiscard]] double width() const noexcept { return x_max - x_min; }
    [[nodiscard]] double height() const noexcept { return y_max - y_min; }
    [[nodiscard]] double center_x() const noexcept { return 0.5 * (x_min + x_max); }
    [[nodiscard]] double center_y() const noexcept { return 0.5 * (y_min + y_max); }

    [[nodiscard]] bool valid() const noexcept;

    friend bool operator==(const Box&, const Box&) = default;
};

/// Builds a box and throws InvalidInput if it breaks the box invariants.
Box make_box(double x_min, double y_min, double x_max, double y_max);

std::string to_string(const Box& b);

/// True iff `inner` lies inside `outer`; touching edges count as inside.
bool contains(const Box& outer, const Box& inner) noexcept;

/// Distance between the midpoints of the two top edges.
double top_edge_center_distance(const Box& face, const Box& person) noexcept;

double area(const Box& b) noexcept;
double intersection_area(const Box& a, const Box& b) noexcept;
double iou(const Box& a, const Box& b) noexcept;

/// The eight ground-plane facing directions, in tie-break order.
enum class Direction : int { N = 0, NE, E, SE, S, SW, W, NW };

inline constexpr int kDirectionCount = 8;

struct Vec2 {
    double x = 0.0;
    double z = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) noexcept { return {a.x + b.x, a.z + b.z}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) noexcept { return {a.x - b.x, a.z - b.z}; }
    friend Vec2 operator*(double s, Vec2 a) noexcept { return {s * a.x, s * a.z}; }
    friend Vec2 operator-(Vec2 a) noexcept { return {-a.x, -a.z}; }
    friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline double dot(Vec2 a, Vec2 b) noexcept { return a.x * b.x + a.z * b.z; }
double norm(Vec2 a) noexcept;

/// Ground-plane unit vector (lateral x, depth z): N=(0,-1), E=(1,0), S=(0,1), W=(-1,0).
Vec2 unit_vector(Direction d) noexcept;

std::string_view direction_name(Direction d) noexcept;
Direction direction_from_index(int index);
std::optional<Direction> parse_direction(std::string_view name) noexcept;

}  // namespace groupsent
