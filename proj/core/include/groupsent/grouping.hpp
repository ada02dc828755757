#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "groupsent/geometry.hpp"
#include "groupsent/matching.hpp"

namespace groupsent {

/// A person placed on the ground plane (lateral x, depth z) with a facing direction.
struct PersonPoint {
    Vec2 position;
    Vec2 orientation;  // unit length
    int person_index = 0;
};

struct GroupingConfig {
    double k_face = 100.0;  // depth = k_face / face height
    double lambda = 0.1;    // distance weight in the potential
    int k_min = 1;
    int k_max = 10;  // effective upper bound is min(k_max, N)
    int restarts = 5;
    int max_iters = 100;

    void validate() const;
};

/// Cluster assignment of a set of PersonPoints.
struct Clustering {
    std::vector<int> assignments;
    std::vector<Vec2> centers;
    int k = 0;
    double potential = 0.0;
    /// Sum of modified distances to assigned centers.
    double total_distance = 0.0;
};

/// d = k_face / face_height.
double estimate_depth(double face_height, double k_face);

/// Pinhole back-projection with focal length = image width and the principal
/// point at the image centre; returns the ground-plane position (x, depth).
Vec2 back_project(const Box& person, double depth, double image_width);

/// c = 1 - 0.5 (theta . phi): 0.5 facing the centre, 1.5 facing away.
double orientation_coefficient(Vec2 theta, Vec2 phi);

/// Unit vector from `from` to `to`, or nullopt-like {0,0} when they coincide.
Vec2 direction_to(Vec2 from, Vec2 to) noexcept;

/// c(theta, phi) * |position - center|, zero when coincident.
double modified_distance(const PersonPoint& p, Vec2 center);

/// Lloyd iterations under the modified distance, best of cfg.restarts.
///
/// Each restart r seeds K centers from K distinct person positions drawn with
/// SplitMix64(derive_seed(seed, K, r)), then alternates assignment (ties to the
/// lower cluster id) and unweighted-mean center updates until the assignment
/// stops changing or max_iters is hit. An emptied cluster takes over the point
/// with the largest modified distance among clusters that can spare one.
Clustering weighted_kmeans(std::span<const PersonPoint> points, int k, std::uint64_t seed,
                           const GroupingConfig& cfg = {});

/// Sum of theta.phi minus lambda times the sum of member-to-center distances.
/// A person sitting on its center contributes 1 and 0.
double potential(const Clustering& clustering, std::span<const PersonPoint> points, double lambda);

/// Number of clusters with exactly one member.
int singleton_count(const Clustering& clustering);

/// Sweeps K over [k_min, min(k_max, N)], drops candidates with more than
/// floor(N/3) singletons (unless that drops all of them), and keeps the
/// highest potential; ties go to the smaller K.
Clustering select_k(std::span<const PersonPoint> points, const GroupingConfig& cfg, std::uint64_t seed);

inline constexpr std::size_t kGroupFeatureLength = 6;

/// [K, mean cluster size, max cluster size, singletons, mean member-center
/// distance, mean theta.phi]. All zero when there are no points.
std::array<double, kGroupFeatureLength> group_features(const Clustering& clustering,
                                                       std::span<const PersonPoint> points);

/// Ground-plane points for every record that has a face; `orientations` is
/// indexed by person_index.
std::vector<PersonPoint> place_people(std::span<const PersonRecord> records, std::span<const Direction> orientations,
                                      double image_width, double k_face);

}  // namespace groupsent
