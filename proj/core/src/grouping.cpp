#include "groupsent/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "groupsent/rng.hpp"

namespace groupsent {

namespace {

// Distances below this are treated as a person sitting on its center.
constexpr double kCoincident = 1e-9;

bool is_unit(Vec2 v) noexcept { return std::abs(norm(v) - 1.0) <= 1e-6; }

std::vector<Vec2> member_means(std::span<const PersonPoint> points, std::span<const int> assignments,
                               std::vector<Vec2> centers) {
    std::vector<Vec2> sum(centers.size());
    std::vector<int> count(centers.size(), 0);
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto c = static_cast<std::size_t>(assignments[i]);
        sum[c] = sum[c] + points[i].position;
        ++count[c];
    }
    for (std::size_t c = 0; c < centers.size(); ++c)
        if (count[c] > 0) centers[c] = (1.0 / count[c]) * sum[c];
    return centers;
}

int nearest_center(const PersonPoint& p, std::span<const Vec2> centers) {
    int best = 0;
    double best_d = modified_distance(p, centers[0]);
    for (std::size_t c = 1; c < centers.size(); ++c) {
        const double d = modified_distance(p, centers[c]);
        if (d < best_d) {
            best = static_cast<int>(c);
            best_d = d;
        }
    }
    return best;
}

// Gives every empty cluster the farthest point from a cluster with >= 2 members.
void repair_empty_clusters(std::span<const PersonPoint> points, std::vector<int>& assignments,
                           std::vector<Vec2>& centers) {
    std::vector<int> count(centers.size(), 0);
    for (int a : assignments) ++count[static_cast<std::size_t>(a)];
    for (std::size_t c = 0; c < centers.size(); ++c) {
        if (count[c] > 0) continue;
        std::size_t donor = points.size();
        double donor_d = -1.0;
        for (std::size_t i = 0; i < points.size(); ++i) {
            const auto from = static_cast<std::size_t>(assignments[i]);
            if (count[from] < 2) continue;
            const double d = modified_distance(points[i], centers[from]);
            if (d > donor_d) {
                donor = i;
                donor_d = d;
            }
        }
        if (donor == points.size()) break;
        --count[static_cast<std::size_t>(assignments[donor])];
        assignments[donor] = static_cast<int>(c);
        count[c] = 1;
        centers[c] = points[donor].position;
    }
}

double total_modified_distance(std::span<const PersonPoint> points, std::span<const int> assignments,
                               std::span<const Vec2> centers) {
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i)
        total += modified_distance(points[i], centers[static_cast<std::size_t>(assignments[i])]);
    return total;
}

}  // namespace

void GroupingConfig::validate() const {
    if (!(k_face > 0.0)) throw InvalidInput("grouping k_face must be positive");
    if (!(lambda >= 0.0)) throw InvalidInput("grouping lambda must be >= 0");
    if (k_min < 1 || k_max < k_min) throw InvalidInput("grouping needs 1 <= k_min <= k_max");
    if (restarts < 1 || max_iters < 1) throw InvalidInput("grouping restarts and max_iters must be >= 1");
}

double estimate_depth(double face_height, double k_face) {
    if (!(face_height > 0.0)) throw InvalidInput("face height must be positive");
    return k_face / face_height;
}

Vec2 back_project(const Box& person, double depth, double image_width) {
    const double focal = image_width;
    return {(person.center_x() - image_width / 2.0) * depth / focal, depth};
}

double orientation_coefficient(Vec2 theta, Vec2 phi) {
    if (!is_unit(theta) || !is_unit(phi)) throw InvalidInput("orientation coefficient needs unit vectors");
    // Unit vectors in floating point are only unit to within an ulp; dividing
    // by sqrt(|theta|^2 |phi|^2) makes the cosine of phi = +-theta exactly +-1.
    const double cosine = dot(theta, phi) / std::sqrt(dot(theta, theta) * dot(phi, phi));
    return 1.0 - 0.5 * std::clamp(cosine, -1.0, 1.0);
}

Vec2 direction_to(Vec2 from, Vec2 to) noexcept {
    const Vec2 delta = to - from;
    const double d = norm(delta);
    if (d < kCoincident) return {};
    return (1.0 / d) * delta;
}

double modified_distance(const PersonPoint& p, Vec2 center) {
    const double d = norm(center - p.position);
    if (d < kCoincident) return 0.0;
    return orientation_coefficient(p.orientation, direction_to(p.position, center)) * d;
}

Clustering weighted_kmeans(std::span<const PersonPoint> points, int k, std::uint64_t seed, const GroupingConfig& cfg) {
    const int n = static_cast<int>(points.size());
    if (k < 1 || k > n)
        throw InvalidInput("weighted k-means needs 1 <= K <= N (K=" + std::to_string(k) + ", N=" + std::to_string(n) + ")");
    if (cfg.restarts < 1 || cfg.max_iters < 1) throw InvalidInput("grouping restarts and max_iters must be >= 1");

    Clustering best;
    best.total_distance = std::numeric_limits<double>::infinity();
    for (int r = 0; r < cfg.restarts; ++r) {
        SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(r)));
        std::vector<std::size_t> idx(points.size());
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::vector<Vec2> centers(static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < centers.size(); ++i) {
            const auto j = i + static_cast<std::size_t>(rng.bounded(points.size() - i));
            std::swap(idx[i], idx[j]);
            centers[i] = points[idx[i]].position;
        }

        std::vector<int> assignments;
        for (int iter = 0; iter < cfg.max_iters; ++iter) {
            std::vector<int> next(points.size());
            for (std::size_t i = 0; i < points.size(); ++i) next[i] = nearest_center(points[i], centers);
            repair_empty_clusters(points, next, centers);
            centers = member_means(points, next, std::move(centers));
            const bool converged = next == assignments;
            assignments = std::move(next);
            if (converged) break;
        }

        const double total = total_modified_distance(points, assignments, centers);
        if (total < best.total_distance) {
            best.assignments = std::move(assignments);
            best.centers = std::move(centers);
            best.total_distance = total;
        }
    }
    best.k = k;
    best.potential = potential(best, points, cfg.lambda);
    return best;
}

double potential(const Clustering& clustering, std::span<const PersonPoint> points, double lambda) {
    double facing = 0.0;
    double distance = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vec2 center = clustering.centers[static_cast<std::size_t>(clustering.assignments[i])];
        const double d = norm(center - points[i].position);
        if (d < kCoincident) {
            facing += 1.0;
            continue;
        }
        facing += dot(points[i].orientation, direction_to(points[i].position, center));
        distance += d;
    }
    return facing - lambda * distance;
}

int singleton_count(const Clustering& clustering) {
    std::vector<int> count(static_cast<std::size_t>(clustering.k), 0);
    for (int a : clustering.assignments) ++count[static_cast<std::size_t>(a)];
    return static_cast<int>(std::count(count.begin(), count.end(), 1));
}

Clustering select_k(std::span<const PersonPoint> points, const GroupingConfig& cfg, std::uint64_t seed) {
    cfg.validate();
    const int n = static_cast<int>(points.size());
    if (n < 1) throw InvalidInput("select_k needs at least one person");
    const int hi = std::min(cfg.k_max, n);
    const int lo = std::min(cfg.k_min, hi);
    const int cap = n / 3;

    std::vector<Clustering> candidates;
    for (int k = lo; k <= hi; ++k) candidates.push_back(weighted_kmeans(points, k, seed, cfg));

    const bool any_within_cap =
        std::any_of(candidates.begin(), candidates.end(), [&](const Clustering& c) { return singleton_count(c) <= cap; });
    const Clustering* best = nullptr;
    for (const auto& c : candidates) {
        if (any_within_cap && singleton_count(c) > cap) continue;
        if (!best || c.potential > best->potential) best = &c;
    }
    return *best;
}

std::array<double, kGroupFeatureLength> group_features(const Clustering& clustering,
                                                       std::span<const PersonPoint> points) {
    std::array<double, kGroupFeatureLength> f{};
    if (points.empty() || clustering.k < 1) return f;
    std::vector<int> size(static_cast<std::size_t>(clustering.k), 0);
    for (int a : clustering.assignments) ++size[static_cast<std::size_t>(a)];
    const double n = static_cast<double>(points.size());

    double distance = 0.0;
    double coherence = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const Vec2 center = clustering.centers[static_cast<std::size_t>(clustering.assignments[i])];
        const double d = norm(center - points[i].position);
        if (d < kCoincident) {
            coherence += 1.0;
        } else {
            distance += d;
            coherence += dot(points[i].orientation, direction_to(points[i].position, center));
        }
    }
    f[0] = clustering.k;
    f[1] = n / clustering.k;
    f[2] = *std::max_element(size.begin(), size.end());
    f[3] = static_cast<double>(std::count(size.begin(), size.end(), 1));
    f[4] = distance / n;
    f[5] = coherence / n;
    return f;
}

std::vector<PersonPoint> place_people(std::span<const PersonRecord> records, std::span<const Direction> orientations,
                                      double image_width, double k_face) {
    std::vector<PersonPoint> out;
    for (const auto& r : records) {
        if (!r.face) continue;
        const auto pi = static_cast<std::size_t>(r.person_index);
        if (pi >= orientations.size()) throw InvalidInput("missing orientation for person " + std::to_string(r.person_index));
        const double depth = estimate_depth(r.face->height(), k_face);
        out.push_back({back_project(r.person, depth, image_width), unit_vector(orientations[pi]), r.person_index});
    }
    return out;
}

}  // namespace groupsent
