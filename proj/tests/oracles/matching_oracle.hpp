#pragma once

// Step-by-step re-derivation of the greedy matcher, kept independent of
// core/src/matching.cpp: every step materializes the full candidate list,
// filters it, and picks the winner by an explicit lexicographic key.

#include <algorithm>
#include <cmath>
#include <optional>
#include <tuple>
#include <vector>

#include "groupsent/geometry.hpp"

namespace oracle {

using groupsent::Box;

inline bool inside(const Box& outer, const Box& inner) {
    return outer.x_min <= inner.x_min && outer.y_min <= inner.y_min && inner.x_max <= outer.x_max &&
           inner.y_max <= outer.y_max;
}

inline double box_area(const Box& b) { return (b.x_max - b.x_min) * (b.y_max - b.y_min); }

inline double overlap(const Box& a, const Box& b) {
    const double ix = std::max(0.0, std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min));
    const double iy = std::max(0.0, std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min));
    const double inter = ix * iy;
    if (inter == 0.0) return 0.0;
    return inter / (box_area(a) + box_area(b) - inter);
}

inline double top_distance(const Box& f, const Box& p) {
    const double fx = (f.x_min + f.x_max) / 2.0;
    const double px = (p.x_min + p.x_max) / 2.0;
    return std::sqrt((fx - px) * (fx - px) + (f.y_min - p.y_min) * (f.y_min - p.y_min));
}

inline std::vector<int> dedupe(const std::vector<Box>& faces, double threshold) {
    // Visit order: (-area, index) ascending.
    std::vector<std::tuple<double, int>> keys;
    for (int i = 0; i < static_cast<int>(faces.size()); ++i) keys.emplace_back(-box_area(faces[i]), i);
    std::sort(keys.begin(), keys.end());
    std::vector<int> kept;
    for (auto [neg_area, i] : keys) {
        bool ok = true;
        for (int k : kept) ok = ok && overlap(faces[i], faces[k]) < threshold;
        if (ok) kept.push_back(i);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

inline std::vector<std::optional<int>> faces_to_persons(const std::vector<Box>& faces, const std::vector<Box>& persons) {
    std::vector<std::optional<int>> out(faces.size());
    std::vector<int> remaining;
    for (int p = 0; p < static_cast<int>(persons.size()); ++p) remaining.push_back(p);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        std::vector<std::tuple<double, int>> candidates;
        for (int p : remaining)
            if (inside(persons[p], faces[f])) candidates.emplace_back(top_distance(faces[f], persons[p]), p);
        if (candidates.empty()) continue;
        const auto winner = *std::min_element(candidates.begin(), candidates.end());
        out[f] = std::get<1>(winner);
        remaining.erase(std::find(remaining.begin(), remaining.end(), std::get<1>(winner)));
    }
    return out;
}

inline std::vector<std::optional<int>> persons_to_torsos(const std::vector<Box>& torsos, const std::vector<Box>& persons) {
    std::vector<std::tuple<double, int>> order;
    for (int p = 0; p < static_cast<int>(persons.size()); ++p) order.emplace_back(box_area(persons[p]), p);
    std::sort(order.begin(), order.end());
    std::vector<int> remaining;
    for (int t = 0; t < static_cast<int>(torsos.size()); ++t) remaining.push_back(t);
    std::vector<std::optional<int>> out(persons.size());
    for (auto [a, p] : order) {
        std::vector<std::tuple<double, int>> candidates;  // (-area, index): largest area, then lowest index
        for (int t : remaining)
            if (inside(persons[p], torsos[t])) candidates.emplace_back(-box_area(torsos[t]), t);
        if (candidates.empty()) continue;
        const auto winner = *std::min_element(candidates.begin(), candidates.end());
        out[p] = std::get<1>(winner);
        remaining.erase(std::find(remaining.begin(), remaining.end(), std::get<1>(winner)));
    }
    return out;
}

}  // namespace oracle
