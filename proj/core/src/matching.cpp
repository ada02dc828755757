#include "groupsent/matching.hpp"

#include <algorithm>
#include <numeric>

namespace groupsent {

std::vector<int> dedupe_face_indices(std::span<const Box> faces, double iou_threshold) {
    if (!(iou_threshold >= 0.0 && iou_threshold <= 1.0)) throw InvalidInput("iou threshold must be in [0,1]");
    std::vector<int> order(faces.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return area(faces[static_cast<std::size_t>(a)]) > area(faces[static_cast<std::size_t>(b)]); });
    std::vector<int> kept;
    for (int i : order) {
        const Box& f = faces[static_cast<std::size_t>(i)];
        const bool duplicate = std::any_of(kept.begin(), kept.end(), [&](int k) {
            return iou(f, faces[static_cast<std::size_t>(k)]) >= iou_threshold;
        });
        if (!duplicate) kept.push_back(i);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

std::vector<Box> dedupe_faces(std::span<const Box> faces, double iou_threshold) {
    std::vector<Box> out;
    for (int i : dedupe_face_indices(faces, iou_threshold)) out.push_back(faces[static_cast<std::size_t>(i)]);
    return out;
}

std::vector<std::optional<int>> match_faces(std::span<const Box> faces, std::span<const Box> persons) {
    std::vector<std::optional<int>> result(faces.size());
    std::vector<bool> person_taken(persons.size(), false);
    for (std::size_t f = 0; f < faces.size(); ++f) {
        std::optional<int> best;
        double best_distance = 0.0;
        for (std::size_t p = 0; p < persons.size(); ++p) {
            if (person_taken[p] || !contains(persons[p], faces[f])) continue;
            const double d = top_edge_center_distance(faces[f], persons[p]);
            if (!best || d < best_distance) {
                best = static_cast<int>(p);
                best_distance = d;
            }
        }
        if (best) {
            person_taken[static_cast<std::size_t>(*best)] = true;
            result[f] = best;
        }
    }
    return result;
}

std::vector<std::optional<int>> match_torsos(std::span<const Box> torsos, std::span<const Box> persons,
                                             std::span<const bool> taken) {
    if (!taken.empty() && taken.size() != torsos.size())
        throw InvalidInput("torso availability mask must match the torso count");
    std::vector<bool> torso_taken(torsos.size(), false);
    for (std::size_t t = 0; t < taken.size(); ++t) torso_taken[t] = taken[t];

    std::vector<int> order(persons.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int a, int b) { return area(persons[static_cast<std::size_t>(a)]) < area(persons[static_cast<std::size_t>(b)]); });

    std::vector<std::optional<int>> result(persons.size());
    for (int p : order) {
        const Box& person = persons[static_cast<std::size_t>(p)];
        std::optional<int> best;
        double best_area = 0.0;
        for (std::size_t t = 0; t < torsos.size(); ++t) {
            if (torso_taken[t] || !contains(person, torsos[t])) continue;
            const double a = area(torsos[t]);
            if (!best || a > best_area) {
                best = static_cast<int>(t);
                best_area = a;
            }
        }
        if (best) {
            torso_taken[static_cast<std::size_t>(*best)] = true;
            result[static_cast<std::size_t>(p)] = best;
        }
    }
    return result;
}

std::vector<PersonRecord> build_person_records(const ImageAnnotation& annotation, double iou_threshold) {
    const auto kept = dedupe_face_indices(annotation.faces, iou_threshold);
    std::vector<Box> faces;
    for (int i : kept) faces.push_back(annotation.faces[static_cast<std::size_t>(i)]);

    const auto face_to_person = match_faces(faces, annotation.persons);
    const auto person_to_torso = match_torsos(annotation.torsos, annotation.persons);

    std::vector<std::optional<int>> person_to_face(annotation.persons.size());
    for (std::size_t f = 0; f < face_to_person.size(); ++f)
        if (face_to_person[f]) person_to_face[static_cast<std::size_t>(*face_to_person[f])] = kept[f];

    std::vector<PersonRecord> records;
    for (std::size_t p = 0; p < annotation.persons.size(); ++p) {
        if (!person_to_face[p] && !person_to_torso[p]) continue;
        PersonRecord r;
        r.person = annotation.persons[p];
        r.person_index = static_cast<int>(p);
        if (person_to_face[p]) {
            r.face_index = person_to_face[p];
            r.face = annotation.faces[static_cast<std::size_t>(*r.face_index)];
        }
        if (person_to_torso[p]) {
            r.torso_index = person_to_torso[p];
            r.torso = annotation.torsos[static_cast<std::size_t>(*r.torso_index)];
        }
        records.push_back(r);
    }
    return records;
}

}  // namespace groupsent
