#pragma once

#include <optional>
#include <span>
#include <vector>

#include "groupsent/annotation.hpp"

namespace groupsent {

inline constexpr double kDefaultFaceIouThreshold = 0.3;

/// One person box with the face and torso the greedy matcher gave it.
struct PersonRecord {
    Box person;
    std::optional<Box> face;
    std::optional<Box> torso;
    int person_index = 0;
    /// Index into the annotation's (pre-dedupe) face list.
    std::optional<int> face_index;
    std::optional<int> torso_index;

    friend bool operator==(const PersonRecord&, const PersonRecord&) = default;
};

/// Indices of faces that survive duplicate removal, in ascending (input) order.
///
/// Faces are visited by area, largest first (stable on ties); a face is kept
/// iff its IoU with every face kept so far is below `iou_threshold`.
std::vector<int> dedupe_face_indices(std::span<const Box> faces, double iou_threshold = kDefaultFaceIouThreshold);
std::vector<Box> dedupe_faces(std::span<const Box> faces, double iou_threshold = kDefaultFaceIouThreshold);

/// For each face (input order), the still-free person that contains it and is
/// nearest by top-edge-center distance; ties go to the lower person index.
std::vector<std::optional<int>> match_faces(std::span<const Box> faces, std::span<const Box> persons);

/// For each person, visited smallest area first, the largest still-free torso
/// it contains. `taken` marks torsos that are unavailable from the start
/// (empty means none). Result is indexed by person.
std::vector<std::optional<int>> match_torsos(std::span<const Box> torsos, std::span<const Box> persons,
                                             std::span<const bool> taken = {});

/// Dedupe faces, match faces then torsos, and keep persons that got either.
std::vector<PersonRecord> build_person_records(const ImageAnnotation& annotation,
                                               double iou_threshold = kDefaultFaceIouThreshold);

}  // namespace groupsent
