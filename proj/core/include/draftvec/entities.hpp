#pragma once

#include "draftvec/detection.hpp"
#include "draftvec/hough.hpp"
#include "draftvec/text.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace draftvec {

/// Everything recovered from one drawing, in full-image pixel coordinates.
struct DrawingEntitySet {
    std::vector<LineSegment> lines;
    std::vector<Circle> circles;
    std::vector<DetectionBox> dimension_lines;
    std::vector<DetectionBox> lights;
    std::vector<TextRegion> texts;
    int image_width = 0;
    int image_height = 0;
    std::string source;

    friend bool operator==(const DrawingEntitySet&, const DrawingEntitySet&) = default;
};

enum class EntityKind { Circles, Lines, DimensionLines, Lights, Text };

inline constexpr EntityKind kAllEntityKinds[] = {EntityKind::Circles, EntityKind::Lines,
                                                 EntityKind::DimensionLines, EntityKind::Lights,
                                                 EntityKind::Text};

/// "circles.csv", "lines.csv", "dimlines.csv", "lights.csv", "text.csv".
const char* csv_file_name(EntityKind kind);

/// Contents of one CSV file: header plus one row per entity, LF endings.
std::string format_csv(const DrawingEntitySet& set, EntityKind kind);

/// Writes a single entity file and returns its path.
std::filesystem::path write_entity_csv(const DrawingEntitySet& set, EntityKind kind,
                                       const std::filesystem::path& out_dir);

/// Writes all five CSV files (in kAllEntityKinds order).
std::vector<std::filesystem::path> to_csv(const DrawingEntitySet& set, const std::filesystem::path& out_dir);

/// Parses one CSV file's text into `set`. `file` only feeds error messages.
void parse_csv(const std::string& content, EntityKind kind, DrawingEntitySet& set, const std::string& file);

/// Reads whatever CSV files exist in `dir`, plus manifest.json when present
/// for the image size and source path.
DrawingEntitySet from_csv(const std::filesystem::path& dir);

/// manifest.json: source, image size, per-entity counts, config hash.
std::filesystem::path write_manifest(const DrawingEntitySet& set, const std::filesystem::path& out_dir,
                                     const std::string& config_hash = {});
std::string format_manifest(const DrawingEntitySet& set, const std::string& config_hash = {});

/// JSON form of a whole set (used by ground-truth files).
std::string entity_set_to_json(const DrawingEntitySet& set);
DrawingEntitySet entity_set_from_json(const std::string& json_text);

/// Writes bytes to a file, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace draftvec
