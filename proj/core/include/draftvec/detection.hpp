#pragma once

#include "draftvec/raster.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace draftvec {

/// Labeled box in pixel corner coordinates; (x2, y2) is exclusive, so the
/// full frame is (0, 0, W, H).
struct DetectionBox {
    std::string class_label;
    int x1 = 0;
    int y1 = 0;
    int x2 = 0;
    int y2 = 0;
    double confidence = 1.0;

    int width() const noexcept { return x2 - x1; }
    int height() const noexcept { return y2 - y1; }
    long long area() const noexcept { return static_cast<long long>(width()) * height(); }

    // Confidence does not survive CSV round trips, so it is not part of identity.
    friend bool operator==(const DetectionBox& a, const DetectionBox& b) {
        return a.class_label == b.class_label && a.x1 == b.x1 && a.y1 == b.y1 && a.x2 == b.x2 && a.y2 == b.y2;
    }
};

/// One line of a YOLO TXT file, coordinates normalized to the image size.
struct YoloRecord {
    int class_id = 0;
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;
    std::optional<double> confidence;
};

using ClassMap = std::map<int, std::string>;

namespace class_maps {
ClassMap roi();       // {0: "drawing"}
ClassMap lights();    // {0: "PL", 1: "CS", 2: "CL", 3: "DL"}
ClassMap dimlines();  // {0: "dimline"}
ClassMap text();      // {0: "text"}
}  // namespace class_maps

/// Reads a JSON object such as {"0": "PL", "1": "CS"}.
ClassMap load_class_map(const std::filesystem::path& path);
ClassMap parse_class_map(const std::string& json_text);

/// Normalized center/size to pixel corners. Corners are rounded half away
/// from zero; when that rounding pushes the pixel width more than half a
/// pixel off w*img_w, the corner with the larger rounding error moves one
/// pixel back. Corners are clamped to the frame.
DetectionBox put_box(const YoloRecord& rec, int img_w, int img_h, const ClassMap& class_map);

/// Parses "class_id cx cy w h [conf]". `line_number` only feeds error text.
YoloRecord parse_yolo_line(const std::string& line, std::size_t line_number);

std::vector<DetectionBox> load_yolo_txt(const std::filesystem::path& path, int img_w, int img_h,
                                        const ClassMap& class_map);

/// Serializes boxes back to YOLO TXT lines (used to write sidecars).
std::string to_yolo_txt(const std::vector<DetectionBox>& boxes, int img_w, int img_h, const ClassMap& class_map);

inline constexpr int kInkThreshold = 128;
inline constexpr int kRoiMargin = 5;

/// Drawing region. With a sidecar: its highest-confidence "drawing" box
/// (earliest wins ties). Without one, or when the sidecar holds no drawing
/// box: ink bounding box grown by kRoiMargin, or the full frame for a blank page.
DetectionBox detect_roi(const RasterImage& img, const std::optional<std::filesystem::path>& sidecar,
                        const ClassMap& class_map = class_maps::roi());

struct Offset {
    int x = 0;
    int y = 0;
    friend bool operator==(const Offset&, const Offset&) = default;
};

std::pair<RasterImage, Offset> crop_roi(const RasterImage& img, const DetectionBox& box);

std::vector<DetectionBox> detect_ornaments(const std::filesystem::path& sidecar, int img_w, int img_h,
                                           const ClassMap& class_map = class_maps::lights());

std::vector<DetectionBox> detect_dimension_lines(const std::filesystem::path& sidecar, int img_w, int img_h,
                                                 const ClassMap& class_map = class_maps::dimlines());

/// Intersection over union with exclusive max corners.
double iou(const DetectionBox& a, const DetectionBox& b);

}  // namespace draftvec
