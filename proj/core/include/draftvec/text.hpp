#pragma once

#include "draftvec/detection.hpp"
#include "draftvec/raster.hpp"

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace draftvec {

struct TextRegion {
    DetectionBox box;
    std::string text;
    double confidence = 0.0;

    friend bool operator==(const TextRegion& a, const TextRegion& b) {
        return a.box == b.box && a.text == b.text;
    }
};

/// Size gates for the connected-component text detector.
struct TextDetectParams {
    int min_height = 4;
    int max_height = 40;
    double min_aspect = 0.1;
    double max_aspect = 20.0;
};

/// Sidecar boxes when given, otherwise ink components (intensity < 128,
/// 8-connected) filtered by TextDetectParams and merged left-to-right when
/// they share rows and the horizontal gap is at most the taller height.
/// Built-in results come back in reading order.
std::vector<DetectionBox> detect_text_regions(const RasterImage& img,
                                              const std::optional<std::filesystem::path>& sidecar,
                                              const TextDetectParams& params = {},
                                              const ClassMap& class_map = class_maps::text());

struct OcrResult {
    std::string text;
    double confidence = 0.0;
    bool ok = true;
    std::string error;
};

class OcrBackend {
public:
    virtual ~OcrBackend() = default;
    /// `region_index` is the region's position in detection order.
    virtual OcrResult recognize(const RasterImage& crop, std::size_t region_index) = 0;
};

/// Runs `<command> <crop.pgm>` and reads the text from standard output.
class CommandOcrBackend final : public OcrBackend {
public:
    explicit CommandOcrBackend(std::string command, std::filesystem::path scratch_dir = {});
    OcrResult recognize(const RasterImage& crop, std::size_t region_index) override;

private:
    std::string command_;
    std::filesystem::path scratch_dir_;
};

/// Deterministic backend: region index -> string, loaded from a JSON object
/// {"0": "PL", "1": "2400 mm"}. Unlisted regions are reported as failures.
class FixtureOcrBackend final : public OcrBackend {
public:
    explicit FixtureOcrBackend(std::map<std::size_t, std::string> answers);
    static FixtureOcrBackend from_file(const std::filesystem::path& path);
    OcrResult recognize(const RasterImage& crop, std::size_t region_index) override;

private:
    std::map<std::size_t, std::string> answers_;
};

/// Trims surrounding whitespace from the backend's answer. A failing
/// backend yields ("", 0.0) and sets `warning`.
OcrResult recognize_text(const RasterImage& crop, OcrBackend& backend, std::size_t region_index,
                         std::string* warning = nullptr);

std::string trim(const std::string& s);

/// Edit distance over Unicode code points (UTF-8 input).
std::size_t levenshtein(const std::string& a, const std::string& b);

/// 1 - levenshtein / max length, clamped to [0, 1]. Throws EmptyTruth.
double character_accuracy(const std::string& recognized, const std::string& truth);

}  // namespace draftvec
