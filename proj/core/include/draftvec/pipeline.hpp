#pragma once

#include "draftvec/canny.hpp"
#include "draftvec/detection.hpp"
#include "draftvec/entities.hpp"
#include "draftvec/hough.hpp"
#include "draftvec/text.hpp"

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace draftvec {

/// Sidecar paths may contain "{stem}", replaced by the input file's stem so
/// one flag can serve a whole batch.
struct SidecarPaths {
    std::optional<std::string> roi;
    std::optional<std::string> lights;
    std::optional<std::string> dimlines;
    std::optional<std::string> text;
};

struct OcrSpec {
    std::optional<std::string> command;
    std::optional<std::string> fixture;
};

struct PipelineConfig {
    CannyParams canny;
    HoughParams hough;
    TextDetectParams text;
    SidecarPaths sidecars;
    ClassMap roi_classes = class_maps::roi();
    ClassMap light_classes = class_maps::lights();
    ClassMap dimline_classes = class_maps::dimlines();
    ClassMap text_classes = class_maps::text();
    OcrSpec ocr;
    std::filesystem::path output_dir = "out";
    std::optional<std::filesystem::path> dump_stages;
    std::uint64_t seed = 0;
    /// Internal worker threads; never changes results.
    int workers = 1;

    void validate() const;
};

/// Overlays the keys present in a JSON document onto `cfg`. Unknown keys are
/// rejected with ConfigInvalid. Relative sidecar and fixture paths are taken
/// relative to `base_dir` when it is given.
void apply_config_json(PipelineConfig& cfg, const std::string& json_text,
                       const std::filesystem::path& base_dir = {});
/// Defaults overlaid with a config file; relative paths resolve against the
/// file's directory.
PipelineConfig load_config(const std::filesystem::path& path);

/// Canonical JSON of every setting that can change output bytes (paths for
/// output, debug dumps and worker count are excluded).
std::string config_to_json(const PipelineConfig& cfg);

/// 16 hex digits of FNV-1a over config_to_json.
std::string config_hash(const PipelineConfig& cfg);

std::string resolve_template(const std::string& path_template, const std::string& stem);

struct PipelineResult {
    DrawingEntitySet entities;
    std::vector<std::string> warnings;
    std::filesystem::path output_dir;
};

/// Extraction on an in-memory image; writes nothing unless `stage_dir` is
/// set. `before_ocr` runs once detections are final and before recognition.
PipelineResult process_image(const RasterImage& img, const PipelineConfig& cfg, const std::string& source,
                             const std::string& stem, OcrBackend* backend = nullptr,
                             const std::optional<std::filesystem::path>& stage_dir = std::nullopt,
                             const std::function<void(const DrawingEntitySet&)>& before_ocr = {});

/// Full conversion of one image into <output_dir>/<stem>/: the five CSV
/// files, manifest.json, out.svg and out.dxf. Throws InputUnreadable,
/// OutputUnwritable or ConfigInvalid.
PipelineResult run_pipeline(const std::filesystem::path& input, const PipelineConfig& cfg);

/// OCR backend named by the config, or nullptr when none is configured.
std::unique_ptr<OcrBackend> make_ocr_backend(const OcrSpec& spec, const std::string& stem);

}  // namespace draftvec
