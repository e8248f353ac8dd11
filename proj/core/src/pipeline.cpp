#include "draftvec/pipeline.hpp"

#include "draftvec/error.hpp"
#include "draftvec/vector_out.hpp"

#include <filesystem>

namespace draftvec {

std::unique_ptr<OcrBackend> make_ocr_backend(const OcrSpec& spec, const std::string& stem) {
    if (spec.fixture) {
        return std::make_unique<FixtureOcrBackend>(
            FixtureOcrBackend::from_file(resolve_template(*spec.fixture, stem)));
    }
    if (spec.command) {
        return std::make_unique<CommandOcrBackend>(*spec.command);
    }
    return nullptr;
}

namespace {

template <typename Fn>
std::vector<DetectionBox> optional_sidecar(const std::optional<std::string>& path_template, const std::string& stem,
                                           const char* what, std::vector<std::string>& warnings, Fn&& load) {
    if (!path_template) {
        warnings.push_back(std::string("no ") + what + " detections supplied; " + what + " list is empty");
        return {};
    }
    const auto path = resolve_template(*path_template, stem);
    try {
        return load(std::filesystem::path(path));
    } catch (const Error& e) {
        if (e.code() != ErrorCode::MissingSidecar) {
            throw;
        }
        warnings.push_back(std::string(what) + " sidecar not found: " + path);
        return {};
    }
}

void shift(DetectionBox& b, Offset off) {
    b.x1 += off.x;
    b.x2 += off.x;
    b.y1 += off.y;
    b.y2 += off.y;
}

}  // namespace

PipelineResult process_image(const RasterImage& img, const PipelineConfig& cfg, const std::string& source,
                             const std::string& stem, OcrBackend* backend,
                             const std::optional<std::filesystem::path>& stage_dir,
                             const std::function<void(const DrawingEntitySet&)>& before_ocr) {
    cfg.validate();
    PipelineResult result;
    auto& set = result.entities;
    set.image_width = img.width();
    set.image_height = img.height();
    set.source = source;

    // Drawing region and the edge map the Hough stages run on.
    std::optional<std::filesystem::path> roi_sidecar;
    if (cfg.sidecars.roi) {
        roi_sidecar = resolve_template(*cfg.sidecars.roi, stem);
    }
    const auto roi = detect_roi(img, roi_sidecar, cfg.roi_classes);
    auto [crop, offset] = crop_roi(img, roi);
    HoughParams hough = cfg.hough;
    hough.workers = cfg.workers;
    const auto stages = canny_stages(crop, cfg.canny, cfg.workers);

    for (auto seg : detect_lines(stages.edges, hough)) {
        seg.x1 += offset.x;
        seg.x2 += offset.x;
        seg.y1 += offset.y;
        seg.y2 += offset.y;
        set.lines.push_back(seg);
    }
    for (auto c : confirm_circles(crop, detect_circles(stages.edges, stages.gradients, hough))) {
        c.cx += offset.x;
        c.cy += offset.y;
        set.circles.push_back(c);
    }

    if (stage_dir) {
        std::filesystem::create_directories(*stage_dir);
        save_pgm(crop, *stage_dir / "01_roi.pgm");
        save_pgm(stages.blurred, *stage_dir / "02_blur.pgm");
        save_pgm(magnitude_to_raster(stages.gradients), *stage_dir / "03_gradient.pgm");
        save_pgm(magnitude_to_raster(stages.suppressed), *stage_dir / "04_nms.pgm");
        save_pgm(edges_to_raster(stages.edges), *stage_dir / "05_edges.pgm");
        save_pgm(accumulator_to_raster(accumulate_lines(stages.edges, hough)), *stage_dir / "06_line_votes.pgm");
    }

    set.lights = optional_sidecar(cfg.sidecars.lights, stem, "lights", result.warnings, [&](const auto& p) {
        return detect_ornaments(p, img.width(), img.height(), cfg.light_classes);
    });
    set.dimension_lines =
        optional_sidecar(cfg.sidecars.dimlines, stem, "dimension-line", result.warnings, [&](const auto& p) {
            return detect_dimension_lines(p, img.width(), img.height(), cfg.dimline_classes);
        });

    // Text boxes: sidecars are in full-image coordinates, the built-in
    // detector works on the drawing region.
    std::vector<DetectionBox> text_boxes;
    if (cfg.sidecars.text) {
        text_boxes = detect_text_regions(img, resolve_template(*cfg.sidecars.text, stem), cfg.text,
                                         cfg.text_classes);
    } else {
        text_boxes = detect_text_regions(crop, std::nullopt, cfg.text, cfg.text_classes);
        for (auto& b : text_boxes) {
            shift(b, offset);
        }
    }
    for (const auto& b : text_boxes) {
        set.texts.push_back({b, {}, 0.0});
    }

    if (before_ocr) {
        before_ocr(set);
    }

    if (backend == nullptr && !set.texts.empty()) {
        result.warnings.push_back("no OCR backend configured; text regions carry empty strings");
    }
    for (std::size_t i = 0; backend != nullptr && i < set.texts.size(); ++i) {
        auto& region = set.texts[i];
        try {
            const auto [text_crop, _] = crop_roi(img, region.box);
            std::string warning;
            const auto r = recognize_text(text_crop, *backend, i, &warning);
            region.text = r.text;
            region.confidence = r.confidence;
            if (!warning.empty()) {
                result.warnings.push_back(warning);
            }
        } catch (const Error& e) {
            if (e.code() != ErrorCode::EmptyBox) {
                throw;
            }
            result.warnings.push_back("text region " + std::to_string(i) + " has zero area; skipped OCR");
        }
    }
    return result;
}

PipelineResult run_pipeline(const std::filesystem::path& input, const PipelineConfig& cfg) {
    cfg.validate();
    RasterImage img;
    try {
        img = load_image(input);
    } catch (const Error& e) {
        throw Error(ErrorCode::InputUnreadable, e.what());
    }
    const std::string stem = input.stem().string();
    const auto out_dir = cfg.output_dir / stem;
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec || !std::filesystem::is_directory(out_dir)) {
        throw Error(ErrorCode::OutputUnwritable, "cannot create " + out_dir.string());
    }

    const auto wrap_output = [&](auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            if (e.code() == ErrorCode::IoError) {
                throw Error(ErrorCode::OutputUnwritable, e.what());
            }
            throw;
        }
    };

    std::unique_ptr<OcrBackend> backend;
    try {
        backend = make_ocr_backend(cfg.ocr, stem);
    } catch (const Error& e) {
        throw Error(ErrorCode::InputUnreadable, e.what());
    }
    std::optional<std::filesystem::path> stage_dir;
    if (cfg.dump_stages) {
        stage_dir = *cfg.dump_stages / stem;
    }

    PipelineResult result;
    try {
        result = process_image(img, cfg, input.string(), stem, backend.get(), stage_dir,
                               [&](const DrawingEntitySet& detections) {
                                   // Detector tables are written before recognition runs.
                                   wrap_output([&] {
                                       write_entity_csv(detections, EntityKind::Lights, out_dir);
                                       write_entity_csv(detections, EntityKind::DimensionLines, out_dir);
                                   });
                               });
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ParseError || e.code() == ErrorCode::UnknownClassId ||
            e.code() == ErrorCode::FileNotFound) {
            throw Error(ErrorCode::InputUnreadable, e.what());
        }
        if (e.code() == ErrorCode::IoError) {
            throw Error(ErrorCode::OutputUnwritable, e.what());
        }
        throw;
    }
    result.output_dir = out_dir;

    wrap_output([&] {
        to_csv(result.entities, out_dir);
        write_manifest(result.entities, out_dir, config_hash(cfg));
        write_text_file(out_dir / "out.svg", to_svg(result.entities));
        write_text_file(out_dir / "out.dxf", to_dxf(result.entities));
    });
    return result;
}

}  // namespace draftvec
