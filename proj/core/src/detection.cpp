#include "draftvec/detection.hpp"

#include "draftvec/error.hpp"

#include "json.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace draftvec {

namespace class_maps {
ClassMap roi() { return {{0, "drawing"}}; }
ClassMap lights() { return {{0, "PL"}, {1, "CS"}, {2, "CL"}, {3, "DL"}}; }
ClassMap dimlines() { return {{0, "dimline"}}; }
ClassMap text() { return {{0, "text"}}; }
}  // namespace class_maps

ClassMap parse_class_map(const std::string& json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("class map: ") + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::ParseError, "class map must be a JSON object");
    }
    ClassMap out;
    for (const auto& [key, value] : doc.items()) {
        int id = -1;
        const auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), id);
        if (ec != std::errc{} || ptr != key.data() + key.size() || id < 0 || !value.is_string()) {
            throw Error(ErrorCode::ParseError, "class map entry '" + key + "' must map a non-negative id to a label");
        }
        out[id] = value.get<std::string>();
    }
    return out;
}

ClassMap load_class_map(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::FileNotFound, "class map " + path.string());
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_class_map(ss.str());
}

namespace {

struct Span {
    int lo;
    int hi;
};

// Round both corners, then pull the span back within half a pixel of the
// requested extent by moving whichever corner rounded further.
Span place_span(double center, double extent, int dim) {
    const double lo_exact = (center - extent / 2.0) * dim;
    const double hi_exact = (center + extent / 2.0) * dim;
    int lo = static_cast<int>(std::round(lo_exact));
    int hi = static_cast<int>(std::round(hi_exact));
    const double lo_err = lo - lo_exact;
    const double hi_err = hi - hi_exact;
    const double width_err = hi_err - lo_err;
    if (width_err > 0.5) {
        if (hi_err >= -lo_err) {
            --hi;
        } else {
            ++lo;
        }
    } else if (width_err < -0.5) {
        if (-hi_err >= lo_err) {
            ++hi;
        } else {
            --lo;
        }
    }
    return {std::clamp(lo, 0, dim), std::clamp(hi, 0, dim)};
}

}  // namespace

DetectionBox put_box(const YoloRecord& rec, int img_w, int img_h, const ClassMap& class_map) {
    const auto it = class_map.find(rec.class_id);
    if (it == class_map.end()) {
        throw Error(ErrorCode::UnknownClassId, "class id " + std::to_string(rec.class_id));
    }
    const auto xs = place_span(rec.cx, rec.w, img_w);
    const auto ys = place_span(rec.cy, rec.h, img_h);
    return {it->second, xs.lo, ys.lo, xs.hi, ys.hi, rec.confidence.value_or(1.0)};
}

YoloRecord parse_yolo_line(const std::string& line, std::size_t line_number) {
    std::istringstream in(line);
    std::vector<std::string> fields;
    for (std::string tok; in >> tok;) {
        fields.push_back(tok);
    }
    const auto fail = [&](const std::string& why) {
        return Error(ErrorCode::ParseError, "line " + std::to_string(line_number) + ": " + why);
    };
    if (fields.size() < 5 || fields.size() > 6) {
        throw fail("expected 'class_id cx cy w h [conf]', got " + std::to_string(fields.size()) + " fields");
    }
    YoloRecord rec;
    {
        const auto& f = fields[0];
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), rec.class_id);
        if (ec != std::errc{} || ptr != f.data() + f.size() || rec.class_id < 0) {
            throw fail("bad class id '" + f + "'");
        }
    }
    const auto number = [&](const std::string& f) {
        double v = 0.0;
        const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
        if (ec != std::errc{} || ptr != f.data() + f.size() || !std::isfinite(v)) {
            throw fail("bad number '" + f + "'");
        }
        return v;
    };
    rec.cx = number(fields[1]);
    rec.cy = number(fields[2]);
    rec.w = number(fields[3]);
    rec.h = number(fields[4]);
    if (fields.size() == 6) {
        rec.confidence = number(fields[5]);
        if (*rec.confidence < 0.0 || *rec.confidence > 1.0) {
            throw fail("confidence outside [0, 1]");
        }
    }
    constexpr double kEps = 1e-6;
    const bool in_frame = rec.w >= 0.0 && rec.h >= 0.0 && rec.cx - rec.w / 2 >= -kEps &&
                          rec.cx + rec.w / 2 <= 1.0 + kEps && rec.cy - rec.h / 2 >= -kEps &&
                          rec.cy + rec.h / 2 <= 1.0 + kEps;
    if (!in_frame) {
        throw fail("box extends outside the normalized frame");
    }
    return rec;
}

std::vector<DetectionBox> load_yolo_txt(const std::filesystem::path& path, int img_w, int img_h,
                                        const ClassMap& class_map) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::FileNotFound, path.string());
    }
    std::vector<DetectionBox> out;
    std::string line;
    for (std::size_t n = 1; std::getline(in, line); ++n) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            out.push_back(put_box(parse_yolo_line(line, n), img_w, img_h, class_map));
        } catch (const Error& e) {
            throw Error(e.code(), path.string() + ": " + e.what());
        }
    }
    return out;
}

std::string to_yolo_txt(const std::vector<DetectionBox>& boxes, int img_w, int img_h, const ClassMap& class_map) {
    std::string out;
    char buf[160];
    for (const auto& b : boxes) {
        const auto it = std::find_if(class_map.begin(), class_map.end(),
                                     [&](const auto& kv) { return kv.second == b.class_label; });
        if (it == class_map.end()) {
            throw Error(ErrorCode::UnknownClassId, "no class id for label " + b.class_label);
        }
        std::snprintf(buf, sizeof buf, "%d %.8f %.8f %.8f %.8f\n", it->first, (b.x1 + b.x2) / (2.0 * img_w),
                      (b.y1 + b.y2) / (2.0 * img_h), b.width() / static_cast<double>(img_w),
                      b.height() / static_cast<double>(img_h));
        out += buf;
    }
    return out;
}

DetectionBox detect_roi(const RasterImage& img, const std::optional<std::filesystem::path>& sidecar,
                        const ClassMap& class_map) {
    if (sidecar) {
        const auto boxes = load_yolo_txt(*sidecar, img.width(), img.height(), class_map);
        const DetectionBox* best = nullptr;
        for (const auto& b : boxes) {
            if (b.class_label == "drawing" && (best == nullptr || b.confidence > best->confidence)) {
                best = &b;
            }
        }
        if (best != nullptr) {
            return *best;
        }
    }
    int min_x = img.width();
    int min_y = img.height();
    int max_x = -1;
    int max_y = -1;
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            if (img.at(x, y) < kInkThreshold) {
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
                min_y = std::min(min_y, y);
                max_y = std::max(max_y, y);
            }
        }
    }
    if (max_x < 0) {
        return {"drawing", 0, 0, img.width(), img.height(), 1.0};
    }
    return {"drawing",
            std::max(0, min_x - kRoiMargin),
            std::max(0, min_y - kRoiMargin),
            std::min(img.width(), max_x + kRoiMargin),
            std::min(img.height(), max_y + kRoiMargin),
            1.0};
}

std::pair<RasterImage, Offset> crop_roi(const RasterImage& img, const DetectionBox& box) {
    const int x1 = std::clamp(box.x1, 0, img.width());
    const int y1 = std::clamp(box.y1, 0, img.height());
    const int x2 = std::clamp(box.x2, 0, img.width());
    const int y2 = std::clamp(box.y2, 0, img.height());
    if (x2 <= x1 || y2 <= y1) {
        throw Error(ErrorCode::EmptyBox, "region has zero area");
    }
    RasterImage out(x2 - x1, y2 - y1);
    for (int y = y1; y < y2; ++y) {
        for (int x = x1; x < x2; ++x) {
            out.at(x - x1, y - y1) = img.at(x, y);
        }
    }
    return {std::move(out), Offset{x1, y1}};
}

namespace {

std::vector<DetectionBox> load_sidecar(const std::filesystem::path& sidecar, int img_w, int img_h,
                                       const ClassMap& class_map) {
    std::error_code ec;
    if (!std::filesystem::is_regular_file(sidecar, ec)) {
        throw Error(ErrorCode::MissingSidecar, sidecar.string());
    }
    return load_yolo_txt(sidecar, img_w, img_h, class_map);
}

}  // namespace

std::vector<DetectionBox> detect_ornaments(const std::filesystem::path& sidecar, int img_w, int img_h,
                                           const ClassMap& class_map) {
    return load_sidecar(sidecar, img_w, img_h, class_map);
}

std::vector<DetectionBox> detect_dimension_lines(const std::filesystem::path& sidecar, int img_w, int img_h,
                                                 const ClassMap& class_map) {
    return load_sidecar(sidecar, img_w, img_h, class_map);
}

double iou(const DetectionBox& a, const DetectionBox& b) {
    const long long ix = std::max(0, std::min(a.x2, b.x2) - std::max(a.x1, b.x1));
    const long long iy = std::max(0, std::min(a.y2, b.y2) - std::max(a.y1, b.y1));
    const long long inter = ix * iy;
    const long long uni = a.area() + b.area() - inter;
    return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : (a == b ? 1.0 : 0.0);
}

}  // namespace draftvec
