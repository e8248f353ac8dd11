#include "draftvec/error.hpp"
#include "draftvec/pipeline.hpp"

#include "json.hpp"

#include <cstdio>
#include <set>

namespace draftvec {

using nlohmann::ordered_json;

void PipelineConfig::validate() const {
    canny.validate();
    hough.validate();
    if (text.min_height < 1 || text.min_height > text.max_height || !(text.min_aspect > 0.0) ||
        text.min_aspect > text.max_aspect) {
        throw Error(ErrorCode::ConfigInvalid, "text detection bounds out of range");
    }
    if (workers < 1) {
        throw Error(ErrorCode::ConfigInvalid, "workers must be >= 1");
    }
    if (ocr.command && ocr.fixture) {
        throw Error(ErrorCode::ConfigInvalid, "choose either an OCR command or an OCR fixture, not both");
    }
}

namespace {

void check_keys(const ordered_json& obj, const std::string& where, std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) {
        throw Error(ErrorCode::ConfigInvalid, where + " must be an object");
    }
    const std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, _] : obj.items()) {
        if (!ok.contains(key)) {
            throw Error(ErrorCode::ConfigInvalid, "unknown key '" + key + "' in " + where);
        }
    }
}

template <typename T>
void read(const ordered_json& obj, const char* key, T& out) {
    if (obj.contains(key)) {
        out = obj.at(key).get<T>();
    }
}

void read_path(const ordered_json& obj, const char* key, std::optional<std::string>& out,
               const std::filesystem::path& base_dir) {
    if (!obj.contains(key)) {
        return;
    }
    const auto& v = obj.at(key);
    if (v.is_null()) {
        out.reset();
        return;
    }
    const std::filesystem::path p = v.get<std::string>();
    out = (base_dir.empty() || p.is_absolute()) ? p.string() : (base_dir / p).lexically_normal().string();
}

ClassMap class_map_from(const ordered_json& v) {
    return parse_class_map(v.dump());
}

ordered_json class_map_json(const ClassMap& m) {
    ordered_json j = ordered_json::object();
    for (const auto& [id, label] : m) {
        j[std::to_string(id)] = label;
    }
    return j;
}

ordered_json optional_json(const std::optional<std::string>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

}  // namespace

void apply_config_json(PipelineConfig& cfg, const std::string& json_text, const std::filesystem::path& base_dir) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(json_text);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigInvalid, std::string("config is not valid JSON: ") + e.what());
    }
    try {
        check_keys(doc, "config",
                   {"canny", "hough", "text_detection", "sidecars", "class_maps", "ocr", "output_dir",
                    "dump_stages", "seed", "workers"});
        if (doc.contains("canny")) {
            const auto& c = doc["canny"];
            check_keys(c, "canny", {"sigma", "low_threshold", "high_threshold"});
            read(c, "sigma", cfg.canny.sigma);
            read(c, "low_threshold", cfg.canny.low_threshold);
            read(c, "high_threshold", cfg.canny.high_threshold);
        }
        if (doc.contains("hough")) {
            const auto& h = doc["hough"];
            check_keys(h, "hough",
                       {"rho_resolution", "theta_resolution", "line_peak_threshold", "nms_window", "max_gap",
                        "min_length", "r_min", "r_max", "circle_peak_threshold"});
            read(h, "rho_resolution", cfg.hough.rho_resolution);
            read(h, "theta_resolution", cfg.hough.theta_resolution);
            if (h.contains("line_peak_threshold")) {
                const auto& v = h["line_peak_threshold"];
                cfg.hough.line_peak_threshold = v.is_null() ? std::nullopt : std::optional<int>(v.get<int>());
            }
            read(h, "nms_window", cfg.hough.nms_window);
            read(h, "max_gap", cfg.hough.max_gap);
            read(h, "min_length", cfg.hough.min_length);
            read(h, "r_min", cfg.hough.r_min);
            read(h, "r_max", cfg.hough.r_max);
            read(h, "circle_peak_threshold", cfg.hough.circle_peak_threshold);
        }
        if (doc.contains("text_detection")) {
            const auto& t = doc["text_detection"];
            check_keys(t, "text_detection", {"min_height", "max_height", "min_aspect", "max_aspect"});
            read(t, "min_height", cfg.text.min_height);
            read(t, "max_height", cfg.text.max_height);
            read(t, "min_aspect", cfg.text.min_aspect);
            read(t, "max_aspect", cfg.text.max_aspect);
        }
        if (doc.contains("sidecars")) {
            const auto& s = doc["sidecars"];
            check_keys(s, "sidecars", {"roi", "lights", "dimlines", "text"});
            read_path(s, "roi", cfg.sidecars.roi, base_dir);
            read_path(s, "lights", cfg.sidecars.lights, base_dir);
            read_path(s, "dimlines", cfg.sidecars.dimlines, base_dir);
            read_path(s, "text", cfg.sidecars.text, base_dir);
        }
        if (doc.contains("class_maps")) {
            const auto& m = doc["class_maps"];
            check_keys(m, "class_maps", {"roi", "lights", "dimlines", "text"});
            if (m.contains("roi")) cfg.roi_classes = class_map_from(m["roi"]);
            if (m.contains("lights")) cfg.light_classes = class_map_from(m["lights"]);
            if (m.contains("dimlines")) cfg.dimline_classes = class_map_from(m["dimlines"]);
            if (m.contains("text")) cfg.text_classes = class_map_from(m["text"]);
        }
        if (doc.contains("ocr")) {
            const auto& o = doc["ocr"];
            check_keys(o, "ocr", {"command", "fixture"});
            read_path(o, "command", cfg.ocr.command, {});
            read_path(o, "fixture", cfg.ocr.fixture, base_dir);
        }
        if (doc.contains("output_dir")) {
            cfg.output_dir = doc["output_dir"].get<std::string>();
        }
        if (doc.contains("dump_stages")) {
            const auto& v = doc["dump_stages"];
            cfg.dump_stages = v.is_null() ? std::nullopt
                                          : std::optional<std::filesystem::path>(v.get<std::string>());
        }
        read(doc, "seed", cfg.seed);
        read(doc, "workers", cfg.workers);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ConfigInvalid, e.what());
    } catch (const Error& e) {
        throw Error(ErrorCode::ConfigInvalid, e.what());
    }
    cfg.validate();
}

PipelineConfig load_config(const std::filesystem::path& path) {
    PipelineConfig cfg;
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const Error&) {
        throw Error(ErrorCode::ConfigInvalid, "cannot read config " + path.string());
    }
    apply_config_json(cfg, text, path.parent_path());
    return cfg;
}

std::string config_to_json(const PipelineConfig& cfg) {
    ordered_json doc;
    doc["canny"] = {{"sigma", cfg.canny.sigma},
                    {"low_threshold", cfg.canny.low_threshold},
                    {"high_threshold", cfg.canny.high_threshold}};
    doc["hough"] = {{"rho_resolution", cfg.hough.rho_resolution},
                    {"theta_resolution", cfg.hough.theta_resolution},
                    {"line_peak_threshold", cfg.hough.line_peak_threshold
                                                ? ordered_json(*cfg.hough.line_peak_threshold)
                                                : ordered_json(nullptr)},
                    {"nms_window", cfg.hough.nms_window},
                    {"max_gap", cfg.hough.max_gap},
                    {"min_length", cfg.hough.min_length},
                    {"r_min", cfg.hough.r_min},
                    {"r_max", cfg.hough.r_max},
                    {"circle_peak_threshold", cfg.hough.circle_peak_threshold}};
    doc["text_detection"] = {{"min_height", cfg.text.min_height},
                             {"max_height", cfg.text.max_height},
                             {"min_aspect", cfg.text.min_aspect},
                             {"max_aspect", cfg.text.max_aspect}};
    doc["sidecars"] = {{"roi", optional_json(cfg.sidecars.roi)},
                       {"lights", optional_json(cfg.sidecars.lights)},
                       {"dimlines", optional_json(cfg.sidecars.dimlines)},
                       {"text", optional_json(cfg.sidecars.text)}};
    doc["class_maps"] = {{"roi", class_map_json(cfg.roi_classes)},
                         {"lights", class_map_json(cfg.light_classes)},
                         {"dimlines", class_map_json(cfg.dimline_classes)},
                         {"text", class_map_json(cfg.text_classes)}};
    doc["ocr"] = {{"command", optional_json(cfg.ocr.command)}, {"fixture", optional_json(cfg.ocr.fixture)}};
    doc["seed"] = cfg.seed;
    return doc.dump(2) + "\n";
}

std::string config_hash(const PipelineConfig& cfg) {
    std::uint64_t h = 14695981039346656037ULL;
    for (const unsigned char c : config_to_json(cfg)) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string resolve_template(const std::string& path_template, const std::string& stem) {
    std::string out = path_template;
    static constexpr std::string_view kToken = "{stem}";
    for (auto pos = out.find(kToken); pos != std::string::npos; pos = out.find(kToken, pos + stem.size())) {
        out.replace(pos, kToken.size(), stem);
    }
    return out;
}

}  // namespace draftvec
