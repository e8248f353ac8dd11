#include "draftvec/text.hpp"

#include "draftvec/error.hpp"

#include "json.hpp"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <tuple>

namespace draftvec {

namespace {

std::vector<DetectionBox> ink_components(const RasterImage& img) {
    const int w = img.width();
    const int h = img.height();
    std::vector<std::uint8_t> seen(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), 0);
    std::vector<DetectionBox> out;
    std::vector<std::pair<int, int>> stack;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const auto i = static_cast<std::size_t>(y) * w + x;
            if (seen[i] || img.at(x, y) >= kInkThreshold) {
                continue;
            }
            DetectionBox box{"text", x, y, x + 1, y + 1, 1.0};
            seen[i] = 1;
            stack.emplace_back(x, y);
            while (!stack.empty()) {
                const auto [cx, cy] = stack.back();
                stack.pop_back();
                box.x1 = std::min(box.x1, cx);
                box.y1 = std::min(box.y1, cy);
                box.x2 = std::max(box.x2, cx + 1);
                box.y2 = std::max(box.y2, cy + 1);
                for (int dy = -1; dy <= 1; ++dy) {
                    for (int dx = -1; dx <= 1; ++dx) {
                        const int nx = cx + dx;
                        const int ny = cy + dy;
                        if (!img.contains(nx, ny)) {
                            continue;
                        }
                        const auto j = static_cast<std::size_t>(ny) * w + nx;
                        if (!seen[j] && img.at(nx, ny) < kInkThreshold) {
                            seen[j] = 1;
                            stack.emplace_back(nx, ny);
                        }
                    }
                }
            }
            out.push_back(box);
        }
    }
    return out;
}

bool mergeable(const DetectionBox& a, const DetectionBox& b) {
    const bool share_rows = a.y1 < b.y2 && b.y1 < a.y2;
    const int gap = std::max(a.x1, b.x1) - std::min(a.x2, b.x2);
    return share_rows && gap <= std::max(a.height(), b.height());
}

}  // namespace

std::vector<DetectionBox> detect_text_regions(const RasterImage& img,
                                              const std::optional<std::filesystem::path>& sidecar,
                                              const TextDetectParams& params, const ClassMap& class_map) {
    if (sidecar) {
        return load_yolo_txt(*sidecar, img.width(), img.height(), class_map);
    }
    std::vector<DetectionBox> boxes;
    for (const auto& c : ink_components(img)) {
        const double aspect = static_cast<double>(c.width()) / c.height();
        if (c.height() >= params.min_height && c.height() <= params.max_height && aspect >= params.min_aspect &&
            aspect <= params.max_aspect) {
            boxes.push_back(c);
        }
    }
    for (bool merged = true; merged;) {
        merged = false;
        for (std::size_t i = 0; i < boxes.size() && !merged; ++i) {
            for (std::size_t j = i + 1; j < boxes.size(); ++j) {
                if (mergeable(boxes[i], boxes[j])) {
                    auto& a = boxes[i];
                    const auto& b = boxes[j];
                    a.x1 = std::min(a.x1, b.x1);
                    a.y1 = std::min(a.y1, b.y1);
                    a.x2 = std::max(a.x2, b.x2);
                    a.y2 = std::max(a.y2, b.y2);
                    boxes.erase(boxes.begin() + static_cast<std::ptrdiff_t>(j));
                    merged = true;
                    break;
                }
            }
        }
    }
    std::sort(boxes.begin(), boxes.end(), [](const DetectionBox& a, const DetectionBox& b) {
        return std::tie(a.y1, a.x1, a.y2, a.x2) < std::tie(b.y1, b.x1, b.y2, b.x2);
    });
    return boxes;
}

std::string trim(const std::string& s) {
    constexpr const char* kSpace = " \t\r\n\f\v";
    const auto first = s.find_first_not_of(kSpace);
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(kSpace);
    return s.substr(first, last - first + 1);
}

CommandOcrBackend::CommandOcrBackend(std::string command, std::filesystem::path scratch_dir)
    : command_(std::move(command)), scratch_dir_(std::move(scratch_dir)) {
    if (scratch_dir_.empty()) {
        scratch_dir_ = std::filesystem::temp_directory_path();
    }
}

namespace {

std::string shell_quote(const std::string& s) {
    std::string out = "'";
    for (const char c : s) {
        if (c == '\'') {
            out += "'\\''";
        } else {
            out += c;
        }
    }
    return out + "'";
}

}  // namespace

OcrResult CommandOcrBackend::recognize(const RasterImage& crop, std::size_t region_index) {
    const auto path = scratch_dir_ / ("draftvec-ocr-" + std::to_string(::getpid()) + "-" +
                                      std::to_string(region_index) + ".pgm");
    save_pgm(crop, path);
    const std::string cmd = command_ + " " + shell_quote(path.string());
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (pipe == nullptr) {
        std::filesystem::remove(path);
        return {"", 0.0, false, "cannot start OCR command"};
    }
    std::string output;
    std::array<char, 4096> buf{};
    for (std::size_t n; (n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0;) {
        output.append(buf.data(), n);
    }
    const int status = ::pclose(pipe);
    std::error_code ec;
    std::filesystem::remove(path, ec);
    if (status == -1 || !WIFEXITED(status) || WEXITSTATUS(status) != 0) {
        return {"", 0.0, false, "OCR command failed for region " + std::to_string(region_index)};
    }
    return {output, 1.0, true, {}};
}

FixtureOcrBackend::FixtureOcrBackend(std::map<std::size_t, std::string> answers) : answers_(std::move(answers)) {}

FixtureOcrBackend FixtureOcrBackend::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::FileNotFound, "OCR fixture " + path.string());
    }
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, path.string() + ": " + e.what());
    }
    if (!doc.is_object()) {
        throw Error(ErrorCode::ParseError, path.string() + ": fixture must be a JSON object");
    }
    std::map<std::size_t, std::string> answers;
    for (const auto& [key, value] : doc.items()) {
        std::size_t idx = 0;
        try {
            std::size_t used = 0;
            idx = std::stoul(key, &used);
            if (used != key.size()) {
                throw std::invalid_argument(key);
            }
        } catch (const std::exception&) {
            throw Error(ErrorCode::ParseError, path.string() + ": bad region index '" + key + "'");
        }
        if (!value.is_string()) {
            throw Error(ErrorCode::ParseError, path.string() + ": region " + key + " must map to a string");
        }
        answers[idx] = value.get<std::string>();
    }
    return FixtureOcrBackend(std::move(answers));
}

OcrResult FixtureOcrBackend::recognize(const RasterImage&, std::size_t region_index) {
    const auto it = answers_.find(region_index);
    if (it == answers_.end()) {
        return {"", 0.0, false, "fixture has no entry for region " + std::to_string(region_index)};
    }
    return {it->second, 1.0, true, {}};
}

OcrResult recognize_text(const RasterImage& crop, OcrBackend& backend, std::size_t region_index,
                         std::string* warning) {
    OcrResult r;
    try {
        r = backend.recognize(crop, region_index);
    } catch (const std::exception& e) {
        r = {"", 0.0, false, e.what()};
    }
    if (!r.ok) {
        if (warning != nullptr) {
            *warning = r.error;
        }
        return {"", 0.0, false, r.error};
    }
    r.text = trim(r.text);
    return r;
}

namespace {

std::u32string decode_utf8(const std::string& s) {
    std::u32string out;
    for (std::size_t i = 0; i < s.size();) {
        const auto c = static_cast<unsigned char>(s[i]);
        std::size_t extra = 0;
        char32_t cp = c;
        if (c >= 0xC0 && c < 0xE0) {
            extra = 1;
            cp = c & 0x1F;
        } else if (c >= 0xE0 && c < 0xF0) {
            extra = 2;
            cp = c & 0x0F;
        } else if (c >= 0xF0 && c < 0xF8) {
            extra = 3;
            cp = c & 0x07;
        }
        bool valid = extra > 0 && i + extra < s.size();
        for (std::size_t k = 1; valid && k <= extra; ++k) {
            const auto cc = static_cast<unsigned char>(s[i + k]);
            valid = (cc & 0xC0) == 0x80;
            cp = (cp << 6) | (cc & 0x3F);
        }
        if (valid) {
            out.push_back(cp);
            i += extra + 1;
        } else {
            // ASCII, or a malformed byte kept as its own unit.
            out.push_back(c);
            ++i;
        }
    }
    return out;
}

}  // namespace

std::size_t levenshtein(const std::string& a_utf8, const std::string& b_utf8) {
    const auto a = decode_utf8(a_utf8);
    const auto b = decode_utf8(b_utf8);
    std::vector<std::size_t> prev(b.size() + 1);
    std::vector<std::size_t> cur(b.size() + 1);
    for (std::size_t j = 0; j <= b.size(); ++j) {
        prev[j] = j;
    }
    for (std::size_t i = 1; i <= a.size(); ++i) {
        cur[0] = i;
        for (std::size_t j = 1; j <= b.size(); ++j) {
            const std::size_t subst = prev[j - 1] + (a[i - 1] == b[j - 1] ? 0 : 1);
            cur[j] = std::min({prev[j] + 1, cur[j - 1] + 1, subst});
        }
        std::swap(prev, cur);
    }
    return prev[b.size()];
}

double character_accuracy(const std::string& recognized, const std::string& truth) {
    if (truth.empty()) {
        throw Error(ErrorCode::EmptyTruth, "character accuracy needs a non-empty truth string");
    }
    const auto n = std::max(decode_utf8(recognized).size(), decode_utf8(truth).size());
    const double acc = 1.0 - static_cast<double>(levenshtein(recognized, truth)) / static_cast<double>(n);
    return std::clamp(acc, 0.0, 1.0);
}

}  // namespace draftvec
