#include "doctest.h"
#include "oracles.hpp"
#include "scratch.hpp"

#include "draftvec/error.hpp"
#include "draftvec/synth.hpp"
#include "draftvec/text.hpp"

using namespace draftvec;

namespace {

void write(const std::filesystem::path& p, const std::string& s) {
    std::ofstream(p, std::ios::binary) << s;
}

void fill(RasterImage& img, int x1, int y1, int x2, int y2) {
    for (int y = y1; y < y2; ++y) {
        for (int x = x1; x < x2; ++x) {
            img.at(x, y) = 0;
        }
    }
}

class ScriptedBackend final : public OcrBackend {
public:
    explicit ScriptedBackend(OcrResult r) : r_(std::move(r)) {}
    OcrResult recognize(const RasterImage&, std::size_t) override { return r_; }

private:
    OcrResult r_;
};

}  // namespace

TEST_CASE("blank image has no text regions") {
    CHECK(detect_text_regions(RasterImage(120, 80, 255), std::nullopt).empty());
}

TEST_CASE("sidecar boxes pass through in file order") {
    ScratchDir dir("text");
    write(dir / "t.txt", "0 0.8 0.8 0.1 0.1\n0 0.2 0.2 0.1 0.1\n0 0.5 0.5 0.2 0.1\n");
    const auto boxes = detect_text_regions(RasterImage(100, 100, 255), dir / "t.txt");
    REQUIRE(boxes.size() == 3);
    CHECK(boxes[0] == DetectionBox{"text", 75, 75, 85, 85});
    CHECK(boxes[1] == DetectionBox{"text", 15, 15, 25, 25});
    CHECK(boxes[2] == DetectionBox{"text", 40, 45, 60, 55});
}

TEST_CASE("two 10 px blobs 100 px apart are two regions in position order") {
    RasterImage img(200, 60, 255);
    fill(img, 130, 20, 150, 30);
    fill(img, 10, 22, 30, 32);
    const auto boxes = detect_text_regions(img, std::nullopt);
    REQUIRE(boxes.size() == 2);
    CHECK(boxes[0] == DetectionBox{"text", 130, 20, 150, 30});
    CHECK(boxes[1] == DetectionBox{"text", 10, 22, 30, 32});
}

TEST_CASE("glyphs of a rendered word merge into one region") {
    RasterImage img(200, 60, 255);
    draw_text(img, "AB12", 20, 20, 2);
    draw_text(img, "XY", 150, 20, 2);
    const auto boxes = detect_text_regions(img, std::nullopt);
    REQUIRE(boxes.size() == 2);
    CHECK(boxes[0] == text_box("AB12", 20, 20, 2));
    CHECK(boxes[1] == text_box("XY", 150, 20, 2));
}

TEST_CASE("size limits drop specks and long rules") {
    RasterImage img(300, 60, 255);
    fill(img, 5, 5, 7, 7);        // too small
    fill(img, 10, 40, 290, 44);   // too flat
    fill(img, 100, 10, 110, 20);  // kept
    const auto boxes = detect_text_regions(img, std::nullopt);
    REQUIRE(boxes.size() == 1);
    CHECK(boxes[0] == DetectionBox{"text", 100, 10, 110, 20});
}

TEST_CASE("built-in regions are distinct and each holds ink") {
    std::mt19937_64 rng(31);
    std::uniform_int_distribution<int> pos(0, 180);
    for (int i = 0; i < 20; ++i) {
        RasterImage img(200, 200, 255);
        for (int k = 0; k < 6; ++k) {
            draw_text(img, "T" + std::to_string(k), pos(rng), pos(rng), 1 + k % 2);
        }
        const auto boxes = detect_text_regions(img, std::nullopt);
        for (std::size_t a = 0; a < boxes.size(); ++a) {
            bool ink = false;
            for (int y = boxes[a].y1; y < boxes[a].y2 && !ink; ++y) {
                for (int x = boxes[a].x1; x < boxes[a].x2; ++x) {
                    ink = ink || img.at(x, y) < 128;
                }
            }
            CHECK(ink);
            for (std::size_t b = a + 1; b < boxes.size(); ++b) {
                CHECK_FALSE(boxes[a] == boxes[b]);
            }
        }
    }
}

TEST_CASE("fixture backend answers by region index") {
    FixtureOcrBackend backend({{0, "PL"}});
    const auto r = recognize_text(RasterImage(4, 4, 255), backend, 0);
    CHECK(r.text == "PL");
    CHECK(r.confidence == 1.0);
    std::string warning;
    const auto miss = recognize_text(RasterImage(4, 4, 255), backend, 3, &warning);
    CHECK(miss.text.empty());
    CHECK(miss.confidence == 0.0);
    CHECK_FALSE(warning.empty());
}

TEST_CASE("fixture file parsing") {
    ScratchDir dir("ocr");
    write(dir / "f.json", R"({"0": "A", "12": "B C"})");
    FixtureOcrBackend backend = FixtureOcrBackend::from_file(dir / "f.json");
    CHECK(recognize_text(RasterImage(1, 1), backend, 12).text == "B C");
    write(dir / "bad.json", R"({"x": "A"})");
    CHECK_THROWS_AS(FixtureOcrBackend::from_file(dir / "bad.json"), Error);
    CHECK_THROWS_AS(FixtureOcrBackend::from_file(dir / "none.json"), Error);
}

TEST_CASE("recognised text is trimmed and otherwise verbatim") {
    ScriptedBackend backend({"  2400 mm \n", 1.0, true, {}});
    const auto r = recognize_text(RasterImage(3, 3), backend, 0);
    CHECK(r.text == "2400 mm");
    CHECK(r.confidence == 1.0);
}

TEST_CASE("command backend reads stdout and fails on nonzero exit") {
    ScratchDir dir("ocr");
    write(dir / "ok.sh", "#!/bin/sh\ntest -s \"$1\" || exit 3\nhead -c 2 \"$1\" | grep -q P5 || exit 4\nprintf '  2400 mm \\n'\n");
    write(dir / "fail.sh", "#!/bin/sh\necho partial\nexit 1\n");
    CommandOcrBackend ok("sh " + (dir / "ok.sh").string(), dir.path());
    const auto r = recognize_text(RasterImage(5, 5, 200), ok, 0);
    CHECK(r.ok);
    CHECK(r.text == "2400 mm");
    CommandOcrBackend bad("sh " + (dir / "fail.sh").string(), dir.path());
    std::string warning;
    const auto f = recognize_text(RasterImage(5, 5, 200), bad, 1, &warning);
    CHECK_FALSE(f.ok);
    CHECK(f.text.empty());
    CHECK(f.confidence == 0.0);
    CHECK_FALSE(warning.empty());
    // The crop file is cleaned up after each call.
    std::size_t leftovers = 0;
    for (const auto& e : std::filesystem::directory_iterator(dir.path())) {
        leftovers += e.path().extension() == ".pgm" ? 1 : 0;
    }
    CHECK(leftovers == 0);
}

TEST_CASE("character accuracy examples") {
    CHECK(character_accuracy("ABC", "ABC") == 1.0);
    CHECK(character_accuracy("HELPO", "HELLO") == doctest::Approx(0.8));
    CHECK(character_accuracy("", "ABC") == 0.0);
    CHECK(character_accuracy("ABCDEFGHIJKLMNOPQRSTUVWXYZ", "A") == doctest::Approx(1.0 / 26.0));
    try {
        character_accuracy("A", "");
        FAIL("expected EmptyTruth");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::EmptyTruth);
    }
}

TEST_CASE("levenshtein matches the DP oracle and accuracy is symmetric") {
    std::mt19937_64 rng(32);
    std::uniform_int_distribution<int> len(0, 9);
    std::uniform_int_distribution<int> ch(0, 3);
    for (int i = 0; i < 500; ++i) {
        std::string a;
        std::string b;
        for (int k = len(rng); k > 0; --k) {
            a += static_cast<char>('a' + ch(rng));
        }
        for (int k = len(rng); k > 0; --k) {
            b += static_cast<char>('a' + ch(rng));
        }
        CHECK(levenshtein(a, b) == oracle::levenshtein(a, b));
        if (!a.empty() && !b.empty()) {
            CHECK(character_accuracy(a, b) == character_accuracy(b, a));
            CHECK((character_accuracy(a, b) == 1.0) == (a == b));
        }
    }
}

TEST_CASE("levenshtein counts code points, not bytes") {
    CHECK(levenshtein("\xC3\xA9t\xC3\xA9", "ete") == 2);
    CHECK(character_accuracy("\xE2\x8C\x80" "50", "\xC3\x98" "50") == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("trim") {
    CHECK(trim("") == "");
    CHECK(trim(" \t\n") == "");
    CHECK(trim("  a b  ") == "a b");
}
