#include "doctest.h"
#include "fixtures.hpp"
#include "oracles.hpp"
#include "scratch.hpp"

#include "draftvec/entities.hpp"
#include "draftvec/error.hpp"

#include "json.hpp"

using namespace draftvec;

namespace {

const std::filesystem::path kTables = std::filesystem::path(DRAFTVEC_TEST_DATA_DIR) / "tables";

}  // namespace

TEST_CASE("published tables serialize to the golden files byte for byte") {
    ScratchDir dir("csv");
    const auto set = fixture::reference_tables();
    to_csv(set, dir.path());
    for (const char* name : {"circles.csv", "lines.csv", "dimlines.csv", "lights.csv"}) {
        CAPTURE(name);
        CHECK(oracle::slurp(dir / name) == oracle::slurp(kTables / name));
    }
    CHECK(oracle::slurp(dir / "text.csv") == "label,x1,y1,x2,y2,text\n");
}

TEST_CASE("circle and light rows") {
    DrawingEntitySet set;
    set.circles = {{368, 280, 14, 0}, {368, 232, 14, 0}, {368, 328, 15, 0}};
    set.lights = {{"PL", 629, 348, 643, 358, 1.0}};
    CHECK(format_csv(set, EntityKind::Circles) ==
          "label,x,y,radius\nCircle,368,280,14\nCircle,368,232,14\nCircle,368,328,15\n");
    CHECK(format_csv(set, EntityKind::Lights) == "label,x1,y1,x2,y2\nPL,629,348,643,358\n");
}

TEST_CASE("golden files parse and re-serialize identically") {
    const auto set = from_csv(kTables);
    auto expected = fixture::reference_tables();
    CHECK(set.circles == expected.circles);
    CHECK(set.lines == expected.lines);
    CHECK(set.dimension_lines == expected.dimension_lines);
    CHECK(set.lights == expected.lights);
    ScratchDir dir("csv");
    to_csv(set, dir.path());
    for (const char* name : {"circles.csv", "lines.csv", "dimlines.csv", "lights.csv"}) {
        CHECK(oracle::slurp(dir / name) == oracle::slurp(kTables / name));
    }
}

TEST_CASE("empty set writes five header-only files") {
    ScratchDir dir("csv");
    const auto written = to_csv(DrawingEntitySet{}, dir.path());
    CHECK(written.size() == 5);
    const auto tree = oracle::tree_bytes(dir.path());
    CHECK(tree.size() == 5);
    CHECK(tree.at("circles.csv") == "label,x,y,radius\n");
    CHECK(tree.at("lines.csv") == "label,x1,y1,x2,y2\n");
    CHECK(tree.at("dimlines.csv") == "label,x1,y1,x2,y2\n");
    CHECK(tree.at("lights.csv") == "label,x1,y1,x2,y2\n");
    CHECK(tree.at("text.csv") == "label,x1,y1,x2,y2,text\n");
}

TEST_CASE("text fields are quoted with doubled quotes") {
    DrawingEntitySet set;
    set.texts = {{{"text", 1, 2, 3, 4, 1.0}, "say \"hi\", ok", 1.0}, {{"text", 0, 0, 1, 1, 1.0}, "", 1.0}};
    CHECK(format_csv(set, EntityKind::Text) ==
          "label,x1,y1,x2,y2,text\nText,1,2,3,4,\"say \"\"hi\"\", ok\"\nText,0,0,1,1,\"\"\n");
}

TEST_CASE("round trip on random sets") {
    std::mt19937_64 rng(60);
    for (int i = 0; i < 100; ++i) {
        const auto set = fixture::random_set(rng);
        ScratchDir dir("csv");
        to_csv(set, dir.path());
        write_manifest(set, dir.path(), "abc");
        const auto back = from_csv(dir.path());
        CHECK(back == set);
        const auto first = oracle::tree_bytes(dir.path());
        ScratchDir again("csv");
        to_csv(back, again.path());
        write_manifest(back, again.path(), "abc");
        CHECK(oracle::tree_bytes(again.path()) == first);
    }
}

TEST_CASE("a directory with only circles.csv") {
    ScratchDir dir("csv");
    std::filesystem::copy_file(kTables / "circles.csv", dir / "circles.csv");
    const auto set = from_csv(dir.path());
    CHECK(set.circles.size() == 3);
    CHECK(set.lines.empty());
    CHECK(set.dimension_lines.empty());
    CHECK(set.lights.empty());
    CHECK(set.texts.empty());
}

TEST_CASE("malformed rows are parse errors naming file and line") {
    ScratchDir dir("csv");
    const auto expect_parse_error = [&](const char* file, const std::string& content, const char* where) {
        std::filesystem::remove_all(dir.path());
        std::filesystem::create_directories(dir.path());
        std::ofstream(dir / file, std::ios::binary) << content;
        try {
            from_csv(dir.path());
            FAIL("expected ParseError for " << content);
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::ParseError);
            CHECK(std::string(e.what()).find(where) != std::string::npos);
        }
    };
    expect_parse_error("circles.csv", "label,x,y,radius\nCircle,368,280\n", "circles.csv:2");
    expect_parse_error("circles.csv", "label,x,y,radius\nCircle,1,2,3\nCircle,1,2,x\n", "circles.csv:3");
    expect_parse_error("lines.csv", "x1,y1,x2,y2\n", "lines.csv:1");
    expect_parse_error("lines.csv", "label,x1,y1,x2,y2\nCircle,1,2,3,4\n", "lines.csv:2");
    expect_parse_error("text.csv", "label,x1,y1,x2,y2,text\nText,1,2,3,4,\"open\n", "text.csv");
    expect_parse_error("lights.csv", "label,x1,y1,x2,y2\r\nPL,1,2,3,4\r\n", "lights.csv:1");
}

TEST_CASE("manifest counts equal list lengths") {
    ScratchDir dir("csv");
    auto set = fixture::reference_tables();
    write_manifest(set, dir.path(), "0123456789abcdef");
    auto doc = nlohmann::json::parse(oracle::slurp(dir / "manifest.json"));
    CHECK(doc["counts"]["circles"] == 3);
    CHECK(doc["counts"]["lines"] == 6);
    CHECK(doc["counts"]["dimlines"] == 5);
    CHECK(doc["counts"]["lights"] == 5);
    CHECK(doc["counts"]["text"] == 0);
    CHECK(doc["config_hash"] == "0123456789abcdef");
    CHECK(doc["image_width"] == 800);

    doc = nlohmann::json::parse(format_manifest(DrawingEntitySet{}));
    for (const auto& [k, v] : doc["counts"].items()) {
        CHECK(v == 0);
    }

    std::mt19937_64 rng(61);
    for (int i = 0; i < 50; ++i) {
        set = fixture::random_set(rng);
        doc = nlohmann::json::parse(format_manifest(set));
        CHECK(doc["counts"]["circles"] == set.circles.size());
        CHECK(doc["counts"]["lines"] == set.lines.size());
        CHECK(doc["counts"]["dimlines"] == set.dimension_lines.size());
        CHECK(doc["counts"]["lights"] == set.lights.size());
        CHECK(doc["counts"]["text"] == set.texts.size());
    }
}

TEST_CASE("CSV output is a pure function of the set") {
    std::mt19937_64 rng(62);
    const auto set = fixture::random_set(rng);
    for (const auto kind : kAllEntityKinds) {
        CHECK(format_csv(set, kind) == format_csv(DrawingEntitySet(set), kind));
    }
}

TEST_CASE("unwritable directory is an IoError") {
    try {
        to_csv(DrawingEntitySet{}, "/nonexistent-dir/for/sure");
        FAIL("expected IoError");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::IoError);
    }
}

TEST_CASE("entity set JSON round trip") {
    std::mt19937_64 rng(63);
    for (int i = 0; i < 30; ++i) {
        const auto set = fixture::random_set(rng);
        CHECK(entity_set_from_json(entity_set_to_json(set)) == set);
    }
    CHECK_THROWS_AS(entity_set_from_json("{"), Error);
}
