#include "cli.hpp"

#include "draftvec/error.hpp"
#include "draftvec/eval.hpp"
#include "draftvec/pipeline.hpp"
#include "draftvec/synth.hpp"

#include "CLI11.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace draftvec::cli {

namespace {

namespace fs = std::filesystem;

int exit_code_for(ErrorCode code) {
    switch (code) {
        case ErrorCode::ConfigInvalid:
        case ErrorCode::SpecInfeasible:
            return kUsage;
        case ErrorCode::OutputUnwritable:
        case ErrorCode::IoError:
            return kOutput;
        default:
            return kInput;
    }
}

struct ConvertOptions {
    std::vector<std::string> inputs;
    std::optional<std::string> config;
    std::optional<std::string> out;
    std::optional<std::string> roi_det;
    std::optional<std::string> lights_det;
    std::optional<std::string> dimline_det;
    std::optional<std::string> text_det;
    std::optional<std::string> lights_classes;
    std::optional<std::string> ocr_cmd;
    std::optional<std::string> ocr_fixture;
    std::optional<std::string> dump_stages;
    std::optional<int> threads;
    std::optional<double> sigma;
    std::optional<double> low;
    std::optional<double> high;
    std::optional<int> line_threshold;
    std::optional<int> min_length;
    std::optional<int> max_gap;
    std::optional<int> r_min;
    std::optional<int> r_max;
    std::optional<double> circle_threshold;
};

struct GenOptions {
    std::optional<std::string> spec;
    std::uint64_t seed = 0;
    std::string out;
    bool demo = false;
};

struct EvalOptions {
    std::string truth;
    std::string pred;
    std::optional<std::string> out;
};

struct BenchOptions {
    std::optional<std::string> spec;
    std::optional<std::string> config;
    std::size_t images = 10;
    std::uint64_t seed = 1;
    int threads = 1;
};

std::string read_file(const fs::path& path, ErrorCode missing) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(missing, "cannot read " + path.string());
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

PipelineConfig build_config(const ConvertOptions& o) {
    PipelineConfig cfg;
    std::optional<std::string> config_path = o.config;
    if (!config_path) {
        if (const char* env = std::getenv("DRAFTVEC_CONFIG"); env != nullptr && *env != '\0') {
            config_path = env;
        }
    }
    if (config_path) {
        cfg = load_config(*config_path);
    }
    if (o.out) {
        cfg.output_dir = *o.out;
    }
    if (o.roi_det) {
        cfg.sidecars.roi = *o.roi_det;
    }
    if (o.lights_det) {
        cfg.sidecars.lights = *o.lights_det;
    }
    if (o.dimline_det) {
        cfg.sidecars.dimlines = *o.dimline_det;
    }
    if (o.text_det) {
        cfg.sidecars.text = *o.text_det;
    }
    if (o.lights_classes) {
        try {
            cfg.light_classes = load_class_map(*o.lights_classes);
        } catch (const Error& e) {
            throw Error(ErrorCode::ConfigInvalid, e.what());
        }
    }
    if (o.ocr_cmd) {
        cfg.ocr = {*o.ocr_cmd, std::nullopt};
    }
    if (o.ocr_fixture) {
        cfg.ocr = {std::nullopt, *o.ocr_fixture};
    }
    if (o.dump_stages) {
        cfg.dump_stages = *o.dump_stages;
    }
    if (o.threads) {
        cfg.workers = *o.threads;
    }
    if (o.sigma) {
        cfg.canny.sigma = *o.sigma;
    }
    if (o.low) {
        cfg.canny.low_threshold = *o.low;
    }
    if (o.high) {
        cfg.canny.high_threshold = *o.high;
    }
    if (o.line_threshold) {
        cfg.hough.line_peak_threshold = *o.line_threshold;
    }
    if (o.min_length) {
        cfg.hough.min_length = *o.min_length;
    }
    if (o.max_gap) {
        cfg.hough.max_gap = *o.max_gap;
    }
    if (o.r_min) {
        cfg.hough.r_min = *o.r_min;
    }
    if (o.r_max) {
        cfg.hough.r_max = *o.r_max;
    }
    if (o.circle_threshold) {
        cfg.hough.circle_peak_threshold = *o.circle_threshold;
    }
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw Error(ErrorCode::ConfigInvalid, e.what());
    }
    return cfg;
}

int run_convert(const ConvertOptions& o, std::ostream& out, std::ostream& err) {
    PipelineConfig cfg;
    try {
        cfg = build_config(o);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kUsage;
    }
    int worst = kOk;
    for (const auto& input : o.inputs) {
        try {
            const auto result = run_pipeline(input, cfg);
            for (const auto& w : result.warnings) {
                err << input << ": warning: " << w << "\n";
            }
            const auto& e = result.entities;
            out << input << " -> " << result.output_dir.string() << " (" << e.circles.size() << " circles, "
                << e.lines.size() << " lines, " << e.dimension_lines.size() << " dimlines, " << e.lights.size()
                << " lights, " << e.texts.size() << " text)\n";
        } catch (const Error& e) {
            err << input << ": error: " << e.what() << "\n";
            worst = std::max(worst, exit_code_for(e.code()));
        } catch (const std::exception& e) {
            err << input << ": error: " << e.what() << "\n";
            worst = std::max<int>(worst, kOutput);
        }
    }
    return worst;
}

int run_gen(const GenOptions& o, std::ostream& out) {
    const fs::path dir = o.out;
    if (o.demo) {
        write_demo_scene(make_demo_scene(), dir);
        out << "demo scene written to " << dir.string() << "\n";
        return kOk;
    }
    if (!o.spec) {
        throw Error(ErrorCode::ConfigInvalid, "gen needs --spec or --demo");
    }
    const auto spec = [&] {
        try {
            return parse_gen_spec(read_file(*o.spec, ErrorCode::ConfigInvalid));
        } catch (const Error& e) {
            throw Error(ErrorCode::ConfigInvalid, e.what());
        }
    }();
    const auto [img, truth] = generate(spec, o.seed);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) {
        throw Error(ErrorCode::OutputUnwritable, "cannot create " + dir.string());
    }
    save_png(img, dir / "image.png");
    write_text_file(dir / "truth.json", ground_truth_to_json(truth));
    out << "wrote " << (dir / "image.png").string() << " and " << (dir / "truth.json").string() << "\n";
    return kOk;
}

GroundTruth load_truth(const fs::path& path) {
    const auto file = fs::is_directory(path) ? path / "truth.json" : path;
    return ground_truth_from_json(read_file(file, ErrorCode::InputUnreadable));
}

int run_eval(const EvalOptions& o, std::ostream& out) {
    GroundTruth truth;
    DrawingEntitySet pred;
    try {
        truth = load_truth(o.truth);
        pred = from_csv(o.pred);
    } catch (const Error& e) {
        throw Error(ErrorCode::InputUnreadable, e.what());
    }
    const auto report = match_and_score(truth, pred);
    const auto table = render_report(report);
    out << table;
    if (o.out) {
        std::error_code ec;
        fs::create_directories(*o.out, ec);
        if (ec) {
            throw Error(ErrorCode::OutputUnwritable, "cannot create " + *o.out);
        }
        write_text_file(fs::path(*o.out) / "report.txt", table);
        write_text_file(fs::path(*o.out) / "report.json", report_to_json(report));
    }
    return kOk;
}

int run_bench(const BenchOptions& o, std::ostream& out) {
    GenSpec spec;
    if (o.spec) {
        spec = parse_gen_spec(read_file(*o.spec, ErrorCode::ConfigInvalid));
    } else {
        spec.circles = {1, 5};
    }
    PipelineConfig cfg = o.config ? load_config(*o.config) : PipelineConfig{};
    cfg.workers = o.threads;
    const auto result = run_benchmark(o.images, spec, o.seed, cfg);
    double total = 0.0;
    double worst = 0.0;
    for (const double s : result.seconds) {
        total += s;
        worst = std::max(worst, s);
    }
    out << render_report(result.aggregate);
    out << "lines: truth " << result.aggregate.lines.truth_count << ", detected "
        << result.aggregate.lines.detected_count << ", matched " << result.aggregate.lines.matched_count << "\n";
    if (!result.seconds.empty()) {
        out << "images: " << result.seconds.size() << ", mean " << total / static_cast<double>(result.seconds.size())
            << " s, max " << worst << " s\n";
    }
    return kOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Convert raster engineering drawings into CSV, SVG and DXF", "draftvec"};
    app.require_subcommand(1);

    ConvertOptions conv;
    auto* convert = app.add_subcommand("convert", "Extract entities from one or more images");
    convert->add_option("images", conv.inputs, "Input images (PNG, JPEG, PGM)")->required();
    convert->add_option("--config", conv.config, "JSON config file (default: $DRAFTVEC_CONFIG)");
    convert->add_option("--out", conv.out, "Output directory (default: out)");
    convert->add_option("--roi-det", conv.roi_det, "YOLO sidecar for the drawing region; {stem} expands");
    convert->add_option("--lights-det", conv.lights_det, "YOLO sidecar for light ornaments");
    convert->add_option("--dimline-det", conv.dimline_det, "YOLO sidecar for dimension lines");
    convert->add_option("--text-det", conv.text_det, "YOLO sidecar for text regions");
    convert->add_option("--lights-classes", conv.lights_classes, "JSON class map for the lights sidecar");
    convert->add_option("--ocr-cmd", conv.ocr_cmd, "OCR command; receives a PGM path, prints text");
    convert->add_option("--ocr-fixture", conv.ocr_fixture, "JSON map of region index to text");
    convert->add_option("--dump-stages", conv.dump_stages, "Write intermediate stage images here");
    convert->add_option("--threads", conv.threads, "Worker threads inside each image")->check(CLI::PositiveNumber);
    convert->add_option("--sigma", conv.sigma, "Gaussian sigma");
    convert->add_option("--low", conv.low, "Hysteresis low threshold");
    convert->add_option("--high", conv.high, "Hysteresis high threshold");
    convert->add_option("--line-threshold", conv.line_threshold, "Hough line vote threshold");
    convert->add_option("--min-length", conv.min_length, "Minimum segment length");
    convert->add_option("--max-gap", conv.max_gap, "Largest gap bridged inside a segment");
    convert->add_option("--r-min", conv.r_min, "Smallest circle radius");
    convert->add_option("--r-max", conv.r_max, "Largest circle radius");
    convert->add_option("--circle-threshold", conv.circle_threshold, "Circle votes as a fraction of 2*pi*r");
    convert->get_option("--ocr-cmd")->excludes("--ocr-fixture");

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Render a synthetic drawing with ground truth");
    gen_cmd->add_option("--spec", gen.spec, "Generator spec (JSON)");
    gen_cmd->add_option("--seed", gen.seed, "Random seed");
    gen_cmd->add_option("--out", gen.out, "Output directory")->required();
    gen_cmd->add_flag("--demo", gen.demo, "Write the packaged demo scene with sidecars instead");

    EvalOptions ev;
    auto* eval_cmd = app.add_subcommand("eval", "Score extracted CSVs against ground truth");
    eval_cmd->add_option("--truth", ev.truth, "truth.json or a directory containing it")->required();
    eval_cmd->add_option("--pred", ev.pred, "Directory holding the extracted CSVs")->required();
    eval_cmd->add_option("--out", ev.out, "Write report.txt and report.json here");

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "Generate, extract and score a synthetic corpus");
    bench_cmd->add_option("--spec", bench.spec, "Generator spec (JSON); default 1-5 circles");
    bench_cmd->add_option("--config", bench.config, "Pipeline config (JSON)");
    bench_cmd->add_option("-n,--images", bench.images, "Number of images");
    bench_cmd->add_option("--seed", bench.seed, "First seed");
    bench_cmd->add_option("--threads", bench.threads, "Images processed in parallel")->check(CLI::PositiveNumber);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        const auto* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
        err << sub->help();
        return kUsage;
    }

    try {
        if (convert->parsed()) {
            return run_convert(conv, out, err);
        }
        if (gen_cmd->parsed()) {
            return run_gen(gen, out);
        }
        if (eval_cmd->parsed()) {
            return run_eval(ev, out);
        }
        return run_bench(bench, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return exit_code_for(e.code());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kOutput;
    }
}

}  // namespace draftvec::cli
