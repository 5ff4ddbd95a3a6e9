// vosedge: color edge detection via vector order statistics, the five
// traditional grayscale detectors, synthetic test images and PFOM scoring.
//
// Subcommands: detect, compare, synth, eval. Exit codes: 0 success,
// 1 user/input error, 2 internal invariant violation.

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "vosedge/baselines.hpp"
#include "vosedge/eval.hpp"
#include "vosedge/image.hpp"
#include "vosedge/image_io.hpp"
#include "vosedge/vos.hpp"

namespace {

using namespace vosedge;

// Reference PFOM values reported for this method's original evaluation image
// (shown for context in compare reports; that image and its ground truth are
// not distributed, so they are never asserted against local runs).
struct ReferenceScore {
    const char* name;
    double pfom;
};
constexpr ReferenceScore kReferenceScores[] = {
    {"sobel", 0.4209},   {"prewitt", 0.4195}, {"roberts", 0.4181},
    {"laplacian", 0.7048}, {"canny", 0.8472},   {"vos", 0.8480},
};

BorderPolicy parse_border(const std::string& name) {
    if (name == "replicate") return BorderPolicy::Replicate;
    if (name == "reflect") return BorderPolicy::Reflect;
    if (name == "zero") return BorderPolicy::ZeroPad;
    throw CLI::ValidationError("--border", "must be replicate, reflect or zero");
}

int parse_workers(const std::string& value) {
    if (value == "auto") return 0;
    try {
        const int n = std::stoi(value);
        if (n >= 1) return n;
    } catch (const std::exception&) {
    }
    throw CLI::ValidationError("--workers", "must be a positive integer or 'auto'");
}

PixelVector parse_color(const std::string& value) {
    int r, g, b;
    if (std::sscanf(value.c_str(), "%d,%d,%d", &r, &g, &b) != 3 || r < 0 || r > 255 || g < 0 ||
        g > 255 || b < 0 || b > 255) {
        throw CLI::ValidationError("color", "expected r,g,b with each channel in 0..255");
    }
    return {static_cast<std::uint8_t>(r), static_cast<std::uint8_t>(g),
            static_cast<std::uint8_t>(b)};
}

struct DetectOptions {
    std::string input;
    std::string output = "edges.png";
    std::string algo = "vos";
    double threshold = 0.2;
    double sigma = 1.0;
    double low = 0.10;
    double high = 0.25;
    std::string border = "replicate";
    bool strict_nms = true;
    bool zero_mean_masks = false;
    std::string workers = "1";
};

int run_detect(const DetectOptions& opt) {
    const ColorImage img = load_image(opt.input);
    const BorderPolicy border = parse_border(opt.border);
    const int workers = parse_workers(opt.workers);

    EdgeMap edges;
    if (opt.algo == "vos") {
        VosParams params;
        params.threshold = opt.threshold;
        params.border = border;
        params.strict_nms = opt.strict_nms;
        params.zero_mean_masks = opt.zero_mean_masks;
        edges = detect_edges(img, params, workers);
    } else if (opt.algo == "sobel" || opt.algo == "prewitt" || opt.algo == "roberts") {
        const BaselineKind kind = opt.algo == "sobel"
                                      ? BaselineKind::Sobel
                                      : (opt.algo == "prewitt" ? BaselineKind::Prewitt
                                                               : BaselineKind::Roberts);
        edges = gradient_baseline(to_grayscale(img), kind, opt.threshold, border, workers);
    } else if (opt.algo == "laplacian") {
        edges = laplacian_baseline(to_grayscale(img), opt.threshold, border, workers);
    } else if (opt.algo == "canny") {
        CannyParams params{opt.sigma, opt.low, opt.high};
        edges = canny_baseline(to_grayscale(img), params, border, workers);
    } else {
        throw CLI::ValidationError("--algo", "unknown detector '" + opt.algo + "'");
    }

    save_image(edges, opt.output);
    std::cout << count_edges(edges) << "\n";
    return 0;
}

struct CompareOptions {
    std::string input;
    std::string truth;
    std::string csv_path = "pfom.csv";
    std::string json_path = "pfom.json";
    bool include_oracle = false;
    double m = 1.0 / 9.0;
    double vos_threshold = 0.2;
    double baseline_threshold = 0.2;
    double sigma = 1.0;
    double low = 0.10;
    double high = 0.25;
    std::string border = "replicate";
    bool strict_nms = true;
    bool zero_mean_masks = false;
    std::string workers = "1";
};

int run_compare(const CompareOptions& opt) {
    const ColorImage img = load_image(opt.input);
    const EdgeMap truth = load_edge_map(opt.truth);
    const int workers = parse_workers(opt.workers);

    VosParams vos_params;
    vos_params.threshold = opt.vos_threshold;
    vos_params.border = parse_border(opt.border);
    vos_params.strict_nms = opt.strict_nms;
    vos_params.zero_mean_masks = opt.zero_mean_masks;
    CannyParams canny_params{opt.sigma, opt.low, opt.high};

    std::vector<DetectorConfig> configs;
    if (opt.include_oracle) {
        configs.push_back({"oracle", [&truth](const ColorImage&) { return truth; }});
    }
    for (auto& cfg :
         default_detector_suite(vos_params, opt.baseline_threshold, canny_params, workers)) {
        configs.push_back(std::move(cfg));
    }

    const auto rows = compare_detectors(img, truth, configs, opt.m);

    if (!opt.csv_path.empty()) {
        std::ofstream csv(opt.csv_path);
        if (!csv) throw IoError(opt.csv_path + ": cannot open for writing");
        csv << comparison_csv(rows);
    }
    if (!opt.json_path.empty()) {
        std::ofstream json(opt.json_path);
        if (!json) throw IoError(opt.json_path + ": cannot open for writing");
        json << comparison_json(rows);
    }

    auto ranked = rows;
    std::stable_sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.result.score > b.result.score;
    });
    std::printf("%-4s %-10s %8s %9s %11s\n", "rank", "name", "pfom", "n_actual", "n_detected");
    for (std::size_t i = 0; i < ranked.size(); ++i) {
        std::printf("%-4zu %-10s %8.4f %9lld %11lld\n", i + 1, ranked[i].name.c_str(),
                    ranked[i].result.score, static_cast<long long>(ranked[i].result.n_actual),
                    static_cast<long long>(ranked[i].result.n_detected));
    }
    std::printf("\nreference PFOM values from the method's original evaluation image\n"
                "(different input and ground truth; shown for context only):\n");
    for (const auto& ref : kReferenceScores) {
        std::printf("  %-10s %.4f\n", ref.name, ref.pfom);
    }
    return 0;
}

struct SynthOptions {
    std::string profile;
    std::string orientation = "vertical";
    int size = 64;
    int width = 0;
    int height = 0;
    std::string color_a = "0,0,0";
    std::string color_b = "255,255,255";
    int transition = 1;
    double noise = 0.0;
    std::uint64_t seed = 0;
    std::string output = "synth.png";
    std::string truth_output;
};

int run_synth(const SynthOptions& opt) {
    SyntheticSpec spec;
    if (opt.profile == "step") spec.profile = EdgeProfile::Step;
    else if (opt.profile == "ramp") spec.profile = EdgeProfile::Ramp;
    else if (opt.profile == "roof") spec.profile = EdgeProfile::Roof;
    else if (opt.profile == "ridge") spec.profile = EdgeProfile::Ridge;
    else throw CLI::ValidationError("--profile", "must be step, ramp, roof or ridge");

    if (opt.orientation == "vertical") spec.orientation = Orientation::Vertical;
    else if (opt.orientation == "horizontal") spec.orientation = Orientation::Horizontal;
    else throw CLI::ValidationError("--orientation", "must be vertical or horizontal");

    spec.width = opt.width > 0 ? opt.width : opt.size;
    spec.height = opt.height > 0 ? opt.height : opt.size;
    spec.color_a = parse_color(opt.color_a);
    spec.color_b = parse_color(opt.color_b);
    spec.transition_width = opt.transition;
    spec.noise_sigma = opt.noise;
    spec.seed = opt.seed;

    std::string truth_path = opt.truth_output;
    if (truth_path.empty()) {
        std::filesystem::path p(opt.output);
        const std::string ext = p.extension().string();
        p.replace_extension();
        truth_path = p.string() + "_truth" + (ext.empty() ? ".png" : ext);
    }

    const SyntheticImage synth = generate_synthetic(spec);
    save_image(synth.image, opt.output);
    save_image(synth.truth, truth_path);
    std::cout << opt.output << "\n" << truth_path << "\n";
    return 0;
}

struct EvalOptions {
    std::string detected;
    std::string truth;
    double m = 1.0 / 9.0;
    bool json = false;
};

int run_eval(const EvalOptions& opt) {
    const EdgeMap detected = load_edge_map(opt.detected);
    const EdgeMap truth = load_edge_map(opt.truth);
    const PfomResult res = pfom(detected, truth, opt.m);
    if (opt.json) {
        nlohmann::json out = {{"r", res.score},
                              {"n_actual", res.n_actual},
                              {"n_detected", res.n_detected},
                              {"m", res.m}};
        std::cout << out.dump(2) << "\n";
    } else {
        std::printf("R %.9f\nN_I %lld\nN_A %lld\n", res.score,
                    static_cast<long long>(res.n_actual),
                    static_cast<long long>(res.n_detected));
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Color edge detection via vector order statistics, with grayscale "
                 "baselines, synthetic fixtures and PFOM evaluation"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_config("--config", "", "Read options from a key=value file (flags override it)");

    DetectOptions detect_opt;
    auto* detect = app.add_subcommand("detect", "Run one detector and write its edge map");
    detect->add_option("input", detect_opt.input, "Input image (PNG/PPM/PGM)")->required();
    detect->add_option("-o,--out", detect_opt.output, "Output edge map path");
    detect->add_option("--algo", detect_opt.algo,
                       "Detector: vos, sobel, prewitt, roberts, laplacian, canny")
        ->check(CLI::IsMember({"vos", "sobel", "prewitt", "roberts", "laplacian", "canny"}));
    detect->add_option("--threshold", detect_opt.threshold,
                       "Fraction-of-max threshold for vos and gradient/laplacian baselines")
        ->check(CLI::Range(0.0, 1.0));
    detect->add_option("--sigma", detect_opt.sigma, "Canny Gaussian sigma");
    detect->add_option("--low", detect_opt.low, "Canny low ratio");
    detect->add_option("--high", detect_opt.high, "Canny high ratio");
    detect->add_option("--border", detect_opt.border, "Border policy: replicate, reflect, zero");
    detect->add_option("--strict-nms", detect_opt.strict_nms,
                       "Strict non-maximum suppression (true/false)");
    detect->add_flag("--zero-mean-masks", detect_opt.zero_mean_masks,
                     "Subtract the mean coefficient from the gradient masks");
    detect->add_option("--workers", detect_opt.workers, "Worker threads (positive int or 'auto')");

    CompareOptions compare_opt;
    auto* compare = app.add_subcommand(
        "compare", "Run all detectors against a ground truth and rank them by PFOM");
    compare->add_option("input", compare_opt.input, "Input image")->required();
    compare->add_option("--truth", compare_opt.truth, "Ground-truth edge map")->required();
    compare->add_option("--csv", compare_opt.csv_path, "CSV table output path");
    compare->add_option("--json", compare_opt.json_path, "JSON table output path");
    compare->add_flag("--include-oracle", compare_opt.include_oracle,
                      "Add a row that scores the truth against itself");
    compare->add_option("--m", compare_opt.m, "PFOM scaling constant")->check(CLI::Range(0.0, 1e9));
    compare->add_option("--threshold", compare_opt.vos_threshold, "VOS threshold")
        ->check(CLI::Range(0.0, 1.0));
    compare->add_option("--baseline-threshold", compare_opt.baseline_threshold,
                        "Sobel/Prewitt/Roberts/Laplacian threshold")
        ->check(CLI::Range(0.0, 1.0));
    compare->add_option("--sigma", compare_opt.sigma, "Canny Gaussian sigma");
    compare->add_option("--low", compare_opt.low, "Canny low ratio");
    compare->add_option("--high", compare_opt.high, "Canny high ratio");
    compare->add_option("--border", compare_opt.border, "Border policy");
    compare->add_option("--strict-nms", compare_opt.strict_nms, "Strict NMS (true/false)");
    compare->add_flag("--zero-mean-masks", compare_opt.zero_mean_masks,
                      "Subtract the mean coefficient from the gradient masks");
    compare->add_option("--workers", compare_opt.workers, "Worker threads");

    SynthOptions synth_opt;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic image and its ground truth");
    synth->add_option("--profile", synth_opt.profile, "Edge profile: step, ramp, roof, ridge")
        ->required();
    synth->add_option("--orientation", synth_opt.orientation, "vertical or horizontal");
    synth->add_option("--size", synth_opt.size, "Square image size")->check(CLI::Range(2, 1 << 16));
    synth->add_option("--width", synth_opt.width, "Image width (overrides --size)");
    synth->add_option("--height", synth_opt.height, "Image height (overrides --size)");
    synth->add_option("--color-a", synth_opt.color_a, "First color as r,g,b");
    synth->add_option("--color-b", synth_opt.color_b, "Second color as r,g,b");
    synth->add_option("--transition", synth_opt.transition, "Transition band width in pixels");
    synth->add_option("--noise", synth_opt.noise, "Gaussian noise sigma per channel")
        ->check(CLI::Range(0.0, 1e6));
    synth->add_option("--seed", synth_opt.seed, "Noise seed");
    synth->add_option("-o,--out", synth_opt.output, "Image output path");
    synth->add_option("--truth-out", synth_opt.truth_output,
                      "Truth output path (default: <out>_truth.<ext>)");

    EvalOptions eval_opt;
    auto* eval = app.add_subcommand("eval", "Score a detected edge map against a ground truth");
    eval->add_option("detected", eval_opt.detected, "Detected edge map")->required();
    eval->add_option("truth", eval_opt.truth, "Ground-truth edge map")->required();
    eval->add_option("--m", eval_opt.m, "PFOM scaling constant")->check(CLI::Range(0.0, 1e9));
    eval->add_flag("--json", eval_opt.json, "Emit JSON instead of plain text");

    try {
        app.parse(argc, argv);
        if (detect->parsed()) return run_detect(detect_opt);
        if (compare->parsed()) return run_compare(compare_opt);
        if (synth->parsed()) return run_synth(synth_opt);
        if (eval->parsed()) return run_eval(eval_opt);
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const std::logic_error& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
