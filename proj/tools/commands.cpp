#include "commands.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <map>
#include <memory>

#include <CLI11.hpp>
#include <json.hpp>

#include "botd/eval.hpp"
#include "botd/losses.hpp"
#include "render.hpp"

namespace botd::cli {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

void emit(const std::string& path, const std::string& content)
{
    if (path.empty())
        std::fwrite(content.data(), 1, content.size(), stdout);
    else
        write_text_file(path, content);
}

void emit_json(const std::string& path, const Json& j)
{
    emit(path, j.dump(2) + "\n");
}

Json coordinate(double v)
{
    if (v == std::floor(v) && std::abs(v) < 1e15)
        return static_cast<std::int64_t>(v);
    return v;
}

// Flat [x1, y1, x2, y2, ...], integral values as JSON integers.
Json polygon_json(const Polygon& poly)
{
    Json out = Json::array();
    for (const auto& v : poly.vertices) {
        out.push_back(coordinate(v.x));
        out.push_back(coordinate(v.y));
    }
    return out;
}

Polygon polygon_from_json(const nlohmann::json& j)
{
    if (j.size() % 2 != 0)
        throw ParseError(0, "polygon with an odd number of coordinates");
    Polygon poly;
    for (std::size_t i = 0; i < j.size(); i += 2)
        poly.vertices.push_back({j.at(i).get<double>(), j.at(i + 1).get<double>()});
    return poly;
}

std::string csv_number(double v)
{
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

// Runs body(i) for i in [0, n) on the OpenMP team; rethrows the failure of the lowest index.
template <class F>
void parallel_for(std::size_t n, F body)
{
    std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t i = 0; i < n; ++i) {
        try {
            body(i);
        } catch (...) {
            errors[i] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e)
            std::rethrow_exception(e);
}

nlohmann::json read_json(const fs::path& path)
{
    try {
        return nlohmann::json::parse(read_text_file(path));
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(0, path.string() + ": " + e.what());
    }
}

PmdAggregation parse_aggregation(const std::string& name)
{
    if (name == "mean")
        return PmdAggregation::mean;
    if (name == "median")
        return PmdAggregation::median;
    throw InvalidArgument("unknown PMD aggregation: " + name);
}

struct LabelEntry {
    std::string name;
    int width = 0;
    int height = 0;
    fs::path cls;
    fs::path reg;
};

std::vector<LabelEntry> read_label_manifest(const fs::path& path)
{
    const auto j = read_json(path);
    const auto base = path.parent_path();
    std::vector<LabelEntry> out;
    for (const auto& e : j.at("images"))
        out.push_back({e.at("name").get<std::string>(), e.at("width").get<int>(), e.at("height").get<int>(),
                       base / e.at("cls").get<std::string>(), base / e.at("reg").get<std::string>()});
    return out;
}

LabelMaps load_label_maps(const LabelEntry& e)
{
    LabelMaps maps{read_pgm(e.cls), read_float_raster(e.reg)};
    if (!maps.cls.same_shape(maps.reg) || maps.cls.width() != e.width || maps.cls.height() != e.height)
        throw ShapeMismatch();
    return maps;
}

std::vector<LabelMaps> synthetic_label_maps(const SynthOptions& opts, double cm_scale)
{
    const auto data = synth_dataset(opts);
    std::vector<LabelMaps> maps(data.size());
    parallel_for(data.size(), [&](std::size_t i) {
        std::vector<InstanceLabel> labels;
        for (const auto& inst : data[i].instances)
            labels.push_back(make_instance_label(inst.polygon, data[i].width, data[i].height, cm_scale));
        maps[i] = render_label_maps(labels, data[i].width, data[i].height);
    });
    return maps;
}

void add_synth(CLI::App& app, GlobalOptions& global, std::function<int()>& action)
{
    struct Args {
        std::string kind = "ribbons";
        std::size_t count = 10;
        int size = 640;
        std::size_t instances = 1;
        bool adhesion = false;
        std::string out;
    };
    auto args = std::make_shared<Args>();
    auto* cmd = app.add_subcommand("synth", "Write a deterministic synthetic dataset with a manifest.json");
    cmd->add_option("--kind", args->kind, "squares | disks | convex | ribbons")->capture_default_str();
    cmd->add_option("--count", args->count, "Images")->capture_default_str();
    cmd->add_option("--size", args->size, "Square image side in pixels")->capture_default_str();
    cmd->add_option("--instances", args->instances, "Instances per image")->capture_default_str();
    cmd->add_flag("--adhesion-pairs", args->adhesion, "Place instances in pairs 2 px apart");
    cmd->add_option("--out", args->out, "Output directory")->required();
    cmd->callback([&, args] {
        action = [&, args] {
            SynthOptions opts;
            opts.seed = global.seed;
            opts.kind = parse_synth_kind(args->kind);
            opts.count = args->count;
            opts.size = args->size;
            opts.instances_per_image = args->instances;
            opts.adhesion_pairs = args->adhesion;
            write_dataset(args->out, synth_dataset(opts));
            return 0;
        };
    });
}

void add_labelgen(CLI::App& app, std::function<int()>& action)
{
    struct Args {
        std::string dataset;
        double cm_scale = 0.5;
        std::string out;
    };
    auto args = std::make_shared<Args>();
    auto* cmd = app.add_subcommand("labelgen", "Derive CM/PMD label maps for every image of a dataset");
    cmd->add_option("--dataset", args->dataset, "Dataset manifest.json")->required();
    cmd->add_option("--cm-scale", args->cm_scale, "CM scale s, erosion radius (1 - s) * PMD")->capture_default_str();
    cmd->add_option("--out", args->out, "Output directory")->required();
    cmd->callback([&, args] {
        action = [args] {
            check_cm_scale(args->cm_scale);
            const auto data = read_dataset(args->dataset);
            const fs::path out = args->out;
            fs::create_directories(out);
            parallel_for(data.size(), [&](std::size_t i) {
                const auto& img = data[i];
                std::vector<InstanceLabel> labels;
                Json instances = Json::array();
                std::size_t skipped = 0;
                for (const auto& inst : img.instances) {
                    if (!inst.care)
                        continue;
                    try {
                        labels.push_back(make_instance_label(inst.polygon, img.width, img.height, args->cm_scale));
                    } catch (const EmptyMask&) {
                        ++skipped;
                        continue;
                    } catch (const DegeneratePolygon&) {
                        ++skipped;
                        continue;
                    }
                    const auto& l = labels.back();
                    instances.push_back({{"center", {coordinate(l.center.x), coordinate(l.center.y)}},
                                         {"pmd", l.pmd},
                                         {"cm_scale", l.cm_scale},
                                         {"cm_area", l.cm.count()},
                                         {"polygon", polygon_json(inst.polygon)}});
                }
                const auto maps = render_label_maps(labels, img.width, img.height);
                write_pgm(out / (img.name + "_cls.pgm"), maps.cls);
                write_float_raster(out / (img.name + "_reg.bin"), maps.reg);
                const Json sidecar = {{"name", img.name},
                                      {"width", img.width},
                                      {"height", img.height},
                                      {"skipped", skipped},
                                      {"instances", instances}};
                emit_json((out / (img.name + "_labels.json")).string(), sidecar);
            });
            Json manifest = {{"cm_scale", args->cm_scale}, {"images", Json::array()}};
            for (const auto& img : data)
                manifest["images"].push_back({{"name", img.name},
                                              {"width", img.width},
                                              {"height", img.height},
                                              {"cls", img.name + "_cls.pgm"},
                                              {"reg", img.name + "_reg.bin"},
                                              {"instances", img.name + "_labels.json"}});
            emit_json((out / "labels.json").string(), manifest);
            return 0;
        };
    });
}

void add_decode(CLI::App& app, std::function<int()>& action)
{
    struct Args {
        std::string labels, cls, reg, name;
        DecodeOptions options;
        std::string aggregation = "mean";
        std::string out;
        std::string timing;
    };
    auto args = std::make_shared<Args>();
    auto* cmd = app.add_subcommand("decode", "Reconstruct text polygons from cls/reg maps");
    auto* labels = cmd->add_option("--labels", args->labels, "labels.json written by labelgen");
    auto* cls = cmd->add_option("--cls", args->cls, "Single cls map (PGM, probability = byte / maxval)")
                    ->excludes(labels);
    auto* reg = cmd->add_option("--reg", args->reg, "Single reg map (float raster)")
                    ->excludes(labels);
    cls->needs(reg);
    reg->needs(cls);
    cmd->add_option("--name", args->name, "Image name for --cls/--reg input (default: cls file stem)");
    cmd->add_option("--cm-scale", args->options.cm_scale, "CM scale used at label time")->capture_default_str();
    cmd->add_option("--bin-threshold", args->options.bin_threshold, "cls > threshold is foreground")
        ->capture_default_str();
    cmd->add_option("--min-area", args->options.min_area, "Drop components smaller than this (px^2)")
        ->capture_default_str();
    cmd->add_option("--aggregation", args->aggregation, "PMD per component: mean | median")->capture_default_str();
    cmd->add_option("--out", args->out, "Output directory")->required();
    cmd->add_option("--timing", args->timing, "Also write per-image stage timings (JSON) here");
    cmd->callback([&, args] {
        action = [args] {
            args->options.aggregation = parse_aggregation(args->aggregation);
            check_cm_scale(args->options.cm_scale);
            std::vector<LabelEntry> entries;
            if (!args->labels.empty()) {
                entries = read_label_manifest(args->labels);
            } else if (!args->cls.empty()) {
                const auto name = args->name.empty() ? fs::path(args->cls).stem().string() : args->name;
                entries.push_back({name, 0, 0, args->cls, args->reg});
            } else {
                throw InvalidArgument("decode needs --labels or --cls with --reg");
            }

            const fs::path out = args->out;
            fs::create_directories(out);
            std::vector<DecodeResult> results(entries.size());
            std::vector<std::pair<int, int>> sizes(entries.size());
            parallel_for(entries.size(), [&](std::size_t i) {
                auto& e = entries[i];
                const auto cls = read_pgm_probability(e.cls);
                const auto reg = read_float_raster(e.reg);
                if (e.width != 0 && (cls.width() != e.width || cls.height() != e.height))
                    throw ShapeMismatch();
                sizes[i] = {cls.width(), cls.height()};
                results[i] = decode(cls, reg, args->options);
                std::vector<Polygon> polys;
                for (const auto& d : results[i].detections)
                    polys.push_back(d.polygon);
                write_text_file(out / (e.name + ".txt"), write_polygons(polys));
            });

            Json manifest = {{"cm_scale", args->options.cm_scale},
                             {"bin_threshold", args->options.bin_threshold},
                             {"min_area", args->options.min_area},
                             {"aggregation", args->aggregation},
                             {"images", Json::array()}};
            Json timing = Json::array();
            for (std::size_t i = 0; i < entries.size(); ++i) {
                Json dets = Json::array();
                for (const auto& d : results[i].detections)
                    dets.push_back({{"score", d.score}, {"pmd", d.pmd}, {"polygon", polygon_json(d.polygon)}});
                manifest["images"].push_back({{"name", entries[i].name},
                                              {"width", sizes[i].first},
                                              {"height", sizes[i].second},
                                              {"polygons", entries[i].name + ".txt"},
                                              {"detections", dets}});
                const auto& t = results[i].timing;
                timing.push_back({{"name", entries[i].name},
                                  {"binarize_ms", t.binarize},
                                  {"components_ms", t.components},
                                  {"bolding_ms", t.bolding},
                                  {"tracing_ms", t.tracing},
                                  {"total_ms", t.total()}});
            }
            emit_json((out / "detections.json").string(), manifest);
            if (!args->timing.empty())
                emit_json(args->timing, timing);
            return 0;
        };
    });
}

void add_eval(CLI::App& app, std::function<int()>& action)
{
    struct Args {
        std::string dataset, detections;
        double iou = 0.5;
        std::string out, csv;
    };
    auto args = std::make_shared<Args>();
    auto* cmd = app.add_subcommand("eval", "Precision / recall / F-measure of detections against a dataset");
    cmd->add_option("--dataset", args->dataset, "Dataset manifest.json")->required();
    cmd->add_option("--detections", args->detections, "detections.json written by decode")
        ->required();
    cmd->add_option("--iou-threshold", args->iou, "Mask IoU needed for a match")->capture_default_str();
    cmd->add_option("--out", args->out, "JSON report (default: stdout)");
    cmd->add_option("--csv", args->csv, "Per-image CSV table");
    cmd->callback([&, args] {
        action = [args] {
            const auto data = read_dataset(args->dataset);
            const auto det = read_json(args->detections);
            std::map<std::string, std::vector<ScoredPolygon>> preds;
            for (const auto& img : det.at("images")) {
                auto& list = preds[img.at("name").get<std::string>()];
                for (const auto& d : img.at("detections"))
                    list.push_back({polygon_from_json(d.at("polygon")), d.at("score").get<double>()});
            }
            std::vector<ImageMatch> per_image(data.size());
            parallel_for(data.size(), [&](std::size_t i) {
                const auto& img = data[i];
                std::vector<GroundTruthPolygon> gts;
                for (const auto& inst : img.instances)
                    gts.push_back({inst.polygon, inst.care});
                const auto it = preds.find(img.name);
                per_image[i] = match_detections(it == preds.end() ? std::vector<ScoredPolygon>{} : it->second, gts,
                                                img.width, img.height, args->iou);
            });
            const auto report = summarize(per_image);

            Json j = {{"iou_threshold", args->iou},
                      {"precision", report.precision},
                      {"recall", report.recall},
                      {"f_measure", report.f_measure},
                      {"zero_division", "0/0 counts as 1 for precision and recall"},
                      {"images", Json::array()}};
            std::string csv = "name,true_positives,false_positives,false_negatives,discarded\n";
            for (std::size_t i = 0; i < data.size(); ++i) {
                const auto& m = per_image[i];
                j["images"].push_back({{"name", data[i].name},
                                       {"true_positives", m.true_positives},
                                       {"false_positives", m.false_positives},
                                       {"false_negatives", m.false_negatives},
                                       {"discarded", m.discarded}});
                csv += data[i].name + "," + std::to_string(m.true_positives) + "," +
                       std::to_string(m.false_positives) + "," + std::to_string(m.false_negatives) + "," +
                       std::to_string(m.discarded) + "\n";
            }
            emit_json(args->out, j);
            if (!args->csv.empty())
                emit(args->csv, csv);
            return 0;
        };
    });
}

void add_upper_iou(CLI::App& app, std::function<int()>& action)
{
    struct Args {
        std::string dataset;
        std::string image_scales = "160,320,640,1280";
        std::string cm_scales = "0.1:0.9:0.2";
        UpperIoUStudyOptions options;
        std::string out, csv;
    };
    auto args = std::make_shared<Args>();
    auto* cmd = app.add_subcommand("upper-iou", "Mean upper IoU over image scales and CM scales");
    cmd->add_option("--dataset", args->dataset, "Dataset manifest.json")->required();
    cmd->add_option("--image-scales", args->image_scales, "Short-side scales, list or start:stop:step")
        ->capture_default_str();
    cmd->add_option("--cm-scales", args->cm_scales, "CM scales, list or start:stop:step")->capture_default_str();
    cmd->add_option("--fixed-cm-scale", args->options.fixed_cm_scale, "CM scale while sweeping image scale")
        ->capture_default_str();
    cmd->add_option("--fixed-image-scale", args->options.fixed_image_scale, "Image scale while sweeping CM scale")
        ->capture_default_str();
    cmd->add_option("--out", args->out, "JSON report (default: stdout)");
    cmd->add_option("--csv", args->csv, "CSV table: axis,scale,mean_upper_iou");
    cmd->callback([&, args] {
        action = [args] {
            const auto image_scales = parse_scale_list(args->image_scales);
            const auto cm_scales = parse_scale_list(args->cm_scales);
            const auto study = upper_iou_study(read_dataset(args->dataset), image_scales, cm_scales, args->options);
            Json j = {{"instances", study.by_image_scale.instances},
                      {"fixed_cm_scale", args->options.fixed_cm_scale},
                      {"fixed_image_scale", args->options.fixed_image_scale}};
            std::string csv = "axis,scale,mean_upper_iou\n";
            for (const auto* r : {&study.by_image_scale, &study.by_cm_scale}) {
                Json rows = Json::array();
                for (std::size_t i = 0; i < r->axis.size(); ++i) {
                    rows.push_back({{"scale", r->axis[i]}, {"mean_upper_iou", r->iou[i]}});
                    csv += r->axis_name + "," + csv_number(r->axis[i]) + "," + csv_number(r->iou[i]) + "\n";
                }
                j[r->axis_name] = rows;
            }
            emit_json(args->out, j);
            if (!args->csv.empty())
                emit(args->csv, csv);
            return 0;
        };
    });
}

void add_loss_check(CLI::App& app, GlobalOptions& global, std::function<int()>& action)
{
    struct Args {
        std::string out, csv;
    };
    auto args = std::make_shared<Args>();
    auto* cmd = app.add_subcommand("loss-check", "Exactness, gradient and scale-invariance suites of the losses");
    cmd->add_option("--out", args->out, "JSON report (default: stdout)");
    cmd->add_option("--csv", args->csv, "CSV table, one row per check");
    cmd->callback([&, args] {
        action = [&, args] {
            const auto checks = run_loss_checks(global.seed);
            bool all = true;
            Json rows = Json::array();
            std::string csv = "name,passed,worst,tolerance,samples\n";
            for (const auto& c : checks) {
                all = all && c.passed;
                rows.push_back({{"name", c.name},
                                {"passed", c.passed},
                                {"worst", c.worst},
                                {"tolerance", c.tolerance},
                                {"samples", c.samples}});
                csv += c.name + "," + (c.passed ? "true" : "false") + "," + csv_number(c.worst) + "," +
                       csv_number(c.tolerance) + "," + std::to_string(c.samples) + "\n";
            }
            emit_json(args->out, Json{{"seed", global.seed}, {"passed", all}, {"checks", rows}});
            if (!args->csv.empty())
                emit(args->csv, csv);
            return all ? 0 : 1;
        };
    });
}

void add_bench(CLI::App& app, GlobalOptions& global, std::function<int()>& action)
{
    struct Args {
        std::string labels;
        std::size_t count = 50;
        std::size_t instances = 10;
        int size = 640;
        std::string kind = "ribbons";
        double cm_scale = 0.5;
        std::size_t repetitions = 5;
        std::string out, csv;
    };
    auto args = std::make_shared<Args>();
    auto* cmd = app.add_subcommand("bench", "Per-stage decode timings");
    auto* labels = cmd->add_option("--labels", args->labels, "labels.json to time (default: synthesize maps)");
    cmd->add_option("--count", args->count, "Synthetic images")->capture_default_str()->excludes(labels);
    cmd->add_option("--instances", args->instances, "Synthetic instances per image")
        ->capture_default_str()
        ->excludes(labels);
    cmd->add_option("--size", args->size, "Synthetic image side")->capture_default_str()->excludes(labels);
    cmd->add_option("--kind", args->kind, "Synthetic shape kind")->capture_default_str()->excludes(labels);
    cmd->add_option("--cm-scale", args->cm_scale, "CM scale")->capture_default_str();
    cmd->add_option("--repetitions", args->repetitions, "Decode runs per image")->capture_default_str();
    cmd->add_option("--out", args->out, "JSON report (default: stdout)");
    cmd->add_option("--csv", args->csv, "CSV table: stage,median_ms,p95_ms,samples");
    cmd->callback([&, args] {
        action = [&, args] {
            check_cm_scale(args->cm_scale);
            std::vector<LabelMaps> maps;
            if (!args->labels.empty()) {
                const auto entries = read_label_manifest(args->labels);
                maps.resize(entries.size());
                parallel_for(entries.size(), [&](std::size_t i) { maps[i] = load_label_maps(entries[i]); });
            } else {
                SynthOptions opts;
                opts.seed = global.seed;
                opts.count = args->count;
                opts.instances_per_image = args->instances;
                opts.size = args->size;
                opts.kind = parse_synth_kind(args->kind);
                maps = synthetic_label_maps(opts, args->cm_scale);
            }
            const auto report = bench_decode(maps, args->cm_scale, args->repetitions, global.jobs);
            Json stages = Json::array();
            std::string csv = "stage,median_ms,p95_ms,samples\n";
            for (const auto& s : report.stages) {
                stages.push_back(
                    {{"stage", s.stage}, {"median_ms", s.median_ms}, {"p95_ms", s.p95_ms}, {"samples", s.samples}});
                csv += s.stage + "," + csv_number(s.median_ms) + "," + csv_number(s.p95_ms) + "," +
                       std::to_string(s.samples) + "\n";
            }
            emit_json(args->out, Json{{"images", report.images},
                                      {"repetitions", report.repetitions},
                                      {"threads", report.threads},
                                      {"median_decode_ms", report.median_decode_ms},
                                      {"p95_decode_ms", report.p95_decode_ms},
                                      {"stages", stages}});
            if (!args->csv.empty())
                emit(args->csv, csv);
            return 0;
        };
    });
}

void add_render(CLI::App& app, std::function<int()>& action)
{
    struct Args {
        std::string dataset, image;
        double cm_scale = 0.5;
        std::string out;
    };
    auto args = std::make_shared<Args>();
    auto* cmd = app.add_subcommand("render", "PPM overlays of text outline, CM, PMD and reconstruction");
    cmd->add_option("--dataset", args->dataset, "Dataset manifest.json")->required();
    cmd->add_option("--image", args->image, "Only this image (default: all)");
    cmd->add_option("--cm-scale", args->cm_scale, "CM scale")->capture_default_str();
    cmd->add_option("--out", args->out, "Output directory")->required();
    cmd->callback([&, args] {
        action = [args] {
            check_cm_scale(args->cm_scale);
            auto data = read_dataset(args->dataset);
            if (!args->image.empty()) {
                std::erase_if(data, [&](const AnnotatedImage& img) { return img.name != args->image; });
                if (data.empty())
                    throw InvalidArgument("no image named " + args->image);
            }
            const fs::path out = args->out;
            fs::create_directories(out);
            parallel_for(data.size(), [&](std::size_t i) {
                write_text_file(out / (data[i].name + ".ppm"), render_overlay(data[i], args->cm_scale));
            });
            return 0;
        };
    });
}

}  // namespace

std::vector<double> parse_scale_list(const std::string& text)
{
    auto number = [&](std::string_view s) {
        while (!s.empty() && s.front() == ' ')
            s.remove_prefix(1);
        while (!s.empty() && s.back() == ' ')
            s.remove_suffix(1);
        double v = 0.0;
        const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || end != s.data() + s.size() || s.empty())
            throw InvalidArgument("bad scale list: " + text);
        return v;
    };

    std::vector<double> out;
    if (const auto c1 = text.find(':'); c1 != std::string::npos) {
        const auto c2 = text.find(':', c1 + 1);
        if (c2 == std::string::npos)
            throw InvalidArgument("range needs start:stop:step: " + text);
        const double start = number(std::string_view(text).substr(0, c1));
        const double stop = number(std::string_view(text).substr(c1 + 1, c2 - c1 - 1));
        const double step = number(std::string_view(text).substr(c2 + 1));
        if (!(step > 0.0) || stop < start)
            throw InvalidArgument("range needs step > 0 and stop >= start: " + text);
        for (long i = 0;; ++i) {
            const double v = start + static_cast<double>(i) * step;
            if (v > stop + 1e-9 * std::max(1.0, std::abs(stop)))
                break;
            out.push_back(std::round(v * 1e9) / 1e9);
        }
        return out;
    }
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto comma = std::min(text.find(',', pos), text.size());
        out.push_back(number(std::string_view(text).substr(pos, comma - pos)));
        pos = comma + 1;
    }
    return out;
}

void add_commands(CLI::App& app, GlobalOptions& global, std::function<int()>& action)
{
    add_synth(app, global, action);
    add_labelgen(app, action);
    add_decode(app, action);
    add_upper_iou(app, action);
    add_eval(app, action);
    add_loss_check(app, global, action);
    add_bench(app, global, action);
    add_render(app, action);
}

}  // namespace botd::cli
