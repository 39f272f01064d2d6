#pragma once

#include <string>
#include <vector>

#include "botd/dataio.hpp"
#include "botd/labelgen.hpp"
#include "botd/reconstruct.hpp"

namespace botd {

/// |a & b| / |a | b|, 1 when both are empty.
double mask_iou(const BinaryMask& a, const BinaryMask& b);

/// Fidelity ceiling of the CM + PMD representation for one polygon: the polygon is
/// scaled so the image short side equals `image_scale` (<= 0 keeps native size), its
/// ground-truth label is bolded back and compared against the rasterized polygon.
double upper_iou(const Polygon& poly, int width, int height, double image_scale, double cm_scale);

struct UpperIoUReport {
    std::string axis_name;  // "image_scale" or "cm_scale"
    std::vector<double> axis;
    std::vector<double> iou;
    std::size_t instances = 0;
};

struct UpperIoUStudy {
    UpperIoUReport by_image_scale;
    UpperIoUReport by_cm_scale;
};

struct UpperIoUStudyOptions {
    double fixed_cm_scale = 0.5;        // while sweeping image scale
    double fixed_image_scale = 640.0;   // while sweeping cm scale
};

/// Mean upper IoU over all care instances, per value of each axis with the other fixed.
/// An empty scale list yields an empty report for that axis.
UpperIoUStudy upper_iou_study(const std::vector<AnnotatedImage>& dataset, const std::vector<double>& image_scales,
                              const std::vector<double>& cm_scales, const UpperIoUStudyOptions& options = {});

struct ScoredPolygon {
    Polygon polygon;
    double score = 0.0;
};

struct GroundTruthPolygon {
    Polygon polygon;
    bool care = true;
};

struct ImageMatch {
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
    std::size_t discarded = 0;  // predictions absorbed by don't-care regions
    friend bool operator==(const ImageMatch&, const ImageMatch&) = default;
};

struct EvalReport {
    double precision = 1.0;
    double recall = 1.0;
    double f_measure = 1.0;
    std::vector<ImageMatch> per_image;
};

/// Greedy one-to-one matching in descending score order on rasterized-mask IoU.
/// Predictions whose best-overlapping ground truth is a don't-care region with
/// IoU >= threshold are dropped before counting.
ImageMatch match_detections(const std::vector<ScoredPolygon>& preds, const std::vector<GroundTruthPolygon>& gts,
                            int width, int height, double iou_threshold = 0.5);

/// Pooled precision/recall over images; 0/0 counts as 1, F is 0 when P = R = 0.
EvalReport summarize(std::vector<ImageMatch> per_image);

double f_measure(double precision, double recall);

struct StageStats {
    std::string stage;
    double median_ms = 0.0;
    double p95_ms = 0.0;
    std::size_t samples = 0;
};

struct BenchReport {
    std::vector<StageStats> stages;  // binarize, components, bolding, tracing
    double median_decode_ms = 0.0;   // per image, all stages
    double p95_decode_ms = 0.0;
    std::size_t images = 0;
    std::size_t repetitions = 0;
    int threads = 1;
};

/// Times decode() on every label map `repetitions` times with `threads` OpenMP threads.
BenchReport bench_decode(const std::vector<LabelMaps>& label_maps, double cm_scale, std::size_t repetitions,
                         int threads = 1);

/// Probability raster with 1 on foreground and 0 elsewhere.
Raster to_probability(const BinaryMask& mask);

}  // namespace botd
