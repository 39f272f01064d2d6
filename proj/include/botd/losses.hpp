#pragma once

#include <string>
#include <vector>

#include "botd/grid.hpp"

namespace botd {

struct LossSample {
    double pred_pmd = 1.0;
    double gt_pmd = 1.0;
};

/// Discretized CM geometry entering the PMD IoU: number of CM-outline points and CM area.
struct PmdIoUContext {
    double n = 1.0;
    double s_cm = 1.0;
};

/// Soft Dice loss with +1 smoothing: 1 - (2 sum(p g) + 1) / (sum p + sum g + 1).
double dice_loss(const Raster& pred, const BinaryMask& gt);

/// d dice_loss / d pred, one entry per pixel in raster order.
std::vector<double> dice_loss_gradient(const Raster& pred, const BinaryMask& gt);

/// min(a, b) / max(a, b) with a = (n/2) pred + s_cm, b = (n/2) gt + s_cm.
/// Accepts s_cm = 0 so the degenerate form can be compared with the log loss.
double pmd_iou(const LossSample& sample, const PmdIoUContext& ctx);

/// ln(max(pred, gt) / min(pred, gt)).
double pmd_iou_loss(const LossSample& sample);

/// d pmd_iou_loss / d pred: -1/pred below gt, +1/pred above, 0 at gt.
double pmd_iou_loss_gradient(const LossSample& sample);

double smooth_l1_loss(const LossSample& sample, double beta = 1.0);
double smooth_l1_loss_gradient(const LossSample& sample, double beta = 1.0);

/// cls_loss + lambda * reg_loss.
double total_loss(double cls_loss, double reg_loss, double lambda = 1.0);

struct LossCheck {
    std::string name;
    bool passed = false;
    double worst = 0.0;      // largest observed error of the check
    double tolerance = 0.0;
    std::size_t samples = 0;
};

/// Exactness, gradient and scale-invariance suites. Deterministic for a given seed.
std::vector<LossCheck> run_loss_checks(unsigned long long seed = 7);

}  // namespace botd
