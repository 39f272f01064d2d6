#include <algorithm>
#include <cmath>
#include <random>

#include "botd/losses.hpp"

namespace botd {

namespace {

void check_sample(const LossSample& s)
{
    if (!(s.pred_pmd > 0.0) || !(s.gt_pmd > 0.0) || !std::isfinite(s.pred_pmd) || !std::isfinite(s.gt_pmd))
        throw InvalidPmd();
}

struct DiceSums {
    double intersection = 0.0;
    double pred = 0.0;
    double gt = 0.0;
};

DiceSums dice_sums(const Raster& pred, const BinaryMask& gt)
{
    if (!pred.same_shape(gt))
        throw ShapeMismatch();
    DiceSums s;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        const double p = pred[i];
        const double g = gt[i] ? 1.0 : 0.0;
        s.intersection += p * g;
        s.pred += p;
        s.gt += g;
    }
    return s;
}

}  // namespace

double dice_loss(const Raster& pred, const BinaryMask& gt)
{
    const auto s = dice_sums(pred, gt);
    return 1.0 - (2.0 * s.intersection + 1.0) / (s.pred + s.gt + 1.0);
}

std::vector<double> dice_loss_gradient(const Raster& pred, const BinaryMask& gt)
{
    const auto s = dice_sums(pred, gt);
    const double den = s.pred + s.gt + 1.0;
    const double num = 2.0 * s.intersection + 1.0;
    std::vector<double> grad(pred.size());
    for (std::size_t i = 0; i < grad.size(); ++i) {
        const double g = gt[i] ? 1.0 : 0.0;
        grad[i] = -(2.0 * g * den - num) / (den * den);
    }
    return grad;
}

double pmd_iou(const LossSample& sample, const PmdIoUContext& ctx)
{
    check_sample(sample);
    if (!(ctx.n >= 1.0) || !(ctx.s_cm >= 0.0))
        throw InvalidArgument("PMD IoU context needs n >= 1 and s_cm >= 0");
    const double pred_area = 0.5 * ctx.n * sample.pred_pmd + ctx.s_cm;
    const double gt_area = 0.5 * ctx.n * sample.gt_pmd + ctx.s_cm;
    return std::min(pred_area, gt_area) / std::max(pred_area, gt_area);
}

double pmd_iou_loss(const LossSample& sample)
{
    check_sample(sample);
    return std::log(std::max(sample.pred_pmd, sample.gt_pmd) / std::min(sample.pred_pmd, sample.gt_pmd));
}

double pmd_iou_loss_gradient(const LossSample& sample)
{
    check_sample(sample);
    if (sample.pred_pmd < sample.gt_pmd)
        return -1.0 / sample.pred_pmd;
    if (sample.pred_pmd > sample.gt_pmd)
        return 1.0 / sample.pred_pmd;
    return 0.0;
}

double smooth_l1_loss(const LossSample& sample, double beta)
{
    if (!(beta > 0.0))
        throw InvalidArgument("smooth-l1 beta must be positive");
    const double d = sample.pred_pmd - sample.gt_pmd;
    const double a = std::abs(d);
    return a < beta ? 0.5 * d * d / beta : a - 0.5 * beta;
}

double smooth_l1_loss_gradient(const LossSample& sample, double beta)
{
    if (!(beta > 0.0))
        throw InvalidArgument("smooth-l1 beta must be positive");
    const double d = sample.pred_pmd - sample.gt_pmd;
    if (std::abs(d) < beta)
        return d / beta;
    return d > 0 ? 1.0 : -1.0;
}

double total_loss(double cls_loss, double reg_loss, double lambda)
{
    return cls_loss + lambda * reg_loss;
}

namespace {

double uniform(std::mt19937_64& rng, double lo, double hi)
{
    return lo + (hi - lo) * static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double relative_error(double analytic, double numeric)
{
    return std::abs(analytic - numeric) / std::max(std::abs(analytic), std::abs(numeric));
}

LossCheck check(std::string name, double worst, double tolerance, std::size_t samples)
{
    return {std::move(name), worst <= tolerance, worst, tolerance, samples};
}

}  // namespace

std::vector<LossCheck> run_loss_checks(unsigned long long seed)
{
    std::mt19937_64 rng(seed);
    std::vector<LossCheck> out;
    constexpr double kStep = 1e-4;

    // dice(X, X) == 0 on random binary masks
    {
        double worst = 0.0;
        for (int t = 0; t < 100; ++t) {
            const int w = 1 + static_cast<int>(rng() % 48);
            const int h = 1 + static_cast<int>(rng() % 48);
            BinaryMask gt(w, h);
            Raster pred(w, h);
            for (std::size_t i = 0; i < gt.size(); ++i) {
                gt[i] = rng() & 1;
                pred[i] = gt[i];
            }
            worst = std::max(worst, std::abs(dice_loss(pred, gt)));
        }
        out.push_back(check("dice_identity", worst, 0.0, 100));
    }

    out.push_back(check("pmd_iou_loss_identity", std::abs(pmd_iou_loss({1.0, 1.0})), 1e-9, 1));
    out.push_back(check("pmd_iou_loss_ln2", std::abs(pmd_iou_loss({2.0, 1.0}) - std::log(2.0)), 1e-9, 1));
    out.push_back(check("pmd_iou_two_thirds", std::abs(pmd_iou({1.0, 2.0}, {8.0, 4.0}) - 2.0 / 3.0), 1e-12, 1));

    // analytic vs central differences, away from the kink
    {
        double worst = 0.0;
        std::size_t n = 0;
        while (n < 20) {
            const double gt = uniform(rng, 0.5, 20.0);
            const double pred = uniform(rng, 0.2, 30.0);
            if (std::abs(pred - gt) < 0.05)
                continue;
            const double numeric =
                (pmd_iou_loss({pred + kStep, gt}) - pmd_iou_loss({pred - kStep, gt})) / (2.0 * kStep);
            worst = std::max(worst, relative_error(pmd_iou_loss_gradient({pred, gt}), numeric));
            ++n;
        }
        for (double pred : {0.5, 1.0, 3.0, 10.0}) {
            const double numeric =
                (pmd_iou_loss({pred + kStep, 2.0}) - pmd_iou_loss({pred - kStep, 2.0})) / (2.0 * kStep);
            worst = std::max(worst, relative_error(pmd_iou_loss_gradient({pred, 2.0}), numeric));
            ++n;
        }
        out.push_back(check("pmd_iou_loss_gradient", worst, 1e-5, n));
    }

    {
        double worst = 0.0;
        std::size_t n = 0;
        for (int t = 0; t < 20; ++t) {
            const int w = 2 + static_cast<int>(rng() % 6);
            const int h = 2 + static_cast<int>(rng() % 6);
            BinaryMask gt(w, h);
            Raster pred(w, h);
            for (std::size_t i = 0; i < gt.size(); ++i) {
                gt[i] = rng() & 1;
                pred[i] = static_cast<float>(uniform(rng, 0.05, 0.95));
            }
            const auto grad = dice_loss_gradient(pred, gt);
            const std::size_t k = rng() % pred.size();
            // Perturb in double precision; the float raster only carries the base point.
            auto loss_at = [&](double delta) {
                double inter = 0.0, sp = 0.0, sg = 0.0;
                for (std::size_t i = 0; i < pred.size(); ++i) {
                    const double p = pred[i] + (i == k ? delta : 0.0);
                    const double g = gt[i] ? 1.0 : 0.0;
                    inter += p * g;
                    sp += p;
                    sg += g;
                }
                return 1.0 - (2.0 * inter + 1.0) / (sp + sg + 1.0);
            };
            const double numeric = (loss_at(kStep) - loss_at(-kStep)) / (2.0 * kStep);
            worst = std::max(worst, relative_error(grad[k], numeric));
            ++n;
        }
        out.push_back(check("dice_loss_gradient", worst, 1e-5, n));
    }

    {
        double worst = 0.0;
        std::size_t n = 0;
        for (int t = 0; t < 20; ++t) {
            const double p = uniform(rng, 0.1, 50.0);
            const double g = uniform(rng, 0.1, 50.0);
            const double base = pmd_iou_loss({p, g});
            for (double k : {0.1, 1.0, 10.0, 100.0}) {
                worst = std::max(worst, std::abs(pmd_iou_loss({k * p, k * g}) - base));
                ++n;
            }
        }
        out.push_back(check("pmd_iou_loss_scale_invariance", worst, 1e-12, n));
    }
    return out;
}

}  // namespace botd
