#include <doctest.h>

#include <cmath>
#include <random>

#include "botd/errors.hpp"
#include "botd/losses.hpp"

using namespace botd;

TEST_CASE("dice loss examples")
{
    BinaryMask gt(10, 2);
    Raster pred(10, 2);
    for (int x = 0; x < 10; ++x) {
        gt.set(x, 0);
        pred(x, 1) = 1.0f;
    }
    CHECK(dice_loss(pred, gt) == doctest::Approx(1.0 - 1.0 / 21.0).epsilon(1e-12));
    CHECK(dice_loss(Raster(3, 3), BinaryMask(3, 3)) == 0.0);

    Raster same(10, 2);
    for (int x = 0; x < 10; ++x)
        same(x, 0) = 1.0f;
    CHECK(dice_loss(same, gt) == 0.0);

    CHECK_THROWS_AS(dice_loss(Raster(3, 4), BinaryMask(4, 3)), ShapeMismatch);
    CHECK_THROWS_AS(dice_loss_gradient(Raster(3, 4), BinaryMask(4, 3)), ShapeMismatch);
}

TEST_CASE("dice gradient matches a brute-force difference quotient")
{
    std::mt19937_64 rng(5);
    BinaryMask gt(4, 3);
    Raster pred(4, 3);
    for (std::size_t i = 0; i < gt.size(); ++i) {
        gt[i] = rng() & 1;
        pred[i] = static_cast<float>(rng() % 100) / 100.0f;
    }
    const auto grad = dice_loss_gradient(pred, gt);
    REQUIRE(grad.size() == pred.size());
    for (std::size_t k = 0; k < pred.size(); ++k) {
        auto plus = pred, minus = pred;
        plus[k] += 1.0f / 64;  // exact in float
        minus[k] -= 1.0f / 64;
        const double numeric = (dice_loss(plus, gt) - dice_loss(minus, gt)) / (2.0 / 64);
        CHECK(grad[k] == doctest::Approx(numeric).epsilon(1e-3));
    }
}

TEST_CASE("pmd iou examples")
{
    CHECK(pmd_iou({3.0, 3.0}, {8.0, 4.0}) == 1.0);
    CHECK(std::abs(pmd_iou({1.0, 2.0}, {8.0, 4.0}) - 2.0 / 3.0) <= 1e-12);
    CHECK(std::abs(pmd_iou({2.0, 1.0}, {8.0, 4.0}) - 2.0 / 3.0) <= 1e-12);
    CHECK_THROWS_AS(pmd_iou({0.0, 1.0}, {8.0, 4.0}), InvalidPmd);
    CHECK_THROWS_AS(pmd_iou({1.0, -1.0}, {8.0, 4.0}), InvalidPmd);
    CHECK_THROWS_AS(pmd_iou({1.0, 1.0}, {0.5, 4.0}), InvalidArgument);
}

TEST_CASE("pmd iou loss examples")
{
    CHECK(pmd_iou_loss({1.0, 1.0}) == 0.0);
    CHECK(std::abs(pmd_iou_loss({2.0, 1.0}) - std::log(2.0)) <= 1e-9);
    CHECK(std::abs(pmd_iou_loss({1.0, 2.0}) - std::log(2.0)) <= 1e-9);
    CHECK_THROWS_AS(pmd_iou_loss({0.0, 2.0}), InvalidPmd);
    CHECK_THROWS_AS(pmd_iou_loss({NAN, 2.0}), InvalidPmd);

    CHECK(pmd_iou_loss_gradient({1.0, 2.0}) == -1.0);
    CHECK(pmd_iou_loss_gradient({4.0, 2.0}) == 0.25);
    CHECK(pmd_iou_loss_gradient({2.0, 2.0}) == 0.0);
}

TEST_CASE("pmd iou loss is minus log of the area-free pmd iou")
{
    std::mt19937_64 rng(11);
    for (int t = 0; t < 200; ++t) {
        const double p = 0.1 + static_cast<double>(rng() % 10000) / 100.0;
        const double g = 0.1 + static_cast<double>(rng() % 10000) / 100.0;
        CHECK(std::abs(pmd_iou_loss({p, g}) + std::log(pmd_iou({p, g}, {2.0, 0.0}))) <= 1e-9);
    }
}

TEST_CASE("smooth l1 and total loss examples")
{
    CHECK(smooth_l1_loss({1.0, 1.0}) == 0.0);
    CHECK(smooth_l1_loss({2.0, 1.0}) == 0.5);
    CHECK(smooth_l1_loss({3.0, 1.0}) == 1.5);
    CHECK(smooth_l1_loss({1.5, 1.0}) == 0.125);
    CHECK(smooth_l1_loss_gradient({1.5, 1.0}) == 0.5);
    CHECK(smooth_l1_loss_gradient({0.0 + 1e-3, 5.0}) == -1.0);
    CHECK_THROWS_AS(smooth_l1_loss({1.0, 1.0}, 0.0), InvalidArgument);

    CHECK(total_loss(0.3, 0.2) == doctest::Approx(0.5));
    CHECK(total_loss(0.42, 0.0, 3.0) == 0.42);
    CHECK(total_loss(0.3, 0.2, 2.0) == doctest::Approx(0.7));
}

TEST_CASE("scale invariance against smooth l1")
{
    std::mt19937_64 rng(3);
    for (int t = 0; t < 100; ++t) {
        const double p = 1.0 + static_cast<double>(rng() % 1000) / 10.0;
        const double g = 1.0 + static_cast<double>(rng() % 1000) / 10.0;
        for (double k : {0.1, 1.0, 10.0, 100.0})
            CHECK(std::abs(pmd_iou_loss({k * p, k * g}) - pmd_iou_loss({p, g})) <= 1e-12);
    }
    // |d| >= beta at every scale: smooth l1 grows like k
    const double base = smooth_l1_loss({30.0, 10.0});
    for (double k : {1.0, 10.0, 100.0})
        CHECK(smooth_l1_loss({30.0 * k, 10.0 * k}) / base == doctest::Approx(k).epsilon(0.03));
}

TEST_CASE("gradient descent on the pmd iou loss")
{
    const double gt = 2.0, step = 0.1;
    double pred = 10.0;
    double previous = pmd_iou_loss({pred, gt});
    bool crossed = false;
    double worst_after_crossing = 0.0;
    for (int i = 0; i < 500; ++i) {
        pred -= step * pmd_iou_loss_gradient({pred, gt});
        REQUIRE(pred > 0.0);
        const double loss = pmd_iou_loss({pred, gt});
        if (!crossed && pred > gt) {
            CHECK(loss < previous);
        } else {
            crossed = true;
            worst_after_crossing = std::max(worst_after_crossing, std::abs(pred - gt));
        }
        previous = loss;
    }
    CHECK(crossed);
    // Fixed-step subgradient descent ends in a limit cycle of width step/pred around gt.
    CHECK(worst_after_crossing <= step / (gt - step) + 1e-12);
    CHECK(std::abs(pred - gt) < 0.06);
}

TEST_CASE("loss check suite passes")
{
    const auto checks = run_loss_checks();
    CHECK(checks.size() >= 7);
    for (const auto& c : checks) {
        INFO(c.name);
        CHECK(c.passed);
        CHECK(c.worst <= c.tolerance);
        CHECK(c.samples > 0);
    }
    const auto again = run_loss_checks();
    REQUIRE(again.size() == checks.size());
    for (std::size_t i = 0; i < checks.size(); ++i)
        CHECK(again[i].worst == checks[i].worst);
}
