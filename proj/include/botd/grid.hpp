#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "botd/errors.hpp"

namespace botd {

/// Dense row-major 2-D grid. Pixel (x, y) is column x, row y.
template <typename T>
class Grid {
public:
    using value_type = T;

    Grid() = default;
    Grid(int width, int height, T fill = T{}) : width_(width), height_(height)
    {
        if (width <= 0 || height <= 0)
            throw InvalidArgument("grid dimensions must be positive");
        values_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return values_.size(); }
    bool empty() const noexcept { return values_.empty(); }

    bool contains(int x, int y) const noexcept
    {
        return x >= 0 && y >= 0 && x < width_ && y < height_;
    }

    std::size_t index(int x, int y) const noexcept
    {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    T& operator()(int x, int y) noexcept { return values_[index(x, y)]; }
    const T& operator()(int x, int y) const noexcept { return values_[index(x, y)]; }

    T& operator[](std::size_t i) noexcept { return values_[i]; }
    const T& operator[](std::size_t i) const noexcept { return values_[i]; }

    std::span<T> values() noexcept { return values_; }
    std::span<const T> values() const noexcept { return values_; }

    std::span<T> row(int y) noexcept { return values().subspan(index(0, y), static_cast<std::size_t>(width_)); }
    std::span<const T> row(int y) const noexcept
    {
        return values().subspan(index(0, y), static_cast<std::size_t>(width_));
    }

    template <typename U>
    bool same_shape(const Grid<U>& other) const noexcept
    {
        return width_ == other.width() && height_ == other.height();
    }

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> values_;
};

/// Boolean mask stored one byte per pixel (0 = background, 1 = foreground).
class BinaryMask : public Grid<std::uint8_t> {
public:
    using Grid::Grid;

    bool test(int x, int y) const noexcept { return contains(x, y) && (*this)(x, y) != 0; }
    void set(int x, int y, bool on = true) noexcept { (*this)(x, y) = on ? 1 : 0; }

    std::size_t count() const noexcept
    {
        std::size_t n = 0;
        for (auto v : values())
            n += v != 0;
        return n;
    }
    bool any() const noexcept
    {
        for (auto v : values())
            if (v)
                return true;
        return false;
    }
};

/// Euclidean distance in pixels; 0 on background.
using DistanceField = Grid<double>;

/// Real-valued raster such as a probability map or PMD regression map.
using Raster = Grid<float>;

}  // namespace botd
