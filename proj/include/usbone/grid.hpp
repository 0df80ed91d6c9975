#pragma once

#include <algorithm>
#include <cassert>
#include <cstddef>
#include <vector>

namespace usbone {

/// Row-major 2D raster of doubles. Row 0 is the shallowest image row
/// (touching the transducer); columns are scanlines.
class Grid {
public:
    Grid() = default;
    Grid(int width, int height, double fill = 0.0)
        : width_(width), height_(height),
          v_(static_cast<size_t>(width) * height, fill) {
        assert(width >= 0 && height >= 0);
    }

    int width() const { return width_; }
    int height() const { return height_; }
    size_t size() const { return v_.size(); }
    bool empty() const { return v_.empty(); }

    double& at(int r, int c) {
        assert(r >= 0 && r < height_ && c >= 0 && c < width_);
        return v_[static_cast<size_t>(r) * width_ + c];
    }
    double at(int r, int c) const {
        assert(r >= 0 && r < height_ && c >= 0 && c < width_);
        return v_[static_cast<size_t>(r) * width_ + c];
    }
    double& operator[](size_t i) { return v_[i]; }
    double operator[](size_t i) const { return v_[i]; }

    double* data() { return v_.data(); }
    const double* data() const { return v_.data(); }
    double* row(int r) { return v_.data() + static_cast<size_t>(r) * width_; }
    const double* row(int r) const { return v_.data() + static_cast<size_t>(r) * width_; }

    bool same_shape(const Grid& o) const {
        return width_ == o.width_ && height_ == o.height_;
    }

    double max_value() const {
        double m = v_.empty() ? 0.0 : v_[0];
        for (double x : v_) m = std::max(m, x);
        return m;
    }
    double min_value() const {
        double m = v_.empty() ? 0.0 : v_[0];
        for (double x : v_) m = std::min(m, x);
        return m;
    }

    auto begin() { return v_.begin(); }
    auto end() { return v_.end(); }
    auto begin() const { return v_.begin(); }
    auto end() const { return v_.end(); }

    friend bool operator==(const Grid& a, const Grid& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.v_ == b.v_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<double> v_;
};

/// Reflects an out-of-range index into [0, n) without repeating the border
/// sample (…, 2, 1, 0, 1, 2, …). Handles offsets larger than n.
inline int reflect_index(int i, int n) {
    assert(n > 0);
    if (n == 1) return 0;
    const int period = 2 * n - 2;
    i %= period;
    if (i < 0) i += period;
    return i < n ? i : period - i;
}

} // namespace usbone
