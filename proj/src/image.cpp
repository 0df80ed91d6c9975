#include "usbone/image.hpp"

#include "usbone/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace usbone {

bool validate_labelmap(const LabelMap& lm) {
    for (int c = 0; c < lm.width; ++c) {
        int stage = 0;  // 0=T, 1=B, 2=S
        for (int r = 0; r < lm.height; ++r) {
            int l = static_cast<int>(lm.at(r, c));
            if (lm.scheme == Scheme::CBG && l == 1) return false;
            if (l < stage) return false;
            stage = l;
        }
    }
    return true;
}

namespace {

double bilinear_sample(const Grid& g, double r, double c) {
    const int h = g.height(), w = g.width();
    r = std::clamp(r, 0.0, static_cast<double>(h - 1));
    c = std::clamp(c, 0.0, static_cast<double>(w - 1));
    const int r0 = std::min(static_cast<int>(r), h - 2 >= 0 ? h - 2 : 0);
    const int c0 = std::min(static_cast<int>(c), w - 2 >= 0 ? w - 2 : 0);
    const int r1 = std::min(r0 + 1, h - 1);
    const int c1 = std::min(c0 + 1, w - 1);
    const double fr = r - r0, fc = c - c0;
    return (1 - fr) * ((1 - fc) * g.at(r0, c0) + fc * g.at(r0, c1)) +
           fr * ((1 - fc) * g.at(r1, c0) + fc * g.at(r1, c1));
}

} // namespace

Image resample_bilinear(const Image& img, double new_spacing_mm) {
    require(new_spacing_mm > 0, "resample: new spacing must be positive");
    const double scale = img.spacing_mm / new_spacing_mm;
    const int nw = static_cast<int>(std::lround(img.width() * scale));
    const int nh = static_cast<int>(std::lround(img.height() * scale));
    require(nw >= 1 && nh >= 1, "resample: output dimension would be zero");

    Image out;
    out.px = Grid(nw, nh);
    out.spacing_mm = new_spacing_mm;
    out.wavelength_px = img.wavelength_px * scale;
    for (int r = 0; r < nh; ++r) {
        for (int c = 0; c < nw; ++c) {
            // pixel-center alignment between the two lattices
            const double sr = (r + 0.5) / scale - 0.5;
            const double sc = (c + 0.5) / scale - 0.5;
            out.px.at(r, c) = bilinear_sample(img.px, sr, sc);
        }
    }
    return out;
}

Delineation resize_delineation(const Delineation& d, const Image& from, const Image& to) {
    Delineation out;
    out.spacing_mm = to.spacing_mm;
    if (d.entries.empty()) return out;

    // Distance (in mm) from each source pixel to the nearest curve point.
    const double s = from.spacing_mm;
    std::vector<std::pair<double, double>> pts;  // (col, depth) in px
    pts.reserve(d.entries.size());
    for (const auto& [c, depth] : d.entries) pts.emplace_back(c, depth);

    Grid dist(from.width(), from.height());
    for (int r = 0; r < from.height(); ++r) {
        for (int c = 0; c < from.width(); ++c) {
            double best = std::numeric_limits<double>::max();
            for (const auto& [pc, pd] : pts) {
                const double dc = (c - pc) * s;
                if (dc * dc >= best) continue;
                const double dr = (r - pd) * s;
                best = std::min(best, dc * dc + dr * dr);
            }
            dist.at(r, c) = std::sqrt(best);
        }
    }

    // Resize the distance map onto the target raster and threshold.
    const double scale = from.spacing_mm / to.spacing_mm;
    const double thresh = 0.5 * to.spacing_mm;
    for (int c = 0; c < to.width(); ++c) {
        const double sc = (c + 0.5) / scale - 0.5;
        for (int r = 0; r < to.height(); ++r) {
            const double sr = (r + 0.5) / scale - 0.5;
            if (bilinear_sample(dist, sr, sc) <= thresh) {
                out.entries[c] = r;  // topmost below-threshold pixel
                break;
            }
        }
    }
    return out;
}

} // namespace usbone
