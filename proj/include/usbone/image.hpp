#pragma once

#include "usbone/grid.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace usbone {

/// B-mode image: intensities in [0,1], isotropic pixel spacing in mm, and the
/// transmit wavelength expressed in pixels. Row 0 touches the transducer.
struct Image {
    Grid px;
    double spacing_mm = 1.0;
    double wavelength_px = 1.0;

    int width() const { return px.width(); }
    int height() const { return px.height(); }
};

/// Per-scanline bone depth curve. Depths are in pixels (fractional allowed);
/// a column absent from the map means no bone was detected/annotated there.
struct Delineation {
    std::map<int, double> entries;
    double spacing_mm = 1.0;

    bool empty() const { return entries.empty(); }
    size_t size() const { return entries.size(); }
    std::optional<double> depth_at(int col) const {
        auto it = entries.find(col);
        if (it == entries.end()) return std::nullopt;
        return it->second;
    }
};

enum class Label : uint8_t { Tissue = 0, Bone = 1, Shadow = 2 };

enum class Scheme { BFG, CBG };

/// Per-pixel labels over {T,B,S}. Valid columns read top to bottom as
/// T* B* S* (BFG) or T* S* (CBG).
struct LabelMap {
    int width = 0;
    int height = 0;
    std::vector<Label> labels;  // row-major
    Scheme scheme = Scheme::CBG;

    LabelMap() = default;
    LabelMap(int w, int h, Scheme s, Label fill = Label::Tissue)
        : width(w), height(h), labels(static_cast<size_t>(w) * h, fill), scheme(s) {}

    Label& at(int r, int c) { return labels[static_cast<size_t>(r) * width + c]; }
    Label at(int r, int c) const { return labels[static_cast<size_t>(r) * width + c]; }
};

/// True iff every column follows the scheme's label order (T* B* S* for BFG,
/// T* S* for CBG; B forbidden entirely under CBG).
bool validate_labelmap(const LabelMap& lm);

/// Bilinear resampling to a new isotropic spacing. Output dimensions are
/// round(dim * old_spacing / new_spacing); sampling aligns pixel centers.
Image resample_bilinear(const Image& img, double new_spacing_mm);

/// Maps a delineation between two rasters of the same field of view by
/// rasterizing it to a distance map, bilinearly resizing that map,
/// thresholding at half the target spacing, and re-extracting the topmost
/// below-threshold pixel per column.
Delineation resize_delineation(const Delineation& d, const Image& from, const Image& to);

// ---- file I/O ----

/// Loads a PGM (P5, 8/16-bit) or grayscale PNG image. Intensities are
/// divided by the format's maximum value. Spacing and wavelength come from a
/// `<path>.meta` sidecar unless overridden.
Image load_image(const std::string& path,
                 std::optional<double> spacing_override = std::nullopt,
                 std::optional<double> wavelength_override = std::nullopt);

/// Writes an 8- or 16-bit PGM plus the `.meta` sidecar.
void save_image_pgm(const Image& img, const std::string& path, int bits = 8);

/// Writes an 8-bit grayscale PNG plus the `.meta` sidecar.
void save_image_png(const Image& img, const std::string& path);

void save_meta(const std::string& image_path, double spacing_mm, double wavelength_px);

Delineation load_delineation_csv(const std::string& path, double spacing_mm);
void save_delineation_csv(const Delineation& d, const std::string& path);

LabelMap load_labelmap_pgm(const std::string& path, Scheme scheme);
void save_labelmap_pgm(const LabelMap& lm, const std::string& path);

/// Renders the image with prediction (red) and gold standard (blue) curves
/// as an RGB PNG.
void save_overlay_png(const Image& img, const Delineation& pred,
                      const Delineation& gs, const std::string& path);

} // namespace usbone
