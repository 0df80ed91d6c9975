#pragma once

#include "usbone/image.hpp"

#include <array>
#include <string>
#include <vector>

namespace usbone {

/// Scales and knobs for the per-pixel feature bank. Scales expressed in
/// wavelengths are converted to pixels via the image's wavelength_px.
struct FeatureConfig {
    std::vector<double> patch_scales_wl = {3, 6, 12};   // patch half-widths
    std::vector<double> cw_scales_wl = {5, 11, 31};     // Gaussian sigmas
    std::vector<int> cw_orders = {0, 1, 2, 3};
    double rayleigh_scale_wl = 12;
    int rayleigh_bins = 32;
    int entropy_bins = 32;
    double gabor_theta = 1.5707963267948966;  // pi/2
    double gabor_period_px = 16.0;            // 1/f
    double gabor_sigma1_mm = 2.0;
    double gabor_sigma2_mm = 4.0;
    std::vector<int> haar_scales_px = {2, 5, 9, 15, 25, 30};
};

/// Ordered per-pixel feature maps plus the group registry used by feature
/// selection (groups collect all scales of one feature).
struct FeatureStack {
    struct Entry {
        std::string group;
        std::string scale_tag;
        Grid map;
    };
    std::vector<Entry> maps;
    int width = 0, height = 0;
    double spacing_mm = 1.0;
    double wavelength_px = 1.0;

    size_t count() const { return maps.size(); }
    std::vector<std::string> group_names() const;
    std::vector<size_t> group_members(const std::string& group) const;
    /// Drops every feature belonging to `group`.
    void remove_group(const std::string& group);
    /// Feature vector of one pixel (row-major index).
    std::vector<double> pixel_features(size_t pixel_index) const;
};

/// Eight patch statistics over the (2*scale+1)^2 mirror-padded square patch:
/// mean, median, variance (population), std, skewness, kurtosis (non-excess),
/// entropy (base-2 histogram over [0,1]) and energy (sum of squares).
std::array<Grid, 8> patch_statistics(const Image& img, int scale, int entropy_bins);

/// Column-wise convolution with the order-th derivative of a Gaussian of
/// std sigma (pixels), truncated at 4*sigma, mirror padding at column ends.
Grid cw_local_statistics(const Image& img, double sigma_px, int order);

/// Discrete derivative-of-Gaussian kernel used above (moment-corrected so
/// polynomial inputs of degree < order vanish exactly). Index 0 is offset
/// -radius.
std::vector<double> gaussian_derivative_kernel(double sigma_px, int order, int& radius);

/// Suffix statistics per column including the pixel itself: sum, mean, std.
std::array<Grid, 3> cw_cumulative(const Image& img);

/// LBP, MCT, extended LBP and extended MCT codes, each emitted as
/// code / 2^bits. Neighbor orders are fixed; see the implementation.
std::array<Grid, 4> lbp_family(const Image& img);

/// Distance between a patch's normalized histogram and the maximum
/// likelihood Rayleigh density sampled at the bin centers.
Grid rayleigh_fit_error(const Image& img, int scale, int bins);

/// Convolution with a mean-subtracted Gabor kernel (Gaussian envelope times
/// an oriented cosine), truncated at 3 sigma.
Grid gabor_response(const Image& img, const FeatureConfig& cfg);

/// The spatial Gabor kernel itself (mean-subtracted); exposed for tests.
Grid gabor_kernel(const FeatureConfig& cfg, double spacing_mm);

/// K = -div(grad I / |grad I|) via central differences; 0 where the gradient
/// norm is below 1e-8.
Grid curvature_map(const Image& img);

/// Center-surround Haar features: mean of the surround ring minus mean of
/// the center square, one map per scale, via integral images.
std::vector<Grid> haar_center_surround(const Image& img, const std::vector<int>& scales_px);

/// Assembles the full feature bank. conf_features are the four random-walk
/// maps (confidence, shadowing, log-shadowing, attenuation) from the
/// confidence-map module.
FeatureStack extract_all(const Image& img, const FeatureConfig& cfg,
                         const std::array<Grid, 4>& conf_features);

/// Binary stack cache: text header, then row-major float32 per feature.
void save_feature_stack(const FeatureStack& fs, const std::string& path);
FeatureStack load_feature_stack(const std::string& path);

/// Writes a single map in the same container (used for PS map export).
void save_map_f32(const Grid& map, const std::string& name, double spacing_mm,
                  double wavelength_px, const std::string& path);

} // namespace usbone
