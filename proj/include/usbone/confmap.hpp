#pragma once

#include "usbone/image.hpp"

#include <array>
#include <utility>
#include <vector>

namespace usbone {

/// Random-walk confidence map parameters (published defaults of the
/// underlying method).
struct ConfParams {
    double alpha = 2.0;  // depth attenuation
    double beta = 90.0;  // edge sensitivity
    double gamma = 0.06; // extra cost for horizontal/diagonal steps
};

struct ConfidenceMap {
    Grid values;  // in [0,1]; top row 1, bottom row 0
    ConfParams params;
};

/// Window half-widths for the attenuation/shadowing features, in wavelengths.
struct CpsScales {
    std::vector<double> halfwidths_wl = {2, 5, 11};

    std::vector<int> px(double wavelength_px) const;
};

/// Solves the random-walker Dirichlet problem on the 8-connected lattice:
/// top row clamped to 1, bottom row to 0, edge weights
/// w = exp(-beta * (|g(p)-g(q)| + gamma * horiz)) on the depth-attenuated
/// intensities g = I * exp(-alpha * depth/(H-1)); horiz is 1 for horizontal
/// and diagonal steps. Weights are floored at 1e-12 for conditioning.
ConfidenceMap confidence_map(const Image& img, const ConfParams& params = {});

/// Multi-scale sum of (value - window minimum), min-max normalized to [0,1].
Grid attenuation_cps(const ConfidenceMap& cm, const CpsScales& scales, double wavelength_px);

/// Multi-scale sum of value / max(window minimum, 1e-6), normalized by its
/// per-image max; second map is ln(normalized + 1e-6).
std::pair<Grid, Grid> shadowing_cps(const ConfidenceMap& cm, const CpsScales& scales,
                                    double wavelength_px);

/// The four random-walk feature maps in stack order:
/// confidence, shadowing, log-shadowing, attenuation.
std::array<Grid, 4> confidence_features(const Image& img, const ConfParams& params = {},
                                        const CpsScales& scales = {});

} // namespace usbone
