#include "usbone/features.hpp"

#include "usbone/error.hpp"
#include "usbone/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>

namespace usbone {

namespace {

/// Pads a grid by `pad` pixels on every side with reflected samples.
Grid mirror_pad(const Grid& g, int pad) {
    Grid out(g.width() + 2 * pad, g.height() + 2 * pad);
    for (int r = 0; r < out.height(); ++r) {
        const int sr = reflect_index(r - pad, g.height());
        for (int c = 0; c < out.width(); ++c)
            out.at(r, c) = g.at(sr, reflect_index(c - pad, g.width()));
    }
    return out;
}

/// Summed-area table with a zero top row/left column: sat(r,c) = sum of
/// g[0..r)[0..c).
Grid integral(const Grid& g, int power = 1) {
    Grid sat(g.width() + 1, g.height() + 1);
    for (int r = 0; r < g.height(); ++r) {
        double rowsum = 0.0;
        for (int c = 0; c < g.width(); ++c) {
            double v = g.at(r, c);
            double p = v;
            for (int k = 1; k < power; ++k) p *= v;
            rowsum += p;
            sat.at(r + 1, c + 1) = sat.at(r, c + 1) + rowsum;
        }
    }
    return sat;
}

double box_sum(const Grid& sat, int r0, int c0, int r1, int c1) {
    // inclusive box [r0,r1] x [c0,c1]
    return sat.at(r1 + 1, c1 + 1) - sat.at(r0, c1 + 1) - sat.at(r1 + 1, c0) + sat.at(r0, c0);
}

} // namespace

std::array<Grid, 8> patch_statistics(const Image& img, int scale, int entropy_bins) {
    require(scale >= 1, "patch scale must be >= 1 px");
    require(entropy_bins >= 2, "entropy bins must be >= 2");
    const int w = img.width(), h = img.height();
    const int side = 2 * scale + 1;
    const double n = static_cast<double>(side) * side;
    const Grid pad = mirror_pad(img.px, scale);
    const Grid s1 = integral(pad, 1), s2 = integral(pad, 2);
    const Grid s3 = integral(pad, 3), s4 = integral(pad, 4);

    std::array<Grid, 8> out;  // mean median variance std skewness kurtosis entropy energy
    for (auto& g : out) g = Grid(w, h);

    std::vector<double> patch(static_cast<size_t>(side) * side);
    std::vector<int> hist(entropy_bins);
    const double log2inv = 1.0 / std::log(2.0);

    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const int r0 = r, c0 = c;  // padded coordinates of the patch corner
            const double e1 = box_sum(s1, r0, c0, r0 + side - 1, c0 + side - 1) / n;
            const double e2 = box_sum(s2, r0, c0, r0 + side - 1, c0 + side - 1) / n;
            const double e3 = box_sum(s3, r0, c0, r0 + side - 1, c0 + side - 1) / n;
            const double e4 = box_sum(s4, r0, c0, r0 + side - 1, c0 + side - 1) / n;
            const double m2 = e2 - e1 * e1;
            const double m3 = e3 - 3 * e1 * e2 + 2 * e1 * e1 * e1;
            const double m4 = e4 - 4 * e1 * e3 + 6 * e1 * e1 * e2 - 3 * e1 * e1 * e1 * e1;
            out[0].at(r, c) = e1;
            const double var = std::max(m2, 0.0);
            out[2].at(r, c) = var;
            out[3].at(r, c) = std::sqrt(var);
            if (var > 1e-12) {
                out[4].at(r, c) = m3 / std::pow(var, 1.5);
                out[5].at(r, c) = m4 / (var * var);
            }  // zero-variance patches: skewness = kurtosis = 0
            out[7].at(r, c) = e2 * n;  // energy: sum of squares

            // median and entropy need the raw samples
            size_t k = 0;
            std::fill(hist.begin(), hist.end(), 0);
            for (int pr = 0; pr < side; ++pr) {
                const double* row = pad.row(r0 + pr) + c0;
                for (int pc = 0; pc < side; ++pc) {
                    const double v = row[pc];
                    patch[k++] = v;
                    int bin = static_cast<int>(v * entropy_bins);
                    hist[std::clamp(bin, 0, entropy_bins - 1)]++;
                }
            }
            auto mid = patch.begin() + patch.size() / 2;
            std::nth_element(patch.begin(), mid, patch.end());
            out[1].at(r, c) = *mid;  // odd-sized patch: exact middle order statistic

            double entropy = 0.0;
            for (int b = 0; b < entropy_bins; ++b) {
                if (hist[b] == 0) continue;
                const double p = hist[b] / n;
                entropy -= p * std::log(p) * log2inv;
            }
            out[6].at(r, c) = entropy;
        }
    }
    return out;
}

std::vector<double> gaussian_derivative_kernel(double sigma_px, int order, int& radius) {
    require(sigma_px >= 0.5, "cw sigma must be >= 0.5 px");
    require(order >= 0 && order <= 3, "cw order must be in {0,1,2,3}");
    radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma_px)));
    const int len = 2 * radius + 1;
    std::vector<double> w(len);
    const double s2 = sigma_px * sigma_px;
    const double norm = 1.0 / (sigma_px * std::sqrt(2.0 * std::numbers::pi));
    for (int k = -radius; k <= radius; ++k) {
        const double g = norm * std::exp(-0.5 * k * k / s2);
        double d = g;
        if (order == 1) d = -k / s2 * g;
        if (order == 2) d = (k * k - s2) / (s2 * s2) * g;
        if (order == 3) d = -(k * k * k - 3.0 * k * s2) / (s2 * s2 * s2) * g;
        w[k + radius] = d;
    }

    // Correct discrete moments so convolution reproduces d^n/dx^n exactly on
    // polynomials up to degree n: sum_k w[k] (-k)^m = 0 for m<n, = n! for m=n.
    const int m = order + 1;
    std::vector<double> A(static_cast<size_t>(m) * len);  // constraint rows
    std::vector<double> resid(m);
    for (int row = 0; row < m; ++row) {
        double target = (row == order) ? std::tgamma(order + 1.0) : 0.0;
        if (order == 0 && row == 0) target = 1.0;  // unit DC gain
        double sum = 0.0;
        for (int k = -radius; k <= radius; ++k) {
            const double a = std::pow(static_cast<double>(-k), row);
            A[static_cast<size_t>(row) * len + (k + radius)] = a;
            sum += a * w[k + radius];
        }
        resid[row] = sum - target;
    }
    // least-squares correction: w -= A^T (A A^T)^{-1} resid
    std::vector<double> gram(static_cast<size_t>(m) * m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            double s = 0.0;
            for (int k = 0; k < len; ++k)
                s += A[static_cast<size_t>(i) * len + k] * A[static_cast<size_t>(j) * len + k];
            gram[static_cast<size_t>(i) * m + j] = s;
        }
    // solve gram * y = resid by Gaussian elimination with partial pivoting
    std::vector<double> y = resid;
    for (int col = 0; col < m; ++col) {
        int piv = col;
        for (int rr = col + 1; rr < m; ++rr)
            if (std::abs(gram[static_cast<size_t>(rr) * m + col]) >
                std::abs(gram[static_cast<size_t>(piv) * m + col]))
                piv = rr;
        for (int cc = 0; cc < m; ++cc)
            std::swap(gram[static_cast<size_t>(col) * m + cc],
                      gram[static_cast<size_t>(piv) * m + cc]);
        std::swap(y[col], y[piv]);
        const double d = gram[static_cast<size_t>(col) * m + col];
        for (int rr = col + 1; rr < m; ++rr) {
            const double f = gram[static_cast<size_t>(rr) * m + col] / d;
            for (int cc = col; cc < m; ++cc)
                gram[static_cast<size_t>(rr) * m + cc] -=
                    f * gram[static_cast<size_t>(col) * m + cc];
            y[rr] -= f * y[col];
        }
    }
    for (int row = m - 1; row >= 0; --row) {
        for (int cc = row + 1; cc < m; ++cc)
            y[row] -= gram[static_cast<size_t>(row) * m + cc] * y[cc];
        y[row] /= gram[static_cast<size_t>(row) * m + row];
    }
    for (int k = 0; k < len; ++k) {
        double corr = 0.0;
        for (int row = 0; row < m; ++row)
            corr += A[static_cast<size_t>(row) * len + k] * y[row];
        w[k] -= corr;
    }
    return w;
}

Grid cw_local_statistics(const Image& img, double sigma_px, int order) {
    int radius = 0;
    const std::vector<double> kernel = gaussian_derivative_kernel(sigma_px, order, radius);
    Grid out(img.width(), img.height());
    kernels::conv_cols(img.px.data(), img.width(), img.height(), kernel.data(), radius,
                       out.data());
    return out;
}

std::array<Grid, 3> cw_cumulative(const Image& img) {
    const int w = img.width(), h = img.height();
    std::array<Grid, 3> out{Grid(w, h), Grid(w, h), Grid(w, h)};
    for (int c = 0; c < w; ++c) {
        double sum = 0.0, sum2 = 0.0;
        for (int r = h - 1; r >= 0; --r) {
            const double v = img.px.at(r, c);
            sum += v;
            sum2 += v * v;
            const double n = h - r;
            const double mean = sum / n;
            out[0].at(r, c) = sum;
            out[1].at(r, c) = mean;
            out[2].at(r, c) = std::sqrt(std::max(0.0, sum2 / n - mean * mean));
        }
    }
    return out;
}

namespace {

// 3x3 ring offsets, clockwise from top-left.
constexpr int kRing[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, 1},
                             {1, 1},   {1, 0},  {1, -1}, {0, -1}};

// Checkerboard cells of the 5x5 neighborhood (|dr|+|dc| odd), listed so that
// each cell's center-symmetric partner is the cell at index (i+6)%12; one
// bit per ordered pair.
constexpr int kChecker[12][2] = {{-2, -1}, {-2, 1}, {-1, 0}, {-1, 2}, {0, 1},  {1, 2},
                                 {2, 1},   {2, -1}, {1, 0},  {1, -2}, {0, -1}, {-1, -2}};

} // namespace

std::array<Grid, 4> lbp_family(const Image& img) {
    const int w = img.width(), h = img.height();
    const Grid pad = mirror_pad(img.px, 2);
    std::array<Grid, 4> out{Grid(w, h), Grid(w, h), Grid(w, h), Grid(w, h)};
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const int pr = r + 2, pc = c + 2;
            const double center = pad.at(pr, pc);

            unsigned lbp = 0;
            double sum9 = center;
            for (int b = 0; b < 8; ++b) {
                const double v = pad.at(pr + kRing[b][0], pc + kRing[b][1]);
                sum9 += v;
                if (v >= center) lbp |= 1u << b;
            }
            out[0].at(r, c) = lbp / 256.0;

            const double mean9 = sum9 / 9.0;
            unsigned mct = 0;
            for (int b = 0; b < 8; ++b)
                if (pad.at(pr + kRing[b][0], pc + kRing[b][1]) >= mean9) mct |= 1u << b;
            out[1].at(r, c) = mct / 256.0;

            double sum25 = 0.0;
            for (int dr = -2; dr <= 2; ++dr)
                for (int dc = -2; dc <= 2; ++dc) sum25 += pad.at(pr + dr, pc + dc);
            const double mct_thresh = center - sum25 / 25.0;

            unsigned elbp = 0, emct = 0;
            for (int b = 0; b < 12; ++b) {
                const double p1 = pad.at(pr + kChecker[b][0], pc + kChecker[b][1]);
                const double p2 = pad.at(pr - kChecker[b][0], pc - kChecker[b][1]);
                if (p1 - p2 >= 0.0) elbp |= 1u << b;
                if (p1 - p2 >= mct_thresh) emct |= 1u << b;
            }
            out[2].at(r, c) = elbp / 4096.0;
            out[3].at(r, c) = emct / 4096.0;
        }
    }
    return out;
}

Grid rayleigh_fit_error(const Image& img, int scale, int bins) {
    require(scale >= 1, "rayleigh scale must be >= 1 px");
    require(bins >= 2, "rayleigh bins must be >= 2");
    const int w = img.width(), h = img.height();
    const int side = 2 * scale + 1;
    const double n = static_cast<double>(side) * side;
    const Grid pad = mirror_pad(img.px, scale);

    Grid out(w, h);
    std::vector<double> hist(bins), pdf(bins);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double lo = pad.at(r, c), hi = lo, sum2 = 0.0;
            for (int pr = 0; pr < side; ++pr) {
                const double* row = pad.row(r + pr) + c;
                for (int pc = 0; pc < side; ++pc) {
                    const double v = row[pc];
                    lo = std::min(lo, v);
                    hi = std::max(hi, v);
                    sum2 += v * v;
                }
            }
            if (sum2 <= 0.0 || hi - lo < 1e-12) {
                out.at(r, c) = 0.0;  // degenerate patch
                continue;
            }
            const double b2 = sum2 / (2.0 * n);  // ML Rayleigh scale squared
            const double width = (hi - lo) / bins;
            std::fill(hist.begin(), hist.end(), 0.0);
            for (int pr = 0; pr < side; ++pr) {
                const double* row = pad.row(r + pr) + c;
                for (int pc = 0; pc < side; ++pc) {
                    int bin = static_cast<int>((row[pc] - lo) / width);
                    hist[std::clamp(bin, 0, bins - 1)] += 1.0;
                }
            }
            double pdf_sum = 0.0;
            for (int b = 0; b < bins; ++b) {
                const double x = lo + (b + 0.5) * width;
                pdf[b] = x / b2 * std::exp(-0.5 * x * x / b2);
                pdf_sum += pdf[b];
            }
            double err2 = 0.0;
            for (int b = 0; b < bins; ++b) {
                const double d = hist[b] / n - (pdf_sum > 0 ? pdf[b] / pdf_sum : 0.0);
                err2 += d * d;
            }
            out.at(r, c) = std::sqrt(err2);
        }
    }
    return out;
}

Grid gabor_kernel(const FeatureConfig& cfg, double spacing_mm) {
    const double s1 = cfg.gabor_sigma1_mm / spacing_mm;  // x1 = horizontal axis
    const double s2 = cfg.gabor_sigma2_mm / spacing_mm;  // x2 = vertical axis
    const double f = 1.0 / cfg.gabor_period_px;
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * std::max(s1, s2))));
    const int side = 2 * radius + 1;
    Grid k(side, side);
    const double norm = 1.0 / (2.0 * std::numbers::pi * s1 * s2);
    double mean = 0.0;
    for (int r = -radius; r <= radius; ++r) {
        for (int c = -radius; c <= radius; ++c) {
            const double x1 = c, x2 = r;
            const double g = norm * std::exp(-0.5 * (x1 * x1 / (s1 * s1) + x2 * x2 / (s2 * s2)));
            const double v = g * std::cos(2.0 * std::numbers::pi * f *
                                          (x1 * std::cos(cfg.gabor_theta) +
                                           x2 * std::sin(cfg.gabor_theta)));
            k.at(r + radius, c + radius) = v;
            mean += v;
        }
    }
    mean /= static_cast<double>(side) * side;
    for (auto& v : k) v -= mean;  // zero DC: constant input gives 0
    return k;
}

Grid gabor_response(const Image& img, const FeatureConfig& cfg) {
    const Grid k = gabor_kernel(cfg, img.spacing_mm);
    const int radius = k.width() / 2;
    const int w = img.width(), h = img.height();

    // The default orientation (theta = pi/2) makes the kernel a product of a
    // horizontal Gaussian and a vertical Gabor carrier, so the convolution is
    // separable up to the DC correction; fall back to the direct form
    // otherwise.
    const double tmod = std::fmod(std::abs(cfg.gabor_theta), std::numbers::pi);
    const bool vertical = std::abs(tmod - std::numbers::pi / 2) < 1e-12;
    if (vertical) {
        const double s1 = cfg.gabor_sigma1_mm / img.spacing_mm;
        const double s2 = cfg.gabor_sigma2_mm / img.spacing_mm;
        const double f = 1.0 / cfg.gabor_period_px;
        std::vector<double> kx(2 * radius + 1), ky(2 * radius + 1);
        const double norm = 1.0 / (2.0 * std::numbers::pi * s1 * s2);
        for (int i = -radius; i <= radius; ++i) {
            kx[i + radius] = std::exp(-0.5 * i * i / (s1 * s1));
            ky[i + radius] = norm * std::exp(-0.5 * i * i / (s2 * s2)) *
                             std::cos(2.0 * std::numbers::pi * f * i *
                                      std::sin(cfg.gabor_theta));
        }
        Grid tmp(w, h), sep(w, h);
        kernels::conv_rows(img.px.data(), w, h, kx.data(), radius, tmp.data());
        kernels::conv_cols(tmp.data(), w, h, ky.data(), radius, sep.data());

        // subtract the DC term: mean(kernel) * box sum over the same support
        double kmean = 0.0;
        for (double kv : kx)
            for (double kv2 : ky) kmean += kv * kv2;
        const int side = 2 * radius + 1;
        kmean /= static_cast<double>(side) * side;
        const Grid pad = mirror_pad(img.px, radius);
        const Grid sat = integral(pad, 1);
        Grid out(w, h);
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c)
                out.at(r, c) = sep.at(r, c) -
                               kmean * box_sum(sat, r, c, r + side - 1, c + side - 1);
        return out;
    }

    const Grid pad = mirror_pad(img.px, radius);
    Grid out(w, h);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            double acc = 0.0;
            for (int kr = -radius; kr <= radius; ++kr)
                for (int kc = -radius; kc <= radius; ++kc)
                    acc += k.at(kr + radius, kc + radius) *
                           pad.at(r + radius - kr, c + radius - kc);
            out.at(r, c) = acc;
        }
    }
    return out;
}

Grid curvature_map(const Image& img) {
    const int w = img.width(), h = img.height();
    const Grid pad = mirror_pad(img.px, 1);
    Grid nx(w, h), ny(w, h);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            const double gx = 0.5 * (pad.at(r + 1, c + 2) - pad.at(r + 1, c));
            const double gy = 0.5 * (pad.at(r + 2, c + 1) - pad.at(r, c + 1));
            const double norm = std::sqrt(gx * gx + gy * gy);
            if (norm < 1e-8) continue;  // leave (0,0)
            nx.at(r, c) = gx / norm;
            ny.at(r, c) = gy / norm;
        }
    }
    const Grid nxp = mirror_pad(nx, 1), nyp = mirror_pad(ny, 1);
    Grid out(w, h);
    for (int r = 0; r < h; ++r) {
        for (int c = 0; c < w; ++c) {
            if (nx.at(r, c) == 0.0 && ny.at(r, c) == 0.0) continue;  // degenerate: K = 0
            const double div = 0.5 * (nxp.at(r + 1, c + 2) - nxp.at(r + 1, c)) +
                               0.5 * (nyp.at(r + 2, c + 1) - nyp.at(r, c + 1));
            out.at(r, c) = -div;
        }
    }
    return out;
}

std::vector<Grid> haar_center_surround(const Image& img, const std::vector<int>& scales_px) {
    const int w = img.width(), h = img.height();
    std::vector<Grid> out;
    out.reserve(scales_px.size());
    for (int s : scales_px) {
        require(s >= 1, "haar scale must be >= 1 px");
        const int a = s / 2;  // center half-extent; side 2a+1 (even s grows to s+1)
        const int b = s;      // surround half-extent; side 2s+1
        const Grid pad = mirror_pad(img.px, b);
        const Grid sat = integral(pad, 1);
        const double n_center = static_cast<double>(2 * a + 1) * (2 * a + 1);
        const double n_outer = static_cast<double>(2 * b + 1) * (2 * b + 1);
        const double n_ring = n_outer - n_center;
        Grid g(w, h);
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                const int pr = r + b, pc = c + b;
                const double outer = box_sum(sat, pr - b, pc - b, pr + b, pc + b);
                const double center = box_sum(sat, pr - a, pc - a, pr + a, pc + a);
                g.at(r, c) = (outer - center) / n_ring - center / n_center;
            }
        }
        out.push_back(std::move(g));
    }
    return out;
}

namespace {

std::string wl_tag(double scale_wl) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%gwl", scale_wl);
    return buf;
}

int wl_to_px(double scale_wl, double wavelength_px) {
    return std::max(1, static_cast<int>(std::lround(scale_wl * wavelength_px)));
}

} // namespace

FeatureStack extract_all(const Image& img, const FeatureConfig& cfg,
                         const std::array<Grid, 4>& conf_features) {
    for (const auto& g : conf_features)
        require(g.same_shape(img.px), "confidence feature dimensions do not match the image");

    FeatureStack fs;
    fs.width = img.width();
    fs.height = img.height();
    fs.spacing_mm = img.spacing_mm;
    fs.wavelength_px = img.wavelength_px;

    auto add = [&fs](std::string group, std::string tag, Grid map) {
        fs.maps.push_back({std::move(group), std::move(tag), std::move(map)});
    };

    // Pixel intensity doubles as the 1 px scale of the patch-mean group.
    add("patch mean", "1px", img.px);

    static const char* kPatchNames[8] = {"patch mean",     "patch median",
                                         "patch variance", "patch std",
                                         "patch skewness", "patch kurtosis",
                                         "patch entropy",  "patch energy"};
    for (double swl : cfg.patch_scales_wl) {
        const int s = wl_to_px(swl, img.wavelength_px);
        auto stats = patch_statistics(img, s, cfg.entropy_bins);
        for (int i = 0; i < 8; ++i) add(kPatchNames[i], wl_tag(swl), std::move(stats[i]));
    }

    add("confidence map", "1px", conf_features[0]);
    add("log-/Shadowing", "multi", conf_features[1]);
    add("log-/Shadowing", "multi-log", conf_features[2]);
    add("Attenuation", "multi", conf_features[3]);

    for (double swl : cfg.cw_scales_wl) {
        const double sigma = std::max(0.5, swl * img.wavelength_px);
        for (int order : cfg.cw_orders) {
            add("CW local statistics", wl_tag(swl) + "-o" + std::to_string(order),
                cw_local_statistics(img, sigma, order));
        }
    }

    auto cum = cw_cumulative(img);
    add("CW cumulative sum", "-", std::move(cum[0]));
    add("CW cumulative mean", "-", std::move(cum[1]));
    add("CW cumulative std", "-", std::move(cum[2]));

    auto lbps = lbp_family(img);
    add("LBP/MCT", "lbp", std::move(lbps[0]));
    add("LBP/MCT", "mct", std::move(lbps[1]));
    add("LBP/MCT", "xlbp", std::move(lbps[2]));
    add("LBP/MCT", "xmct", std::move(lbps[3]));

    add("Rayleigh fit error", wl_tag(cfg.rayleigh_scale_wl),
        rayleigh_fit_error(img, wl_to_px(cfg.rayleigh_scale_wl, img.wavelength_px),
                           cfg.rayleigh_bins));

    add("Gabor texture", "-", gabor_response(img, cfg));
    add("curvature", "-", curvature_map(img));

    auto haars = haar_center_surround(img, cfg.haar_scales_px);
    for (size_t i = 0; i < haars.size(); ++i)
        add("Haar center-surround", std::to_string(cfg.haar_scales_px[i]) + "px",
            std::move(haars[i]));

    for (const auto& e : fs.maps) {
        for (double v : e.map)
            require(std::isfinite(v), "non-finite value in feature map " + e.group);
    }
    return fs;
}

std::vector<std::string> FeatureStack::group_names() const {
    std::vector<std::string> names;
    for (const auto& e : maps)
        if (std::find(names.begin(), names.end(), e.group) == names.end())
            names.push_back(e.group);
    return names;
}

std::vector<size_t> FeatureStack::group_members(const std::string& group) const {
    std::vector<size_t> idx;
    for (size_t i = 0; i < maps.size(); ++i)
        if (maps[i].group == group) idx.push_back(i);
    return idx;
}

void FeatureStack::remove_group(const std::string& group) {
    maps.erase(std::remove_if(maps.begin(), maps.end(),
                              [&](const Entry& e) { return e.group == group; }),
               maps.end());
}

std::vector<double> FeatureStack::pixel_features(size_t pixel_index) const {
    std::vector<double> v(maps.size());
    for (size_t i = 0; i < maps.size(); ++i) v[i] = maps[i].map[pixel_index];
    return v;
}

void save_feature_stack(const FeatureStack& fs, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot write feature stack: " + path);
    out << "usbone-featurestack 1\n";
    out << "width " << fs.width << "\n";
    out << "height " << fs.height << "\n";
    char buf[96];
    std::snprintf(buf, sizeof(buf), "spacing_mm %.17g\nwavelength_px %.17g\n", fs.spacing_mm,
                  fs.wavelength_px);
    out << buf;
    out << "features " << fs.maps.size() << "\n";
    for (const auto& e : fs.maps) out << "feature\t" << e.group << "\t" << e.scale_tag << "\n";
    out << "end_header\n";
    std::vector<float> rowbuf(static_cast<size_t>(fs.width));
    for (const auto& e : fs.maps) {
        for (int r = 0; r < fs.height; ++r) {
            const double* src = e.map.row(r);
            for (int c = 0; c < fs.width; ++c) rowbuf[c] = static_cast<float>(src[c]);
            out.write(reinterpret_cast<const char*>(rowbuf.data()),
                      static_cast<std::streamsize>(sizeof(float) * rowbuf.size()));
        }
    }
    require(out.good(), "write failed: " + path);
}

FeatureStack load_feature_stack(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open feature stack: " + path);
    std::string line;
    std::getline(in, line);
    require(line == "usbone-featurestack 1", "bad feature stack header in " + path);
    FeatureStack fs;
    size_t nfeat = 0;
    while (std::getline(in, line)) {
        if (line == "end_header") break;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "width") ls >> fs.width;
        else if (key == "height") ls >> fs.height;
        else if (key == "spacing_mm") ls >> fs.spacing_mm;
        else if (key == "wavelength_px") ls >> fs.wavelength_px;
        else if (key == "features") ls >> nfeat;
        else if (key == "feature") {
            // feature\t<group>\t<scale_tag>
            auto t1 = line.find('\t');
            auto t2 = line.find('\t', t1 + 1);
            require(t1 != std::string::npos && t2 != std::string::npos,
                    "bad feature line in " + path);
            FeatureStack::Entry e;
            e.group = line.substr(t1 + 1, t2 - t1 - 1);
            e.scale_tag = line.substr(t2 + 1);
            fs.maps.push_back(std::move(e));
        }
    }
    require(fs.maps.size() == nfeat, "feature count mismatch in " + path);
    std::vector<float> rowbuf(static_cast<size_t>(fs.width));
    for (auto& e : fs.maps) {
        e.map = Grid(fs.width, fs.height);
        for (int r = 0; r < fs.height; ++r) {
            in.read(reinterpret_cast<char*>(rowbuf.data()),
                    static_cast<std::streamsize>(sizeof(float) * rowbuf.size()));
            require(in.gcount() == static_cast<std::streamsize>(sizeof(float) * rowbuf.size()),
                    "truncated feature stack: " + path);
            double* dst = e.map.row(r);
            for (int c = 0; c < fs.width; ++c) dst[c] = rowbuf[c];
        }
    }
    return fs;
}

void save_map_f32(const Grid& map, const std::string& name, double spacing_mm,
                  double wavelength_px, const std::string& path) {
    FeatureStack fs;
    fs.width = map.width();
    fs.height = map.height();
    fs.spacing_mm = spacing_mm;
    fs.wavelength_px = wavelength_px;
    fs.maps.push_back({name, "-", map});
    save_feature_stack(fs, path);
}

} // namespace usbone
