#include "usbone/error.hpp"
#include "usbone/image.hpp"

#include <png.h>

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace usbone {

namespace {

struct RawGray {
    int width = 0, height = 0;
    int maxval = 255;
    std::vector<uint16_t> v;  // row-major
};

std::string meta_path_for(const std::string& image_path) { return image_path + ".meta"; }

bool has_suffix(const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
}

int read_pnm_token(std::istream& in) {
    // skips whitespace and '#' comments
    for (;;) {
        int ch = in.peek();
        if (ch == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(ch)) {
            in.get();
        } else {
            break;
        }
    }
    int value = -1;
    in >> value;
    return value;
}

RawGray read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(in.good(), "cannot open image file: " + path);
    char magic[2] = {0, 0};
    in.read(magic, 2);
    require(magic[0] == 'P' && magic[1] == '5', "not a binary PGM (P5) file: " + path);
    RawGray g;
    g.width = read_pnm_token(in);
    g.height = read_pnm_token(in);
    g.maxval = read_pnm_token(in);
    require(g.width > 0 && g.height > 0, "bad PGM dimensions in " + path);
    require(g.maxval > 0 && g.maxval < 65536, "unsupported PGM maxval in " + path);
    in.get();  // single whitespace after maxval
    const size_t n = static_cast<size_t>(g.width) * g.height;
    g.v.resize(n);
    if (g.maxval < 256) {
        std::vector<uint8_t> buf(n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(n));
        require(in.gcount() == static_cast<std::streamsize>(n), "truncated PGM: " + path);
        for (size_t i = 0; i < n; ++i) g.v[i] = buf[i];
    } else {
        std::vector<uint8_t> buf(2 * n);
        in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(2 * n));
        require(in.gcount() == static_cast<std::streamsize>(2 * n), "truncated PGM: " + path);
        for (size_t i = 0; i < n; ++i)
            g.v[i] = static_cast<uint16_t>((buf[2 * i] << 8) | buf[2 * i + 1]);  // big-endian
    }
    return g;
}

void write_pgm(const RawGray& g, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    require(out.good(), "cannot write image file: " + path);
    out << "P5\n" << g.width << " " << g.height << "\n" << g.maxval << "\n";
    const size_t n = static_cast<size_t>(g.width) * g.height;
    if (g.maxval < 256) {
        std::vector<uint8_t> buf(n);
        for (size_t i = 0; i < n; ++i) buf[i] = static_cast<uint8_t>(g.v[i]);
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(n));
    } else {
        std::vector<uint8_t> buf(2 * n);
        for (size_t i = 0; i < n; ++i) {
            buf[2 * i] = static_cast<uint8_t>(g.v[i] >> 8);
            buf[2 * i + 1] = static_cast<uint8_t>(g.v[i] & 0xff);
        }
        out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(2 * n));
    }
    require(out.good(), "write failed: " + path);
}

RawGray read_png_gray(const std::string& path) {
    FILE* fp = std::fopen(path.c_str(), "rb");
    require(fp != nullptr, "cannot open image file: " + path);
    png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw ValidationError("failed to decode PNG: " + path);
    }
    png_init_io(png, fp);
    png_read_info(png, info);
    const png_byte color = png_get_color_type(png, info);
    const png_byte depth = png_get_bit_depth(png, info);
    if (color != PNG_COLOR_TYPE_GRAY || (depth != 8 && depth != 16)) {
        png_destroy_read_struct(&png, &info, nullptr);
        std::fclose(fp);
        throw ValidationError("PNG must be 8- or 16-bit grayscale: " + path);
    }
    RawGray g;
    g.width = static_cast<int>(png_get_image_width(png, info));
    g.height = static_cast<int>(png_get_image_height(png, info));
    g.maxval = depth == 8 ? 255 : 65535;
    g.v.resize(static_cast<size_t>(g.width) * g.height);
    std::vector<uint8_t> rowbuf(png_get_rowbytes(png, info));
    for (int r = 0; r < g.height; ++r) {
        png_read_row(png, rowbuf.data(), nullptr);
        for (int c = 0; c < g.width; ++c) {
            g.v[static_cast<size_t>(r) * g.width + c] =
                depth == 8 ? rowbuf[c]
                           : static_cast<uint16_t>((rowbuf[2 * c] << 8) | rowbuf[2 * c + 1]);
        }
    }
    png_destroy_read_struct(&png, &info, nullptr);
    std::fclose(fp);
    return g;
}

void write_png_rows(const std::string& path, int width, int height, int color_type,
                    const std::vector<uint8_t>& bytes) {
    FILE* fp = std::fopen(path.c_str(), "wb");
    require(fp != nullptr, "cannot write image file: " + path);
    png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, nullptr, nullptr, nullptr);
    png_infop info = png_create_info_struct(png);
    if (setjmp(png_jmpbuf(png))) {
        png_destroy_write_struct(&png, &info);
        std::fclose(fp);
        throw ValidationError("failed to encode PNG: " + path);
    }
    png_init_io(png, fp);
    png_set_IHDR(png, info, width, height, 8, color_type, PNG_INTERLACE_NONE,
                 PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
    png_write_info(png, info);
    const size_t stride = bytes.size() / height;
    for (int r = 0; r < height; ++r)
        png_write_row(png, const_cast<png_bytep>(bytes.data() + static_cast<size_t>(r) * stride));
    png_write_end(png, nullptr);
    png_destroy_write_struct(&png, &info);
    std::fclose(fp);
}

struct Meta {
    std::optional<double> spacing_mm;
    std::optional<double> wavelength_px;
};

Meta read_meta(const std::string& image_path) {
    Meta m;
    std::ifstream in(meta_path_for(image_path));
    if (!in.good()) return m;
    std::string line;
    while (std::getline(in, line)) {
        auto eq = line.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = line.substr(0, eq);
        const double value = std::stod(line.substr(eq + 1));
        if (key == "spacing_mm") m.spacing_mm = value;
        if (key == "wavelength_px") m.wavelength_px = value;
    }
    return m;
}

} // namespace

void save_meta(const std::string& image_path, double spacing_mm, double wavelength_px) {
    std::ofstream out(meta_path_for(image_path));
    require(out.good(), "cannot write meta file for " + image_path);
    char buf[128];
    std::snprintf(buf, sizeof(buf), "spacing_mm=%.17g\nwavelength_px=%.17g\n",
                  spacing_mm, wavelength_px);
    out << buf;
}

Image load_image(const std::string& path, std::optional<double> spacing_override,
                 std::optional<double> wavelength_override) {
    require(std::filesystem::exists(path), "image file does not exist: " + path);
    RawGray raw = has_suffix(path, ".png") ? read_png_gray(path) : read_pgm(path);

    Meta meta = read_meta(path);
    if (spacing_override) meta.spacing_mm = spacing_override;
    if (wavelength_override) meta.wavelength_px = wavelength_override;
    require(meta.spacing_mm.has_value(),
            "missing spacing_mm: no .meta sidecar for " + path + " and no override given");
    require(*meta.spacing_mm > 0, "spacing_mm must be positive: " + path);
    const double wavelength = meta.wavelength_px.value_or(1.0);
    require(wavelength >= 1.0, "wavelength_px must be >= 1: " + path);

    Image img;
    img.px = Grid(raw.width, raw.height);
    img.spacing_mm = *meta.spacing_mm;
    img.wavelength_px = wavelength;
    const double inv = 1.0 / raw.maxval;
    for (size_t i = 0; i < raw.v.size(); ++i) img.px[i] = raw.v[i] * inv;
    return img;
}

void save_image_pgm(const Image& img, const std::string& path, int bits) {
    require(bits == 8 || bits == 16, "PGM bit depth must be 8 or 16");
    RawGray raw;
    raw.width = img.width();
    raw.height = img.height();
    raw.maxval = bits == 8 ? 255 : 65535;
    raw.v.resize(img.px.size());
    for (size_t i = 0; i < img.px.size(); ++i) {
        const double v = std::clamp(img.px[i], 0.0, 1.0);
        raw.v[i] = static_cast<uint16_t>(std::lround(v * raw.maxval));
    }
    write_pgm(raw, path);
    save_meta(path, img.spacing_mm, img.wavelength_px);
}

void save_image_png(const Image& img, const std::string& path) {
    std::vector<uint8_t> bytes(img.px.size());
    for (size_t i = 0; i < img.px.size(); ++i)
        bytes[i] = static_cast<uint8_t>(std::lround(std::clamp(img.px[i], 0.0, 1.0) * 255.0));
    write_png_rows(path, img.width(), img.height(), PNG_COLOR_TYPE_GRAY, bytes);
    save_meta(path, img.spacing_mm, img.wavelength_px);
}

Delineation load_delineation_csv(const std::string& path, double spacing_mm) {
    std::ifstream in(path);
    require(in.good(), "cannot open delineation file: " + path);
    Delineation d;
    d.spacing_mm = spacing_mm;
    std::string line;
    std::getline(in, line);  // header
    require(line.rfind("col,depth_px", 0) == 0, "bad delineation CSV header in " + path);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto comma = line.find(',');
        require(comma != std::string::npos, "bad delineation CSV row in " + path);
        const int col = std::stoi(line.substr(0, comma));
        const double depth = std::stod(line.substr(comma + 1));
        require(d.entries.find(col) == d.entries.end(),
                "duplicate column in delineation CSV: " + path);
        d.entries[col] = depth;
    }
    return d;
}

void save_delineation_csv(const Delineation& d, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // binary: keep LF endings
    require(out.good(), "cannot write delineation file: " + path);
    out << "col,depth_px\n";
    char buf[64];
    for (const auto& [col, depth] : d.entries) {
        std::snprintf(buf, sizeof(buf), "%d,%.17g\n", col, depth);
        out << buf;
    }
}

LabelMap load_labelmap_pgm(const std::string& path, Scheme scheme) {
    RawGray raw = read_pgm(path);
    LabelMap lm(raw.width, raw.height, scheme);
    for (size_t i = 0; i < raw.v.size(); ++i) {
        require(raw.v[i] <= 2, "label map pixel value out of {0,1,2}: " + path);
        lm.labels[i] = static_cast<Label>(raw.v[i]);
    }
    return lm;
}

void save_labelmap_pgm(const LabelMap& lm, const std::string& path) {
    RawGray raw;
    raw.width = lm.width;
    raw.height = lm.height;
    raw.maxval = 2;
    raw.v.resize(lm.labels.size());
    for (size_t i = 0; i < lm.labels.size(); ++i)
        raw.v[i] = static_cast<uint16_t>(lm.labels[i]);
    write_pgm(raw, path);
}

void save_overlay_png(const Image& img, const Delineation& pred, const Delineation& gs,
                      const std::string& path) {
    const int w = img.width(), h = img.height();
    std::vector<uint8_t> rgb(static_cast<size_t>(w) * h * 3);
    for (int r = 0; r < h; ++r)
        for (int c = 0; c < w; ++c) {
            const auto v = static_cast<uint8_t>(
                std::lround(std::clamp(img.px.at(r, c), 0.0, 1.0) * 255.0));
            const size_t o = (static_cast<size_t>(r) * w + c) * 3;
            rgb[o] = rgb[o + 1] = rgb[o + 2] = v;
        }
    auto draw = [&](const Delineation& d, int channel) {
        for (const auto& [col, depth] : d.entries) {
            if (col < 0 || col >= w) continue;
            const int r = std::clamp(static_cast<int>(std::lround(depth)), 0, h - 1);
            // connect to the neighbouring annotated column for a solid curve
            int r2 = r;
            auto next = d.entries.find(col + 1);
            if (next != d.entries.end())
                r2 = std::clamp(static_cast<int>(std::lround(next->second)), 0, h - 1);
            for (int rr = std::min(r, r2); rr <= std::max(r, r2); ++rr) {
                const size_t o = (static_cast<size_t>(rr) * w + col) * 3;
                rgb[o] = rgb[o + 1] = rgb[o + 2] = 0;
                rgb[o + channel] = 255;
            }
        }
    };
    draw(gs, 2);    // blue
    draw(pred, 0);  // red
    write_png_rows(path, w, h, PNG_COLOR_TYPE_RGB, rgb);
}

} // namespace usbone
