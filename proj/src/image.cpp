#include "adapnet/image.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "adapnet/errors.hpp"

namespace adapnet {

Image::Image(int h, int w) : height(h), width(w) {
    if (h < 1 || w < 1)
        throw ShapeError("Image: dimensions must be >= 1, got " + std::to_string(h) +
                         "x" + std::to_string(w));
    data.assign(static_cast<std::size_t>(3) * h * w, 0.0);
}

Image Image::filled(int h, int w, double value) {
    Image img(h, w);
    std::fill(img.data.begin(), img.data.end(), value);
    return img;
}

void Image::clamp01() {
    for (double& v : data) v = std::clamp(v, 0.0, 1.0);
}

Image resize_bilinear(const Image& image, int out_h, int out_w) {
    if (out_h < 1 || out_w < 1)
        throw ShapeError("resize_bilinear: target dims must be >= 1");
    // Identical target size must reproduce the input exactly.
    if (out_h == image.height && out_w == image.width) return image;

    Image out(out_h, out_w);
    const int h = image.height, w = image.width;
    const double sy = out_h > 1 ? static_cast<double>(h - 1) / (out_h - 1) : 0.0;
    const double sx = out_w > 1 ? static_cast<double>(w - 1) / (out_w - 1) : 0.0;
    for (int c = 0; c < 3; ++c) {
        for (int oy = 0; oy < out_h; ++oy) {
            const double fy = out_h > 1 ? oy * sy : (h - 1) * 0.5;
            const int y0 = std::min(static_cast<int>(fy), h - 1);
            const int y1 = std::min(y0 + 1, h - 1);
            const double wy = fy - y0;
            for (int ox = 0; ox < out_w; ++ox) {
                const double fx = out_w > 1 ? ox * sx : (w - 1) * 0.5;
                const int x0 = std::min(static_cast<int>(fx), w - 1);
                const int x1 = std::min(x0 + 1, w - 1);
                const double wx = fx - x0;
                const double v =
                    (1 - wy) * ((1 - wx) * image.at(c, y0, x0) + wx * image.at(c, y0, x1)) +
                    wy * ((1 - wx) * image.at(c, y1, x0) + wx * image.at(c, y1, x1));
                out.at(c, oy, ox) = std::clamp(v, 0.0, 1.0);
            }
        }
    }
    return out;
}

Tensor image_to_tensor(const Image& image) {
    Tensor t({3, static_cast<std::size_t>(image.height),
              static_cast<std::size_t>(image.width)});
    t.data = image.data;
    return t;
}

Image tensor_to_image(const Tensor& t) {
    if (t.rank() != 3 || t.shape[0] != 3)
        throw ShapeError("tensor_to_image: expected 3xHxW, got " + t.shape_str());
    Image img(static_cast<int>(t.shape[1]), static_cast<int>(t.shape[2]));
    img.data = t.data;
    return img;
}

void save_ppm(const std::filesystem::path& path, const Image& image) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw DataError("cannot open for write: " + path.string());
    os << "P6\n" << image.width << " " << image.height << "\n255\n";
    std::vector<unsigned char> row(static_cast<std::size_t>(image.width) * 3);
    for (int y = 0; y < image.height; ++y) {
        for (int x = 0; x < image.width; ++x) {
            for (int c = 0; c < 3; ++c) {
                const double v = std::clamp(image.at(c, y, x), 0.0, 1.0);
                row[static_cast<std::size_t>(x) * 3 + c] =
                    static_cast<unsigned char>(std::lround(v * 255.0));
            }
        }
        os.write(reinterpret_cast<const char*>(row.data()),
                 static_cast<std::streamsize>(row.size()));
    }
    if (!os) throw DataError("write failed: " + path.string());
}

Image load_ppm(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw DataError("cannot open for read: " + path.string());
    std::string magic;
    is >> magic;
    if (magic != "P6") throw DataError("not a P6 PPM: " + path.string());
    auto next_int = [&is, &path]() {
        // Skip whitespace and '#' comment lines between header tokens.
        int ch = is.get();
        while (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r' || ch == '#') {
            if (ch == '#') {
                while (ch != '\n' && ch != EOF) ch = is.get();
            }
            ch = is.get();
        }
        int value = 0;
        bool any = false;
        while (ch >= '0' && ch <= '9') {
            value = value * 10 + (ch - '0');
            any = true;
            ch = is.get();
        }
        if (!any) throw DataError("malformed PPM header: " + path.string());
        return value;
    };
    const int w = next_int();
    const int h = next_int();
    const int maxval = next_int();
    if (maxval != 255) throw DataError("unsupported PPM maxval: " + path.string());
    Image img(h, w);
    std::vector<unsigned char> row(static_cast<std::size_t>(w) * 3);
    for (int y = 0; y < h; ++y) {
        is.read(reinterpret_cast<char*>(row.data()),
                static_cast<std::streamsize>(row.size()));
        if (!is) throw DataError("truncated PPM: " + path.string());
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c)
                img.at(c, y, x) = row[static_cast<std::size_t>(x) * 3 + c] / 255.0;
    }
    return img;
}

} // namespace adapnet
