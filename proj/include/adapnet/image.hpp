#pragma once

#include <filesystem>
#include <vector>

#include "adapnet/tensor.hpp"

namespace adapnet {

// RGB image with intensities in [0,1], stored planar (channel-major)
// so each channel is a contiguous H*W plane.
struct Image {
    int height = 0;
    int width = 0;
    std::vector<double> data; // 3 * height * width

    Image() = default;
    Image(int h, int w);

    double& at(int c, int y, int x) {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }
    double at(int c, int y, int x) const {
        return data[(static_cast<std::size_t>(c) * height + y) * width + x];
    }

    static Image filled(int h, int w, double value);

    void clamp01();
};

// Corner-aligned bilinear resampling; output clamped to [0,1].
Image resize_bilinear(const Image& image, int out_h, int out_w);

Tensor image_to_tensor(const Image& image);      // 3 x H x W
Image tensor_to_image(const Tensor& t);          // expects 3 x H x W

// Binary PPM (P6), 8-bit, maxval 255.
void save_ppm(const std::filesystem::path& path, const Image& image);
Image load_ppm(const std::filesystem::path& path);

} // namespace adapnet
