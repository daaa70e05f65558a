#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace adapnet {

// Dense row-major 64-bit float tensor with an explicit shape.
struct Tensor {
    std::vector<std::size_t> shape;
    std::vector<double> data;

    Tensor() = default;
    explicit Tensor(std::vector<std::size_t> s);

    static Tensor zeros(std::vector<std::size_t> s) { return Tensor(std::move(s)); }

    std::size_t size() const { return data.size(); }
    std::size_t rank() const { return shape.size(); }
    std::size_t extent(std::size_t d) const { return shape[d]; }

    double& operator[](std::size_t i) { return data[i]; }
    double operator[](std::size_t i) const { return data[i]; }

    // Rank-specific indexing; callers are expected to know the rank.
    double& at3(std::size_t c, std::size_t y, std::size_t x) {
        return data[(c * shape[1] + y) * shape[2] + x];
    }
    double at3(std::size_t c, std::size_t y, std::size_t x) const {
        return data[(c * shape[1] + y) * shape[2] + x];
    }
    double& at2(std::size_t r, std::size_t c) { return data[r * shape[1] + c]; }
    double at2(std::size_t r, std::size_t c) const { return data[r * shape[1] + c]; }

    bool same_shape(const Tensor& o) const { return shape == o.shape; }
    std::string shape_str() const;

    // Throws NumericError when any entry is NaN or Inf.
    void check_finite(const char* where) const;
};

std::size_t shape_product(const std::vector<std::size_t>& shape);

// Binary format: "ADPT", version byte, rank byte, little-endian u64
// extents, then the raw little-endian f64 payload.
void save_tensor(std::ostream& os, const Tensor& t);
Tensor load_tensor(std::istream& is);
void save_tensor_file(const std::filesystem::path& path, const Tensor& t);
Tensor load_tensor_file(const std::filesystem::path& path);

} // namespace adapnet
