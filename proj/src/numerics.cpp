#include "adapnet/numerics.hpp"

#include <cmath>
#include <cstring>
#include <thread>

#include "adapnet/errors.hpp"

namespace adapnet {

int conv_out_extent(int in, int k, int stride, int pad) {
    return (in + 2 * pad - k) / stride + 1;
}

namespace {

struct ConvDims {
    int cin, h, w, cout, kh, kw, oh, ow, hp, wp;
};

ConvDims conv_dims(const Tensor& input, const Tensor& kernels, int stride, int pad) {
    if (input.rank() != 3)
        throw ShapeError("conv2d: input must be CxHxW, got " + input.shape_str());
    if (kernels.rank() != 4)
        throw ShapeError("conv2d: kernels must be CoutxCinxKhxKw, got " +
                         kernels.shape_str());
    if (stride < 1) throw ShapeError("conv2d: stride must be >= 1");
    if (pad < 0) throw ShapeError("conv2d: pad must be >= 0");
    if (input.shape[0] != kernels.shape[1])
        throw ShapeError("conv2d: channel mismatch, input " + input.shape_str() +
                         " vs kernels " + kernels.shape_str());
    ConvDims d;
    d.cin = static_cast<int>(input.shape[0]);
    d.h = static_cast<int>(input.shape[1]);
    d.w = static_cast<int>(input.shape[2]);
    d.cout = static_cast<int>(kernels.shape[0]);
    d.kh = static_cast<int>(kernels.shape[2]);
    d.kw = static_cast<int>(kernels.shape[3]);
    d.oh = conv_out_extent(d.h, d.kh, stride, pad);
    d.ow = conv_out_extent(d.w, d.kw, stride, pad);
    if (d.oh < 1 || d.ow < 1)
        throw ShapeError("conv2d: kernels " + kernels.shape_str() +
                         " too large for input " + input.shape_str());
    d.hp = d.h + 2 * pad;
    d.wp = d.w + 2 * pad;
    return d;
}

// Zero-padded copy; hot loops then run branch-free.
std::vector<double> pad_input(const Tensor& input, const ConvDims& d, int pad) {
    std::vector<double> buf(static_cast<std::size_t>(d.cin) * d.hp * d.wp, 0.0);
    for (int c = 0; c < d.cin; ++c) {
        const double* src = input.data.data() + static_cast<std::size_t>(c) * d.h * d.w;
        double* dst = buf.data() + (static_cast<std::size_t>(c) * d.hp + pad) * d.wp + pad;
        for (int y = 0; y < d.h; ++y)
            std::memcpy(dst + static_cast<std::size_t>(y) * d.wp,
                        src + static_cast<std::size_t>(y) * d.w,
                        sizeof(double) * d.w);
    }
    return buf;
}

} // namespace

Tensor conv2d(const Tensor& input, const Tensor& kernels, int stride, int pad) {
    const ConvDims d = conv_dims(input, kernels, stride, pad);
    const std::vector<double> in = pad_input(input, d, pad);
    Tensor out({static_cast<std::size_t>(d.cout), static_cast<std::size_t>(d.oh),
                static_cast<std::size_t>(d.ow)});
    const std::size_t plane_p = static_cast<std::size_t>(d.hp) * d.wp;
    for (int co = 0; co < d.cout; ++co) {
        double* out_plane = out.data.data() + static_cast<std::size_t>(co) * d.oh * d.ow;
        for (int ci = 0; ci < d.cin; ++ci) {
            const double* in_plane = in.data() + ci * plane_p;
            const double* kslice =
                kernels.data.data() +
                (static_cast<std::size_t>(co) * d.cin + ci) * d.kh * d.kw;
            for (int ky = 0; ky < d.kh; ++ky) {
                for (int kx = 0; kx < d.kw; ++kx) {
                    const double wgt = kslice[ky * d.kw + kx];
                    if (wgt == 0.0) continue;
                    for (int oy = 0; oy < d.oh; ++oy) {
                        const double* in_row =
                            in_plane + static_cast<std::size_t>(oy * stride + ky) * d.wp + kx;
                        double* out_row = out_plane + static_cast<std::size_t>(oy) * d.ow;
                        if (stride == 1) {
                            for (int ox = 0; ox < d.ow; ++ox)
                                out_row[ox] += wgt * in_row[ox];
                        } else {
                            for (int ox = 0; ox < d.ow; ++ox)
                                out_row[ox] += wgt * in_row[ox * stride];
                        }
                    }
                }
            }
        }
    }
    out.check_finite("conv2d");
    return out;
}

std::pair<Tensor, Tensor> conv2d_backward(const Tensor& upstream, const Tensor& input,
                                          const Tensor& kernels, int stride, int pad) {
    const ConvDims d = conv_dims(input, kernels, stride, pad);
    if (upstream.rank() != 3 || static_cast<int>(upstream.shape[0]) != d.cout ||
        static_cast<int>(upstream.shape[1]) != d.oh ||
        static_cast<int>(upstream.shape[2]) != d.ow)
        throw ShapeError("conv2d_backward: upstream " + upstream.shape_str() +
                         " does not match forward output " + std::to_string(d.cout) +
                         "x" + std::to_string(d.oh) + "x" + std::to_string(d.ow));

    const std::vector<double> in = pad_input(input, d, pad);
    Tensor grad_kernels(kernels.shape);
    std::vector<double> grad_in_pad(in.size(), 0.0);
    const std::size_t plane_p = static_cast<std::size_t>(d.hp) * d.wp;

    for (int co = 0; co < d.cout; ++co) {
        const double* up_plane =
            upstream.data.data() + static_cast<std::size_t>(co) * d.oh * d.ow;
        for (int ci = 0; ci < d.cin; ++ci) {
            const double* in_plane = in.data() + ci * plane_p;
            double* gin_plane = grad_in_pad.data() + ci * plane_p;
            const std::size_t kbase =
                (static_cast<std::size_t>(co) * d.cin + ci) * d.kh * d.kw;
            for (int ky = 0; ky < d.kh; ++ky) {
                for (int kx = 0; kx < d.kw; ++kx) {
                    const double wgt = kernels.data[kbase + ky * d.kw + kx];
                    double acc = 0.0;
                    for (int oy = 0; oy < d.oh; ++oy) {
                        const double* in_row =
                            in_plane + static_cast<std::size_t>(oy * stride + ky) * d.wp + kx;
                        double* gin_row =
                            gin_plane + static_cast<std::size_t>(oy * stride + ky) * d.wp + kx;
                        const double* up_row = up_plane + static_cast<std::size_t>(oy) * d.ow;
                        if (stride == 1) {
                            for (int ox = 0; ox < d.ow; ++ox) {
                                acc += up_row[ox] * in_row[ox];
                                gin_row[ox] += up_row[ox] * wgt;
                            }
                        } else {
                            for (int ox = 0; ox < d.ow; ++ox) {
                                acc += up_row[ox] * in_row[ox * stride];
                                gin_row[ox * stride] += up_row[ox] * wgt;
                            }
                        }
                    }
                    grad_kernels.data[kbase + ky * d.kw + kx] = acc;
                }
            }
        }
    }

    // Crop the padding border back off.
    Tensor grad_input(input.shape);
    for (int c = 0; c < d.cin; ++c) {
        const double* src =
            grad_in_pad.data() + (static_cast<std::size_t>(c) * d.hp + pad) * d.wp + pad;
        double* dst = grad_input.data.data() + static_cast<std::size_t>(c) * d.h * d.w;
        for (int y = 0; y < d.h; ++y)
            std::memcpy(dst + static_cast<std::size_t>(y) * d.w,
                        src + static_cast<std::size_t>(y) * d.wp,
                        sizeof(double) * d.w);
    }
    grad_input.check_finite("conv2d_backward");
    grad_kernels.check_finite("conv2d_backward");
    return {std::move(grad_input), std::move(grad_kernels)};
}

std::vector<double> global_avg_pool(const Tensor& map) {
    if (map.rank() != 3)
        throw ShapeError("global_avg_pool: expected CxHxW, got " + map.shape_str());
    const std::size_t c = map.shape[0], hw = map.shape[1] * map.shape[2];
    std::vector<double> out(c, 0.0);
    for (std::size_t i = 0; i < c; ++i) {
        const double* plane = map.data.data() + i * hw;
        double acc = 0.0;
        for (std::size_t j = 0; j < hw; ++j) acc += plane[j];
        out[i] = acc / static_cast<double>(hw);
    }
    return out;
}

Tensor global_avg_pool_backward(std::span<const double> grad, std::size_t h,
                                std::size_t w) {
    Tensor out({grad.size(), h, w});
    const double inv = 1.0 / static_cast<double>(h * w);
    for (std::size_t c = 0; c < grad.size(); ++c) {
        double* plane = out.data.data() + c * h * w;
        const double g = grad[c] * inv;
        for (std::size_t j = 0; j < h * w; ++j) plane[j] = g;
    }
    return out;
}

double l2_norm(std::span<const double> v) {
    double acc = 0.0;
    for (const double x : v) acc += x * x;
    return std::sqrt(acc);
}

std::vector<double> l2_normalize(std::span<const double> v) {
    const double n = l2_norm(v);
    std::vector<double> out(v.begin(), v.end());
    if (n < kNormEps) {
        std::fill(out.begin(), out.end(), 0.0);
        return out;
    }
    for (double& x : out) x /= n;
    return out;
}

std::vector<double> l2_normalize_backward(std::span<const double> grad,
                                          std::span<const double> v) {
    const double n = l2_norm(v);
    std::vector<double> out(v.size(), 0.0);
    if (n < kNormEps) return out;
    double dot = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) dot += grad[i] * v[i] / n;
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = (grad[i] - dot * v[i] / n) / n;
    return out;
}

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
    if (n == 0) return;
    const std::size_t hw = std::thread::hardware_concurrency();
    const std::size_t workers = std::min<std::size_t>(n, hw > 0 ? hw : 1);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    threads.reserve(workers);
    std::exception_ptr error;
    std::mutex error_mutex;
    for (std::size_t t = 0; t < workers; ++t) {
        const std::size_t lo = n * t / workers;
        const std::size_t hi = n * (t + 1) / workers;
        threads.emplace_back([&, lo, hi] {
            try {
                for (std::size_t i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                const std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    if (error) std::rethrow_exception(error);
}

} // namespace adapnet
