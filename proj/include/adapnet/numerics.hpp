#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "adapnet/tensor.hpp"

namespace adapnet {

// Output extent for one spatial dimension (floor semantics, as in the
// usual deep-learning convention).
int conv_out_extent(int in, int k, int stride, int pad);

// Cross-correlation of a Cin x H x W input with Cout x Cin x kh x kw
// kernels, zero padding. No kernel flip, no bias.
Tensor conv2d(const Tensor& input, const Tensor& kernels, int stride, int pad);

// Exact gradients of sum(upstream * conv2d(input, kernels)) with
// respect to input and kernels.
std::pair<Tensor, Tensor> conv2d_backward(const Tensor& upstream, const Tensor& input,
                                          const Tensor& kernels, int stride, int pad);

// Channel-wise spatial mean of a C x H x W map.
std::vector<double> global_avg_pool(const Tensor& map);

// Adjoint of global_avg_pool: spreads g[c] uniformly over H x W.
Tensor global_avg_pool_backward(std::span<const double> grad, std::size_t h,
                                std::size_t w);

double l2_norm(std::span<const double> v);

// v / ||v|| when ||v|| >= 1e-12, zero vector otherwise.
std::vector<double> l2_normalize(std::span<const double> v);

// Gradient of l2_normalize at input v given the gradient at its
// output. Returns zeros in the guarded degenerate case.
std::vector<double> l2_normalize_backward(std::span<const double> grad,
                                          std::span<const double> v);

inline constexpr double kNormEps = 1e-12;

// Runs fn(i) for i in [0, n) across a few threads with a fixed block
// partition; results must be written to disjoint slots so the output
// is independent of scheduling.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn);

} // namespace adapnet
