#pragma once

// Data-parallel inner loops with a scalar reference implementation and
// vectorized variants picked at runtime from the host CPU. Set
// TIMERANK_KERNELS=scalar in the environment to pin the reference path.

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace trl::kernels {

enum class Backend { scalar, avx2, neon };

std::string_view backend_name(Backend b);

/// Backends this binary was built with and the CPU can run.
std::vector<Backend> available_backends();

Backend active_backend();

/// Switches the dispatch target; throws InvalidArgument if unavailable.
void set_backend(Backend b);

/// Sum of (a[i] - b[i])^2. Spans must have equal length.
double squared_distance(std::span<const double> a, std::span<const double> b);

double sum_of_squares(std::span<const double> a);

/// Largest element; -infinity for an empty span.
double max_value(std::span<const double> a);

/// Number of elements strictly greater than `threshold`.
std::size_t count_greater(std::span<const double> a, double threshold);

// Each backend exposes the same four entry points.
#define TRL_KERNEL_DECLS                                                                  \
    double squared_distance(std::span<const double> a, std::span<const double> b);        \
    double sum_of_squares(std::span<const double> a);                                     \
    double max_value(std::span<const double> a);                                          \
    std::size_t count_greater(std::span<const double> a, double threshold);

namespace scalar {
TRL_KERNEL_DECLS
}
namespace avx2 {
TRL_KERNEL_DECLS
}
namespace neon {
TRL_KERNEL_DECLS
}

#undef TRL_KERNEL_DECLS

} // namespace trl::kernels
