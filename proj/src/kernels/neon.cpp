// AArch64 only; NEON is part of the baseline ISA there.
#include "trl/kernels.hpp"

#include <arm_neon.h>

#include <limits>

namespace trl::kernels::neon {

double squared_distance(std::span<const double> a, std::span<const double> b)
{
    const std::size_t n = a.size();
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t d = vsubq_f64(vld1q_f64(a.data() + i), vld1q_f64(b.data() + i));
        acc = vaddq_f64(acc, vmulq_f64(d, d));
    }
    double sum = vaddvq_f64(acc);
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

double sum_of_squares(std::span<const double> a)
{
    const std::size_t n = a.size();
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        float64x2_t x = vld1q_f64(a.data() + i);
        acc = vaddq_f64(acc, vmulq_f64(x, x));
    }
    double sum = vaddvq_f64(acc);
    for (; i < n; ++i)
        sum += a[i] * a[i];
    return sum;
}

double max_value(std::span<const double> a)
{
    const std::size_t n = a.size();
    double m = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    if (n >= 2) {
        float64x2_t acc = vdupq_n_f64(m);
        for (; i + 2 <= n; i += 2)
            acc = vmaxq_f64(acc, vld1q_f64(a.data() + i));
        m = vmaxvq_f64(acc);
    }
    for (; i < n; ++i)
        m = a[i] > m ? a[i] : m;
    return m;
}

std::size_t count_greater(std::span<const double> a, double threshold)
{
    const std::size_t n = a.size();
    const float64x2_t t = vdupq_n_f64(threshold);
    uint64x2_t acc = vdupq_n_u64(0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        uint64x2_t gt = vcgtq_f64(vld1q_f64(a.data() + i), t);
        acc = vsubq_u64(acc, gt); // true lanes are all-ones, i.e. -1
    }
    std::size_t count = static_cast<std::size_t>(vaddvq_u64(acc));
    for (; i < n; ++i)
        count += a[i] > threshold ? 1 : 0;
    return count;
}

} // namespace trl::kernels::neon
