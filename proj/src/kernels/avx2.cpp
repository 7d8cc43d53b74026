// Built with -mavx2; only reached after a runtime CPU check.
#include "trl/kernels.hpp"

#include <immintrin.h>

#include <limits>

namespace trl::kernels::avx2 {

namespace {

double hsum(__m256d v)
{
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_add_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_add_sd(lo, swapped));
}

double hmax(__m256d v)
{
    __m128d lo = _mm256_castpd256_pd128(v);
    __m128d hi = _mm256_extractf128_pd(v, 1);
    lo = _mm_max_pd(lo, hi);
    __m128d swapped = _mm_unpackhi_pd(lo, lo);
    return _mm_cvtsd_f64(_mm_max_sd(lo, swapped));
}

} // namespace

double squared_distance(std::span<const double> a, std::span<const double> b)
{
    const std::size_t n = a.size();
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
        __m256d d1 = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i + 4),
                                   _mm256_loadu_pd(b.data() + i + 4));
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d0, d0));
        acc1 = _mm256_add_pd(acc1, _mm256_mul_pd(d1, d1));
    }
    for (; i + 4 <= n; i += 4) {
        __m256d d = _mm256_sub_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
        acc0 = _mm256_add_pd(acc0, _mm256_mul_pd(d, d));
    }
    double sum = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

double sum_of_squares(std::span<const double> a)
{
    const std::size_t n = a.size();
    __m256d acc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d x = _mm256_loadu_pd(a.data() + i);
        acc = _mm256_add_pd(acc, _mm256_mul_pd(x, x));
    }
    double sum = hsum(acc);
    for (; i < n; ++i)
        sum += a[i] * a[i];
    return sum;
}

double max_value(std::span<const double> a)
{
    const std::size_t n = a.size();
    double m = -std::numeric_limits<double>::infinity();
    std::size_t i = 0;
    if (n >= 4) {
        __m256d acc = _mm256_set1_pd(m);
        for (; i + 4 <= n; i += 4)
            acc = _mm256_max_pd(acc, _mm256_loadu_pd(a.data() + i));
        m = hmax(acc);
    }
    for (; i < n; ++i)
        m = a[i] > m ? a[i] : m;
    return m;
}

std::size_t count_greater(std::span<const double> a, double threshold)
{
    const std::size_t n = a.size();
    const __m256d t = _mm256_set1_pd(threshold);
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        __m256d gt = _mm256_cmp_pd(_mm256_loadu_pd(a.data() + i), t, _CMP_GT_OQ);
        count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(gt))));
    }
    for (; i < n; ++i)
        count += a[i] > threshold ? 1 : 0;
    return count;
}

} // namespace trl::kernels::avx2
