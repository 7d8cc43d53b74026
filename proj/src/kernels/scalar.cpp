#include "trl/kernels.hpp"

#include <limits>

namespace trl::kernels::scalar {

double squared_distance(std::span<const double> a, std::span<const double> b)
{
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        sum += d * d;
    }
    return sum;
}

double sum_of_squares(std::span<const double> a)
{
    double sum = 0.0;
    for (double x : a)
        sum += x * x;
    return sum;
}

double max_value(std::span<const double> a)
{
    double m = -std::numeric_limits<double>::infinity();
    for (double x : a)
        m = x > m ? x : m;
    return m;
}

std::size_t count_greater(std::span<const double> a, double threshold)
{
    std::size_t n = 0;
    for (double x : a)
        n += x > threshold ? 1 : 0;
    return n;
}

} // namespace trl::kernels::scalar
