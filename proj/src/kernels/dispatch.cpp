#include "trl/kernels.hpp"

#include "trl/error.hpp"

#include <atomic>
#include <cstdlib>
#include <string>

namespace trl::kernels {

namespace {

struct Table {
    Backend backend;
    double (*squared_distance)(std::span<const double>, std::span<const double>);
    double (*sum_of_squares)(std::span<const double>);
    double (*max_value)(std::span<const double>);
    std::size_t (*count_greater)(std::span<const double>, double);
};

constexpr Table scalar_table{Backend::scalar, scalar::squared_distance, scalar::sum_of_squares,
                             scalar::max_value, scalar::count_greater};
#if defined(TRL_HAVE_AVX2)
constexpr Table avx2_table{Backend::avx2, avx2::squared_distance, avx2::sum_of_squares,
                           avx2::max_value, avx2::count_greater};
#endif
#if defined(TRL_HAVE_NEON)
constexpr Table neon_table{Backend::neon, neon::squared_distance, neon::sum_of_squares,
                           neon::max_value, neon::count_greater};
#endif

bool cpu_has_avx2()
{
#if defined(TRL_HAVE_AVX2)
    return __builtin_cpu_supports("avx2");
#else
    return false;
#endif
}

const Table* table_for(Backend b)
{
    switch (b) {
    case Backend::scalar: return &scalar_table;
    case Backend::avx2:
#if defined(TRL_HAVE_AVX2)
        if (cpu_has_avx2())
            return &avx2_table;
#endif
        return nullptr;
    case Backend::neon:
#if defined(TRL_HAVE_NEON)
        return &neon_table;
#else
        return nullptr;
#endif
    }
    return nullptr;
}

const Table* pick_default()
{
    if (const char* env = std::getenv("TIMERANK_KERNELS"); env && std::string(env) == "scalar")
        return &scalar_table;
    for (auto b : {Backend::avx2, Backend::neon}) {
        if (auto t = table_for(b))
            return t;
    }
    return &scalar_table;
}

std::atomic<const Table*>& current()
{
    static std::atomic<const Table*> table{pick_default()};
    return table;
}

const Table& active()
{
    return *current().load(std::memory_order_acquire);
}

} // namespace

std::string_view backend_name(Backend b)
{
    switch (b) {
    case Backend::scalar: return "scalar";
    case Backend::avx2: return "avx2";
    case Backend::neon: return "neon";
    }
    return "unknown";
}

std::vector<Backend> available_backends()
{
    std::vector<Backend> out;
    for (auto b : {Backend::scalar, Backend::avx2, Backend::neon}) {
        if (table_for(b))
            out.push_back(b);
    }
    return out;
}

Backend active_backend()
{
    return active().backend;
}

void set_backend(Backend b)
{
    auto t = table_for(b);
    if (!t)
        throw InvalidArgument("kernel backend '" + std::string(backend_name(b)) +
                              "' is not available on this host");
    current().store(t, std::memory_order_release);
}

double squared_distance(std::span<const double> a, std::span<const double> b)
{
    if (a.size() != b.size())
        throw InvalidArgument("squared_distance: length mismatch");
    return active().squared_distance(a, b);
}

double sum_of_squares(std::span<const double> a)
{
    return active().sum_of_squares(a);
}

double max_value(std::span<const double> a)
{
    return active().max_value(a);
}

std::size_t count_greater(std::span<const double> a, double threshold)
{
    return active().count_greater(a, threshold);
}

} // namespace trl::kernels
