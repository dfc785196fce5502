#include "warplag/sampling.hpp"

#include <cmath>

#include "warplag/errors.hpp"

namespace warplag {

namespace {

double splitmix64_unit(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    z = z ^ (z >> 31);
    return double(z >> 11) * 0x1.0p-53;
}

double frac(double x) { return x - std::floor(x); }

constexpr int kPrimes[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                           41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};

} // namespace

std::vector<std::vector<double>> sample_unit(std::size_t dim, std::size_t count,
                                             std::uint64_t seed) {
    if (dim > std::size(kPrimes))
        throw ContractViolation("sample dimension exceeds the stride table");
    std::uint64_t state = seed;
    std::vector<double> offset(dim), stride(dim);
    for (std::size_t j = 0; j < dim; ++j) {
        offset[j] = splitmix64_unit(state);
        stride[j] = frac(std::sqrt(double(kPrimes[j])));
    }
    std::vector<std::vector<double>> pts(count, std::vector<double>(dim));
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = 0; j < dim; ++j)
            pts[i][j] = frac(offset[j] + double(i) * stride[j]);
    return pts;
}

std::vector<std::vector<double>> sample_box(const Box& box, std::size_t count,
                                            std::uint64_t seed) {
    auto pts = sample_unit(box.dim(), count, seed);
    for (auto& p : pts)
        for (std::size_t j = 0; j < box.dim(); ++j) {
            const auto& r = box.ranges[j];
            p[j] = r[0] + (0.05 + 0.9 * p[j]) * (r[1] - r[0]);
        }
    return pts;
}

} // namespace warplag
