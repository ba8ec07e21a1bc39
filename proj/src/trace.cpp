#include "mrqm/trace.hpp"

#include <algorithm>
#include <cmath>

namespace mrqm {

double energy(std::span<const cplx> samples, double dt, std::size_t first, std::size_t last)
{
    if (samples.empty() || first >= samples.size())
        return 0.0;
    last = std::min(last, samples.size() - 1);
    if (last <= first)
        return 0.0;
    double sum = 0.5 * (std::norm(samples[first]) + std::norm(samples[last]));
    for (std::size_t i = first + 1; i < last; ++i)
        sum += std::norm(samples[i]);
    return sum * dt;
}

double energy(std::span<const cplx> samples, double dt)
{
    return samples.empty() ? 0.0 : energy(samples, dt, 0, samples.size() - 1);
}

double relative_l2(std::span<const cplx> x, std::span<const cplx> y)
{
    const std::size_t n = std::min(x.size(), y.size());
    double diff = 0.0;
    double ref = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        diff += std::norm(x[i] - y[i]);
        ref += std::norm(y[i]);
    }
    if (ref == 0.0)
        return diff == 0.0 ? 0.0 : INFINITY;
    return std::sqrt(diff / ref);
}

}  // namespace mrqm
