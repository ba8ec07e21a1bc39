#pragma once

#include <span>
#include <vector>

#include "mrqm/model.hpp"
#include "mrqm/pulse.hpp"

namespace mrqm {

// Sampled histories on a uniform grid. `a` and `s` are only filled when the
// producer records internal modes; s[n][i] is tooth n at sample i.
struct TimeTrace
{
    Grid grid;
    std::vector<cplx> a_in;
    std::vector<cplx> a_out;
    std::vector<cplx> a;
    std::vector<std::vector<cplx>> s;

    std::size_t size() const { return a_out.size(); }
    double time(std::size_t i) const { return grid.time(i); }
    bool has_internal_modes() const { return !a.empty(); }
};

// Trapezoidal Int |x|^2 dt over samples [first, last].
double energy(std::span<const cplx> samples, double dt, std::size_t first, std::size_t last);
double energy(std::span<const cplx> samples, double dt);

// sqrt(Int|x - y|^2) / sqrt(Int|y|^2), over the common length.
double relative_l2(std::span<const cplx> x, std::span<const cplx> y);

}  // namespace mrqm
