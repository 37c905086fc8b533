#include "geneo/validate.hpp"

#include <algorithm>
#include <cmath>

namespace geneo {

EquivarianceReport verify_equivariance(const FunctionMap& op, const Group& group,
                                       std::span<const SampledFunction> probes) {
    EquivarianceReport report;
    for (std::size_t p = 0; p < probes.size(); ++p) {
        const SampledFunction base = op(probes[p]);
        for (const auto& g : group.elements()) {
            const double v = sup_distance(op(act(probes[p], g)), act(base, g));
            if (v > report.max_violation) {
                report.max_violation = v;
                report.probe = p;
                report.element = g;
            }
        }
    }
    return report;
}

EquivarianceReport verify_equivariance(const Operator& op, const Group& group,
                                       std::span<const SampledFunction> probes) {
    return verify_equivariance([&op](const SampledFunction& f) { return op.apply(f); }, group, probes);
}

NonexpansivityReport verify_nonexpansivity(const FunctionMap& op, std::span<const FunctionPair> pairs) {
    NonexpansivityReport report;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        const auto& [a, b] = pairs[k];
        const double in = sup_distance(a, b);
        const double out = sup_distance(op(a), op(b));
        const double excess = out - in;
        if (excess > report.max_excess) {
            report = {excess, k, in, out};
        }
    }
    return report;
}

NonexpansivityReport verify_nonexpansivity(const Operator& op, std::span<const FunctionPair> pairs) {
    return verify_nonexpansivity([&op](const SampledFunction& f) { return op.apply(f); }, pairs);
}

SampledFunction random_lipschitz_function(Rng& rng, GridCircle grid, double lipschitz, double lo,
                                          double hi) {
    const std::size_t n = grid.size();
    const double step = lipschitz * grid.spacing();
    std::uniform_real_distribution<double> inc(-0.5 * step, 0.5 * step);
    std::vector<double> d(n);
    double mean = 0.0;
    for (auto& x : d) {
        x = inc(rng);
        mean += x;
    }
    mean /= static_cast<double>(n);
    // |d_i - mean| <= step, and the increments now sum to zero around the loop.
    std::uniform_real_distribution<double> start(lo, hi);
    std::vector<double> v(n);
    double w = start(rng);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = std::clamp(w, lo, hi);
        w += d[i] - mean;
    }
    return SampledFunction(grid, std::move(v));
}

std::vector<SampledFunction> probe_set(Rng& rng, GridCircle grid, std::size_t count) {
    std::vector<SampledFunction> out;
    out.reserve(count + 2);
    out.push_back(abs_sin(grid));
    out.push_back(sin_sq(grid));
    for (std::size_t i = 0; i < count; ++i) out.push_back(random_lipschitz_function(rng, grid));
    return out;
}

namespace {

SampledFunction perturb(Rng& rng, const SampledFunction& f) {
    std::uniform_real_distribution<double> amp(0.0, 0.1);
    std::uniform_int_distribution<int> mode(0, 1);
    const std::size_t n = f.size();
    std::vector<double> v(f.values().begin(), f.values().end());
    const double a = amp(rng);
    if (mode(rng) == 0) {
        for (auto& x : v) x = std::clamp(x + a, 0.0, 1.0);
    } else {
        std::uniform_int_distribution<std::size_t> centre(0, n - 1);
        const std::size_t c = centre(rng);
        const std::size_t width = std::max<std::size_t>(1, n / 8);
        for (std::size_t j = 0; j < width; ++j) {
            const double h = a * (1.0 - static_cast<double>(j) / static_cast<double>(width));
            auto& x = v[(c + j) % n];
            x = std::clamp(x + h, 0.0, 1.0);
        }
    }
    return SampledFunction(f.grid(), std::move(v));
}

}  // namespace

std::vector<FunctionPair> probe_pairs(Rng& rng, GridCircle grid, std::size_t count) {
    std::vector<FunctionPair> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        SampledFunction a = random_lipschitz_function(rng, grid);
        if (k % 2 == 0) {
            out.emplace_back(a, random_lipschitz_function(rng, grid));
        } else {
            SampledFunction b = perturb(rng, a);
            out.emplace_back(std::move(a), std::move(b));
        }
    }
    return out;
}

}  // namespace geneo
