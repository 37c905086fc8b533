#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <utility>
#include <vector>

#include "geneo/function_space.hpp"
#include "geneo/operator.hpp"

namespace geneo {

using Rng = std::mt19937_64;
using FunctionPair = std::pair<SampledFunction, SampledFunction>;
/// Any map on sampled functions; lets the validators check maps that are not
/// operator trees (e.g. pointwise squaring).
using FunctionMap = std::function<SampledFunction(const SampledFunction&)>;

struct EquivarianceReport {
    double max_violation = 0.0;
    std::size_t probe = 0;               // index into probes of the witness
    std::optional<GroupElement> element; // witnessing g, unset when no violation
};

/// max over probes phi and g in G of ||F(phi o g) - F(phi) o g||_inf.
EquivarianceReport verify_equivariance(const FunctionMap& op, const Group& group,
                                       std::span<const SampledFunction> probes);
EquivarianceReport verify_equivariance(const Operator& op, const Group& group,
                                       std::span<const SampledFunction> probes);

struct NonexpansivityReport {
    double max_excess = 0.0;  // clamped at 0
    std::size_t pair = 0;     // index of the witnessing pair
    double input_distance = 0.0;
    double output_distance = 0.0;
};

/// max over pairs of ||F(a) - F(b)||_inf - ||a - b||_inf, clamped at 0.
NonexpansivityReport verify_nonexpansivity(const FunctionMap& op, std::span<const FunctionPair> pairs);
NonexpansivityReport verify_nonexpansivity(const Operator& op, std::span<const FunctionPair> pairs);

/// Random L-Lipschitz function into [lo, hi] on the circle: zero-mean random
/// increments of size at most L * 2pi/n, accumulated from a random start and
/// clamped. Clamping is 1-Lipschitz so the result stays L-Lipschitz, including
/// across the wrap-around edge.
SampledFunction random_lipschitz_function(Rng& rng, GridCircle grid, double lipschitz = 1.0,
                                          double lo = 0.0, double hi = 1.0);

/// `count` random unit-Lipschitz probes, preceded by abs_sin and sin_sq.
std::vector<SampledFunction> probe_set(Rng& rng, GridCircle grid, std::size_t count);

/// Mix of independent random pairs and small perturbations (constant shifts
/// and local bumps, clamped to [0, 1]) of random probes.
std::vector<FunctionPair> probe_pairs(Rng& rng, GridCircle grid, std::size_t count);

}  // namespace geneo
