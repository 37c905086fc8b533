// Acceptance suite: one PASS/FAIL line per criterion. Exit status is nonzero
// if any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "geneo/approximation.hpp"
#include "geneo/io.hpp"
#include "geneo/matching.hpp"
#include "geneo/operator.hpp"
#include "geneo/persistence.hpp"
#include "geneo/validate.hpp"
#include "oracles.hpp"

using namespace geneo;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

int failures = 0;

void run(int id, const char* title, double time_limit_s, const std::function<Outcome()>& body) {
    const auto start = std::chrono::steady_clock::now();
    Outcome out;
    try {
        out = body();
    } catch (const std::exception& e) {
        out = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (time_limit_s > 0 && secs >= time_limit_s) {
        out.pass = false;
        out.detail += "; exceeded " + format12(time_limit_s) + " s";
    }
    if (!out.pass) ++failures;
    std::printf("%s criterion %d: %s [%s; %.3f s]\n", out.pass ? "PASS" : "FAIL", id, title, out.detail.c_str(),
                secs);
    std::fflush(stdout);
}

double diagram_distance(const Operator& op, const SampledFunction& a, const SampledFunction& b) {
    return bottleneck(sublevel_diagram(apply(op, a)), sublevel_diagram(apply(op, b))).distance;
}

// Distances for raw, F1 = identity, F2 = quarter turn and M_p(F1, F2).
std::vector<double> stage_distances(std::size_t n, double p, const SampledFunction& phi,
                                     const SampledFunction& psi) {
    const Group rot = Group::cyclic(GridCircle(n));
    const auto quarter = precompose(GroupElement::rotation(n, static_cast<std::int64_t>(n / 4)), rot);
    const auto mean = power_mean(p, {Operator::identity(), quarter});
    return {bottleneck(sublevel_diagram(phi), sublevel_diagram(psi)).distance,
            diagram_distance(Operator::identity(), phi, psi), diagram_distance(quarter, phi, psi),
            diagram_distance(mean, phi, psi)};
}

std::string list(const std::vector<double>& v) {
    std::string s;
    for (double x : v) s += (s.empty() ? "" : ", ") + format12(x);
    return s;
}

Outcome criterion1() {
    const GridCircle grid(360);
    const auto d = stage_distances(360, 1.0, abs_sin(grid), sin_sq(grid));
    const double expected = (std::sqrt(2.0) - 1.0) / 4.0;
    const bool ok = d[0] <= 1e-9 && d[1] <= 1e-9 && d[2] <= 1e-9 && std::abs(d[3] - expected) <= 1e-6;
    return {ok, "raw/F1/F2/M1 = " + list(d)};
}

Outcome criterion2() {
    const GridCircle grid(360);
    const auto d = stage_distances(360, 3.0, abs_sin(grid), sin_sq_root(grid, 3.0));
    const bool ok = d[0] <= 1e-9 && d[1] <= 1e-9 && d[2] <= 1e-9 && d[3] > 1e-3;
    return {ok, "raw/F1/F2/M3 = " + list(d)};
}

Outcome criterion3() {
    Rng rng(3);
    const GridCircle grid(32);
    const Group rot = Group::cyclic(grid);
    const auto space = FunctionSpace::unit_lipschitz();
    std::vector<SampledFunction> probes;
    for (int i = 0; i < 100; ++i) probes.push_back(random_lipschitz_function(rng, grid));
    const auto pairs = probe_pairs(rng, grid, 100);
    double eq = 0.0;
    double excess = 0.0;
    int unvalidated = 0;
    for (int t = 0; t < 1000; ++t) {
        const auto op = random_operator(rng, rot, space, 4);
        if (!op.validated()) ++unvalidated;
        eq = std::max(eq, verify_equivariance(op, rot, probes).max_violation);
        excess = std::max(excess, verify_nonexpansivity(op, pairs).max_excess);
    }
    const bool ok = eq == 0.0 && excess <= 1e-12 && unvalidated == 0;
    return {ok, "n=32, max equivariance violation " + format12(eq) + ", max excess " + format12(excess)};
}

Outcome criterion4() {
    Rng rng(4);
    const GridCircle grid(120);
    const Group rot = Group::cyclic(grid);
    const auto space = FunctionSpace::unit_lipschitz();
    std::vector<Operator> ops;
    for (int i = 0; i < 50; ++i) ops.push_back(random_operator(rng, rot, space, 4));
    const auto pairs = probe_pairs(rng, grid, 200);
    double worst = -INFINITY;
    std::size_t checks = 0;
    for (const auto& [a, b] : pairs) {
        const double dg = natural_pseudo_distance(a, b, rot).value;
        const double brute = oracle::rotation_distance({a.values().begin(), a.values().end()},
                                                       {b.values().begin(), b.values().end()});
        if (dg != brute) return {false, "exhaustive scan disagrees with the library d_G"};
        for (const auto& op : ops) {
            if (!op.validated()) return {false, "unvalidated operator drawn"};
            worst = std::max(worst, diagram_distance(op, a, b) - dg);
            ++checks;
        }
    }
    return {worst <= 1e-9, std::to_string(checks) + " checks, max(bound - d_G) = " + format12(worst)};
}

Outcome criterion5() {
    Rng rng(5);
    const GridCircle grid(24);
    const auto op =
        power_mean_unchecked(0.5, {Operator::identity(), precompose_unchecked(GroupElement::rotation(24, 6))});
    for (int trial = 1; trial <= 10000; trial += 2) {
        const auto pairs = probe_pairs(rng, grid, 2);
        const auto r = verify_nonexpansivity(op, pairs);
        if (r.max_excess > 0.01) {
            return {true, "excess " + format12(r.max_excess) + " found by trial " + std::to_string(trial + 1)};
        }
    }
    return {false, "no excess above 0.01 in 10^4 trials"};
}

Outcome criterion6() {
    Rng rng(6);
    std::uniform_int_distribution<std::size_t> dim(1, 8);
    std::uniform_real_distribution<double> u(-10.0, 10.0);
    const std::vector<double> ps{1.0, 1.5, 2.0, 3.0, INFINITY};
    double worst = 0.0;
    for (int t = 0; t < 100000; ++t) {
        const std::size_t n = dim(rng);
        std::vector<double> x(n);
        for (auto& v : x) v = u(rng);
        const double nn = static_cast<double>(n);
        for (std::size_t i = 0; i < ps.size(); ++i) {
            for (std::size_t j = i + 1; j < ps.size(); ++j) {
                const double p = ps[i];
                const double q = ps[j];
                const double xp = norm_p(x, p);
                const double xq = norm_p(x, q);
                const double factor = std::isinf(q) ? std::pow(nn, 1.0 / p) : std::pow(nn, 1.0 / p - 1.0 / q);
                worst = std::max({worst, xq - xp, xp - factor * xq});
            }
        }
    }
    return {worst <= 1e-12, "10^5 vectors, max violation " + format12(worst)};
}

Outcome criterion7() {
    Rng rng(7);
    std::uniform_int_distribution<std::size_t> size(3, 64);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    std::uniform_int_distribution<int> level(0, 5);
    for (int t = 0; t < 10000; ++t) {
        const std::size_t n = size(rng);
        std::vector<double> v(n);
        for (auto& x : v) x = (t % 2 == 0) ? u(rng) : level(rng) / 5.0;
        if (sublevel_diagram(SampledFunction(GridCircle(n), v)) != oracle::threshold_sweep(v)) {
            return {false, "mismatch at trial " + std::to_string(t)};
        }
    }
    return {true, "10^4 functions, half with repeated values"};
}

Outcome criterion8() {
    Rng rng(8);
    for (int t = 0; t < 1000; ++t) {
        const auto a = oracle::random_diagram(rng, 6, t % 2 == 0);
        const auto b = oracle::random_diagram(rng, 6, t % 2 == 0);
        const double fast = bottleneck(a, b).distance;
        const double slow = oracle::exhaustive_bottleneck(a, b);
        if (fast != slow) {
            return {false, "trial " + std::to_string(t) + ": " + format12(fast) + " vs " + format12(slow)};
        }
    }
    return {true, "10^3 pairs, exact equality"};
}

Outcome criterion9() {
    Rng rng(9);
    std::uniform_int_distribution<std::size_t> size(3, 64);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    double worst = -INFINITY;
    for (int t = 0; t < 10000; ++t) {
        const GridCircle grid(size(rng));
        std::vector<double> v(grid.size()), w(grid.size());
        for (auto& x : v) x = u(rng);
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = (t % 2 == 0) ? u(rng) : v[i] + 0.05 * u(rng);
        const SampledFunction f(grid, v), g(grid, w);
        worst = std::max(worst, bottleneck(sublevel_diagram(f), sublevel_diagram(g)).distance - sup_distance(f, g));
    }
    return {worst <= 1e-12, "10^4 pairs, max(bottleneck - sup) = " + format12(worst)};
}

Outcome criterion10() {
    Rng rng(10);
    const GridCircle grid(48);
    const Group rot = Group::cyclic(grid);
    const auto pairs = probe_pairs(rng, grid, 1000);
    double excess = 0.0;
    double worst_tail = -INFINITY;
    const std::vector<std::pair<double, double>> coeffs{{0.5, 0.5}, {0.1, 0.9}, {0.3, 0.6}};
    for (const auto& [c, r] : coeffs) {
        const auto seq = CoefficientSequence::geometric(c, r);
        for (const auto& family :
             {OperatorSequence::rotations(GroupElement::rotation(48, 7), rot, 1.0),
              OperatorSequence::constant(power_mean(2.0, {Operator::identity(),
                                                          precompose(GroupElement::rotation(48, 12), rot)}),
                                         1.0)}) {
            excess = std::max(excess, verify_nonexpansivity(series(seq, family), pairs).max_excess);
            for (std::size_t k : {1u, 2u, 5u, 10u, 20u, 40u}) {
                const auto short_op = series_with_terms(seq, family, k);
                const auto long_op = series_with_terms(seq, family, k + 10);
                for (std::size_t i = 0; i < 50; ++i) {
                    const auto& f = pairs[i].first;
                    const double gap = sup_distance(apply(short_op, f), apply(long_op, f));
                    worst_tail = std::max(worst_tail, gap - seq.tail(k) * family.bound());
                }
            }
        }
    }
    const bool ok = excess <= 1e-12 && worst_tail <= 1e-15;
    return {ok, "max excess " + format12(excess) + ", max(|S_K - S_K+10| - T(K) B) = " + format12(worst_tail)};
}

}  // namespace

int main() {
    run(1, "abs_sin vs sin_sq, p = 1: zero pattern and (sqrt2 - 1)/4", 1.0, criterion1);
    run(2, "abs_sin vs cube root of sin_sq, p = 3: zero pattern and positive M3 distance", 1.0, criterion2);
    run(3, "GENEO axioms on 1000 random trees", 60.0, criterion3);
    run(4, "lower-bound soundness, 200 pairs x 50 operators at n = 120", 120.0, criterion4);
    run(5, "unchecked M_1/2 counterexample search", 0.0, criterion5);
    run(6, "p-norm inequalities on 10^5 vectors", 0.0, criterion6);
    run(7, "union-find diagram equals threshold sweep", 0.0, criterion7);
    run(8, "bottleneck equals exhaustive matching", 0.0, criterion8);
    run(9, "stability against sup distance", 0.0, criterion9);
    run(10, "series non-expansive and within tail bound", 0.0, criterion10);
    std::printf("%d of 10 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
