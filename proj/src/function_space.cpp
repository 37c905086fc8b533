#include "geneo/function_space.hpp"

#include <algorithm>
#include <charconv>
#include <limits>
#include <cmath>
#include <numbers>
#include <set>
#include <tuple>

namespace geneo {

GridCircle::GridCircle(std::size_t n) : n_(n) {
    if (n < 3) {
        throw Error("grid needs at least 3 samples, got " + std::to_string(n));
    }
}

double GridCircle::spacing() const noexcept {
    return 2.0 * std::numbers::pi / static_cast<double>(n_);
}

double GridCircle::angle(std::size_t i) const noexcept {
    return spacing() * static_cast<double>(i);
}

SampledFunction::SampledFunction(GridCircle grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) {
        throw Error("expected " + std::to_string(grid_.size()) + " samples, got " +
                    std::to_string(values_.size()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw Error("non-finite sample at index " + std::to_string(i));
        }
    }
}

SampledFunction SampledFunction::constant(GridCircle grid, double c) {
    return SampledFunction(grid, std::vector<double>(grid.size(), c));
}

double SampledFunction::sup_norm() const noexcept {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

namespace {

std::size_t wrap(std::int64_t v, std::size_t n) {
    const auto m = static_cast<std::int64_t>(n);
    std::int64_t r = v % m;
    if (r < 0) r += m;
    return static_cast<std::size_t>(r);
}

void require_same_grid(std::size_t a, std::size_t b) {
    if (a != b) throw Error("incompatible grids");
}

}  // namespace

GroupElement GroupElement::identity(std::size_t n) { return GroupElement(n, 0, false); }

GroupElement GroupElement::rotation(std::size_t n, std::int64_t shift) {
    return GroupElement(n, wrap(shift, n), false);
}

GroupElement GroupElement::reflection(std::size_t n, std::int64_t shift) {
    return GroupElement(n, wrap(shift, n), true);
}

std::size_t GroupElement::operator()(std::size_t i) const noexcept {
    if (reflect_) return (shift_ + n_ - i % n_) % n_;
    return (shift_ + i) % n_;
}

GroupElement GroupElement::inverse() const {
    if (reflect_) return *this;  // involution
    return GroupElement(n_, (n_ - shift_) % n_, false);
}

GroupElement operator*(const GroupElement& g, const GroupElement& h) {
    require_same_grid(g.n_, h.n_);
    // g(h(i)) = s_g + e_g * (s_h + e_h * i)
    const auto n = static_cast<std::int64_t>(g.n_);
    const std::int64_t sg = static_cast<std::int64_t>(g.shift_);
    const std::int64_t sh = static_cast<std::int64_t>(h.shift_);
    const std::int64_t shift = g.reflect_ ? sg - sh : sg + sh;
    return GroupElement(g.n_, wrap(shift % n, g.n_), g.reflect_ != h.reflect_);
}

std::string GroupElement::to_string() const {
    return std::string(reflect_ ? "reflection" : "rotation") + "(shift=" +
           std::to_string(shift_) + ", n=" + std::to_string(n_) + ")";
}

bool commute(const GroupElement& a, const GroupElement& b) { return a * b == b * a; }

Group Group::cyclic(GridCircle grid) {
    std::vector<GroupElement> els;
    els.reserve(grid.size());
    for (std::size_t s = 0; s < grid.size(); ++s) {
        els.push_back(GroupElement::rotation(grid.size(), static_cast<std::int64_t>(s)));
    }
    return Group(Kind::cyclic, grid, std::move(els));
}

Group Group::dihedral(GridCircle grid) {
    std::vector<GroupElement> els;
    els.reserve(2 * grid.size());
    for (std::size_t s = 0; s < grid.size(); ++s) {
        els.push_back(GroupElement::rotation(grid.size(), static_cast<std::int64_t>(s)));
    }
    for (std::size_t s = 0; s < grid.size(); ++s) {
        els.push_back(GroupElement::reflection(grid.size(), static_cast<std::int64_t>(s)));
    }
    return Group(Kind::dihedral, grid, std::move(els));
}

Group Group::trivial(GridCircle grid) {
    return Group(Kind::trivial, grid, {GroupElement::identity(grid.size())});
}

Group Group::from_elements(GridCircle grid, std::vector<GroupElement> elements) {
    if (elements.empty()) throw Error("group has no elements");
    auto key = [](const GroupElement& g) { return std::tuple(g.shift(), g.reflects()); };
    std::set<std::tuple<std::size_t, bool>> members;
    for (const auto& g : elements) {
        require_same_grid(g.grid_size(), grid.size());
        members.insert(key(g));
    }
    if (!members.count(key(GroupElement::identity(grid.size())))) {
        throw Error("group does not contain the identity");
    }
    for (const auto& g : elements) {
        if (!members.count(key(g.inverse()))) {
            throw Error("group not closed under inverse: " + g.to_string());
        }
        for (const auto& h : elements) {
            if (!members.count(key(g * h))) {
                throw Error("group not closed under composition: " + g.to_string() + " * " +
                            h.to_string());
            }
        }
    }
    return Group(Kind::explicit_list, grid, std::move(elements));
}

Group Group::from_name(std::string_view name, GridCircle grid) {
    if (name == "rotations" || name == "cyclic") return cyclic(grid);
    if (name == "dihedral") return dihedral(grid);
    if (name == "trivial") return trivial(grid);
    throw Error("unknown group '" + std::string(name) + "' (expected rotations, dihedral, trivial)");
}

double sup_distance(const SampledFunction& a, const SampledFunction& b) {
    require_same_grid(a.size(), b.size());
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

SampledFunction act(const SampledFunction& phi, const GroupElement& g) {
    require_same_grid(phi.size(), g.grid_size());
    std::vector<double> out(phi.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = phi[g(i)];
    return SampledFunction(phi.grid(), std::move(out));
}

PseudoDistance natural_pseudo_distance(const SampledFunction& phi1, const SampledFunction& phi2,
                                       const Group& group) {
    require_same_grid(phi1.size(), phi2.size());
    require_same_grid(phi1.size(), group.grid().size());
    if (group.order() == 0) throw Error("empty group");

    const std::size_t n = phi1.size();
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    const auto els = group.elements();
    for (std::size_t e = 0; e < els.size(); ++e) {
        const GroupElement& g = els[e];
        double m = 0.0;
        for (std::size_t i = 0; i < n && m < best; ++i) {
            m = std::max(m, std::abs(phi1[i] - phi2[g(i)]));
        }
        if (m < best) {
            best = m;
            best_idx = e;
        }
    }
    return {best, els[best_idx]};
}

FunctionSpace FunctionSpace::unit_lipschitz() {
    FunctionSpace s;
    s.bound = 1.0;
    s.lipschitz = 1.0;
    s.range_low = 0.0;
    s.range_high = 1.0;
    return s;
}

void FunctionSpace::validate() const {
    if (!(bound >= 0.0)) throw Error("function space bound must be nonnegative");
    if (lipschitz && !(*lipschitz >= 0.0)) throw Error("lipschitz constant must be nonnegative");
    if (range_low && range_high && *range_high < *range_low) {
        throw Error("function space range is inverted");
    }
}

std::vector<Violation> constant_violations(const FunctionSpace& space, GridCircle grid) {
    auto out = membership_check(space, SampledFunction::constant(grid, -space.bound));
    auto hi = membership_check(space, SampledFunction::constant(grid, space.bound));
    out.insert(out.end(), hi.begin(), hi.end());
    return out;
}

std::vector<Violation> membership_check(const FunctionSpace& space, const SampledFunction& phi) {
    std::vector<Violation> out;
    const double tol = kMembershipTolerance;
    for (std::size_t i = 0; i < phi.size(); ++i) {
        if (std::abs(phi[i]) > space.bound + tol) {
            out.push_back({"bound", i, std::abs(phi[i]), space.bound});
        }
        if (space.range_low && phi[i] < *space.range_low - tol) {
            out.push_back({"range", i, phi[i], *space.range_low});
        }
        if (space.range_high && phi[i] > *space.range_high + tol) {
            out.push_back({"range", i, phi[i], *space.range_high});
        }
    }
    if (space.lipschitz) {
        const double h = phi.grid().spacing();
        for (std::size_t i = 0; i < phi.size(); ++i) {
            const double q = std::abs(phi[(i + 1) % phi.size()] - phi[i]) / h;
            if (q > *space.lipschitz + tol) out.push_back({"lipschitz", i, q, *space.lipschitz});
        }
    }
    return out;
}

namespace {

// sin(2*pi*num/den) for 0 <= num < den, reduced to the first octant pair by
// exact rational steps.
double sin_fraction(std::int64_t num, std::int64_t den) {
    double sign = 1.0;
    if (2 * num >= den) {
        num = 2 * num - den;
        den *= 2;
        sign = -1.0;
    }
    if (4 * num > den) {
        num = den - 2 * num;
        den *= 2;
    }
    if (num == 0) return 0.0;
    if (4 * num == den) return sign;
    constexpr double two_pi = 2.0 * std::numbers::pi;
    if (8 * num > den) {
        const double f = static_cast<double>(den - 4 * num) / static_cast<double>(4 * den);
        return sign * std::cos(two_pi * f);
    }
    return sign * std::sin(two_pi * (static_cast<double>(num) / static_cast<double>(den)));
}

}  // namespace

double grid_sin(std::int64_t k, std::size_t n) {
    return sin_fraction(static_cast<std::int64_t>(wrap(k, n)), static_cast<std::int64_t>(n));
}

double grid_cos(std::int64_t k, std::size_t n) {
    const std::size_t den = 4 * n;
    return sin_fraction(static_cast<std::int64_t>(wrap(4 * k + static_cast<std::int64_t>(n), den)),
                        static_cast<std::int64_t>(den));
}

SampledFunction abs_sin(GridCircle grid) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = std::abs(grid_sin(static_cast<std::int64_t>(i), grid.size()));
    }
    return SampledFunction(grid, std::move(v));
}

SampledFunction sin_sq(GridCircle grid) {
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double s = grid_sin(static_cast<std::int64_t>(i), grid.size());
        v[i] = s * s;
    }
    return SampledFunction(grid, std::move(v));
}

SampledFunction sin_sq_root(GridCircle grid, double p) {
    if (!(p > 0.0)) throw Error("sin_sq_root needs p > 0");
    std::vector<double> v(grid.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double s = grid_sin(static_cast<std::int64_t>(i), grid.size());
        v[i] = std::pow(s * s, 1.0 / p);
    }
    return SampledFunction(grid, std::move(v));
}

namespace {

double parse_param(std::string_view text, std::string_view what) {
    double out = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out);
    if (ec != std::errc() || ptr != last) {
        throw Error("bad parameter '" + std::string(text) + "' for " + std::string(what));
    }
    return out;
}

}  // namespace

SampledFunction builtin_function(std::string_view spec, GridCircle grid) {
    std::string_view name = spec;
    std::string_view param;
    bool has_param = false;
    if (auto colon = spec.find(':'); colon != std::string_view::npos) {
        name = spec.substr(0, colon);
        param = spec.substr(colon + 1);
        has_param = true;
    } else if (auto open = spec.find('('); open != std::string_view::npos && spec.back() == ')') {
        name = spec.substr(0, open);
        param = spec.substr(open + 1, spec.size() - open - 2);
        has_param = true;
    }

    auto no_param = [&] {
        if (has_param) throw Error("builtin '" + std::string(name) + "' takes no parameter");
    };
    auto need_param = [&] {
        if (!has_param) throw Error("builtin '" + std::string(name) + "' needs a parameter");
        return parse_param(param, name);
    };

    if (name == "abs_sin") {
        no_param();
        return abs_sin(grid);
    }
    if (name == "sin_sq") {
        no_param();
        return sin_sq(grid);
    }
    if (name == "sin_sq_root") return sin_sq_root(grid, need_param());
    if (name == "constant") return SampledFunction::constant(grid, need_param());
    throw Error("unknown builtin function '" + std::string(name) + "'");
}

}  // namespace geneo
