#include "geneo/operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace geneo {

namespace {

constexpr double kSumSlack = 1e-12;

std::optional<std::size_t> merge_grid(std::optional<std::size_t> a, std::optional<std::size_t> b) {
    if (a && b && *a != *b) throw Error("incompatible grids");
    return a ? a : b;
}

}  // namespace

// ---------------------------------------------------------------------------
// LipschitzMap

LipschitzMap LipschitzMap::max(std::size_t arity) {
    if (arity == 0) throw Error("max needs at least one input");
    return LipschitzMap(Kind::max, arity);
}

LipschitzMap LipschitzMap::min(std::size_t arity) {
    if (arity == 0) throw Error("min needs at least one input");
    return LipschitzMap(Kind::min, arity);
}

LipschitzMap LipschitzMap::projection(std::size_t arity, std::size_t coordinate) {
    if (coordinate >= arity) {
        throw Error("projection coordinate " + std::to_string(coordinate + 1) +
                    " out of range for arity " + std::to_string(arity));
    }
    LipschitzMap m(Kind::projection, arity);
    m.coordinate_ = coordinate;
    return m;
}

LipschitzMap LipschitzMap::convex(std::vector<double> weights) {
    if (weights.empty()) throw Error("convex combination needs at least one weight");
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw Error("convex weights must be nonnegative");
        sum += w;
    }
    if (sum > 1.0 + kSumSlack) throw Error("convex weights sum to more than 1");
    LipschitzMap m(Kind::convex, weights.size());
    m.weights_ = std::move(weights);
    return m;
}

double LipschitzMap::operator()(std::span<const double> x) const {
    switch (kind_) {
    case Kind::max:
        return *std::max_element(x.begin(), x.end());
    case Kind::min:
        return *std::min_element(x.begin(), x.end());
    case Kind::projection:
        return x[coordinate_];
    case Kind::convex: {
        double s = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) s += weights_[i] * x[i];
        return s;
    }
    }
    return 0.0;
}

// ---------------------------------------------------------------------------
// CoefficientSequence

CoefficientSequence CoefficientSequence::geometric(double c, double r) {
    if (!(c > 0.0) || !std::isfinite(c)) throw Error("geometric coefficients need c > 0");
    if (!(r > 0.0 && r < 1.0)) throw Error("geometric coefficients need 0 < r < 1");
    CoefficientSequence s;
    s.geometric_ = true;
    s.c_ = c;
    s.r_ = r;
    s.term_ = [c, r](std::size_t k) {
        return c * std::pow(r, static_cast<double>(k) - 1.0);
    };
    s.tail_ = [c, r](std::size_t k) { return c * std::pow(r, static_cast<double>(k)) / (1.0 - r); };
    return s;
}

CoefficientSequence CoefficientSequence::custom(Term term, std::optional<Term> tail) {
    if (!term) throw Error("custom coefficient sequence needs a term function");
    CoefficientSequence s;
    s.term_ = std::move(term);
    if (tail) s.tail_ = std::move(*tail);
    return s;
}

double CoefficientSequence::term(std::size_t k) const {
    if (k == 0) throw Error("coefficients are indexed from 1");
    return term_(k);
}

double CoefficientSequence::tail(std::size_t k) const {
    if (!tail_) throw Error("missing tail formula");
    return tail_(k);
}

// ---------------------------------------------------------------------------
// Operator nodes

struct Operator::Node {
    Kind kind = Kind::identity;
    bool unchecked = false;
    bool validated = true;
    std::optional<std::size_t> grid;

    std::optional<GroupElement> element;
    std::optional<LipschitzMap> map;
    double p = 1.0;
    std::vector<Operator> children;
    std::optional<CoefficientSequence> coeffs;
    std::optional<OperatorSequence> family;
    std::size_t terms = 0;
    double epsilon = 0.0;
};

namespace {

std::shared_ptr<Operator::Node> node_with_children(Operator::Kind kind, std::vector<Operator> children) {
    auto node = std::make_shared<Operator::Node>();
    node->kind = kind;
    for (const auto& c : children) {
        node->grid = merge_grid(node->grid, c.grid_size());
        node->validated = node->validated && c.validated();
    }
    node->children = std::move(children);
    return node;
}

const Operator::Node& checked_node(const std::shared_ptr<const Operator::Node>& node,
                                   Operator::Kind kind, const char* what) {
    if (node->kind != kind) throw Error(std::string("operator is not a ") + what + " node");
    return *node;
}

}  // namespace

Operator Operator::identity() { return Operator(std::make_shared<Node>()); }

Operator::Kind Operator::kind() const noexcept { return node_->kind; }
bool Operator::validated() const noexcept { return node_->validated; }
bool Operator::unchecked_node() const noexcept { return node_->unchecked; }
std::optional<std::size_t> Operator::grid_size() const noexcept { return node_->grid; }

const GroupElement& Operator::element() const {
    return *checked_node(node_, Kind::precompose, "precompose").element;
}

const LipschitzMap& Operator::lipschitz_map() const {
    return *checked_node(node_, Kind::lipschitz_combine, "lipschitz_combine").map;
}

double Operator::exponent() const { return checked_node(node_, Kind::power_mean, "power_mean").p; }

std::span<const Operator> Operator::children() const { return node_->children; }

const CoefficientSequence& Operator::coefficients() const {
    return *checked_node(node_, Kind::series, "series").coeffs;
}

const OperatorSequence& Operator::family() const {
    return *checked_node(node_, Kind::series, "series").family;
}

std::size_t Operator::terms() const { return checked_node(node_, Kind::series, "series").terms; }

double Operator::epsilon() const { return checked_node(node_, Kind::series, "series").epsilon; }

namespace {

std::vector<SampledFunction> apply_all(std::span<const Operator> ops, const SampledFunction& phi) {
    std::vector<SampledFunction> out;
    out.reserve(ops.size());
    for (const auto& op : ops) out.push_back(op.apply(phi));
    return out;
}

template <class PointMap>
SampledFunction pointwise(const std::vector<SampledFunction>& inputs, PointMap&& f) {
    const std::size_t n = inputs.front().size();
    std::vector<double> column(inputs.size());
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < inputs.size(); ++j) column[j] = inputs[j][i];
        out[i] = f(std::span<const double>(column));
    }
    return SampledFunction(inputs.front().grid(), std::move(out));
}

SampledFunction apply_series(const Operator::Node& node, const SampledFunction& phi) {
    const std::size_t n = phi.size();
    const auto& family = *node.family;
    std::vector<double> acc(n, 0.0);

    if (family.kind() == OperatorSequence::Kind::constant) {
        const SampledFunction v = family.base().apply(phi);
        for (std::size_t k = 1; k <= node.terms; ++k) {
            const double a = node.coeffs->term(k);
            for (std::size_t i = 0; i < n; ++i) acc[i] += a * v[i];
        }
    } else {
        const GroupElement& step = family.step();
        if (step.grid_size() != n) throw Error("incompatible grids");
        GroupElement g = step;
        for (std::size_t k = 1; k <= node.terms; ++k) {
            const double a = node.coeffs->term(k);
            for (std::size_t i = 0; i < n; ++i) acc[i] += a * phi[g(i)];
            g = g * step;
        }
    }
    return SampledFunction(phi.grid(), std::move(acc));
}

}  // namespace

SampledFunction Operator::apply(const SampledFunction& phi) const {
    if (node_->grid && *node_->grid != phi.size()) throw Error("incompatible grids");
    const Node& node = *node_;
    switch (node.kind) {
    case Kind::identity:
        return phi;
    case Kind::precompose:
        return act(phi, *node.element);
    case Kind::lipschitz_combine: {
        const auto inputs = apply_all(node.children, phi);
        return pointwise(inputs, [&](std::span<const double> x) { return (*node.map)(x); });
    }
    case Kind::power_mean: {
        const auto inputs = apply_all(node.children, phi);
        return pointwise(inputs, [&](std::span<const double> x) { return power_mean_values(node.p, x); });
    }
    case Kind::series:
        return apply_series(node, phi);
    case Kind::compose:
        return node.children[0].apply(node.children[1].apply(phi));
    }
    return phi;
}

// ---------------------------------------------------------------------------
// OperatorSequence

OperatorSequence OperatorSequence::constant(Operator op, double bound) {
    if (!(bound >= 0.0)) throw Error("family bound must be nonnegative");
    OperatorSequence s(Kind::constant, bound);
    s.checked_ = op.validated();
    s.base_ = std::move(op);
    return s;
}

OperatorSequence OperatorSequence::rotations(const GroupElement& step, const Group& group, double bound) {
    for (const auto& g : group.elements()) {
        if (!commute(step, g)) {
            throw Error("rotation family step " + step.to_string() + " does not commute with G");
        }
    }
    return rotations_unchecked(step, bound);
}

OperatorSequence OperatorSequence::rotations_unchecked(const GroupElement& step, double bound) {
    if (!(bound >= 0.0)) throw Error("family bound must be nonnegative");
    OperatorSequence s(Kind::rotation, bound);
    s.step_ = step;
    return s;
}

bool OperatorSequence::validated() const noexcept { return checked_; }

std::optional<std::size_t> OperatorSequence::grid_size() const noexcept {
    if (kind_ == Kind::rotation) return step_->grid_size();
    return base_->grid_size();
}

Operator OperatorSequence::at(std::size_t k) const {
    if (k == 0) throw Error("operator sequences are indexed from 1");
    if (kind_ == Kind::constant) return *base_;
    GroupElement g = *step_;
    for (std::size_t j = 1; j < k; ++j) g = g * *step_;
    return precompose_unchecked(g);
}

// ---------------------------------------------------------------------------
// Constructors

Operator precompose(const GroupElement& g0, const Group& group) {
    if (g0.grid_size() != group.grid().size()) throw Error("incompatible grids");
    for (const auto& g : group.elements()) {
        if (!commute(g0, g)) {
            throw Error("precompose by " + g0.to_string() + " does not commute with G");
        }
    }
    auto node = std::make_shared<Operator::Node>();
    node->kind = Operator::Kind::precompose;
    node->element = g0;
    node->grid = g0.grid_size();
    return Operator(std::move(node));
}

Operator precompose_unchecked(const GroupElement& g0) {
    auto node = std::make_shared<Operator::Node>();
    node->kind = Operator::Kind::precompose;
    node->element = g0;
    node->grid = g0.grid_size();
    node->unchecked = true;
    node->validated = false;
    return Operator(std::move(node));
}

Operator lipschitz_combine(LipschitzMap map, std::vector<Operator> ops) {
    if (map.arity() != ops.size()) {
        throw Error("arity mismatch: map takes " + std::to_string(map.arity()) + " inputs, got " +
                    std::to_string(ops.size()) + " operators");
    }
    auto node = node_with_children(Operator::Kind::lipschitz_combine, std::move(ops));
    node->map = std::move(map);
    return Operator(std::move(node));
}

double power_mean_values(double p, std::span<const double> v) {
    if (!(p > 0.0)) throw Error("power mean needs p > 0");
    if (v.empty()) throw Error("power mean of an empty vector");
    const double n = static_cast<double>(v.size());
    double s = 0.0;
    if (p == 1.0) {
        for (double x : v) s += std::abs(x);
        return s / n;
    }
    if (p == 2.0) {
        for (double x : v) s += x * x;
        return std::sqrt(s / n);
    }
    for (double x : v) s += std::pow(std::abs(x), p);
    return std::pow(s / n, 1.0 / p);
}

Operator power_mean(double p, std::vector<Operator> ops) {
    if (!(p >= 1.0)) {
        throw Error("power mean needs p >= 1; for 0 < p < 1 M_p is not a 1-Lipschitz function "
                    "(use the unchecked constructor for counterexamples)");
    }
    if (!std::isfinite(p)) throw Error("power mean exponent must be finite");
    if (ops.empty()) throw Error("power mean needs at least one operator");
    auto node = node_with_children(Operator::Kind::power_mean, std::move(ops));
    node->p = p;
    return Operator(std::move(node));
}

Operator power_mean_unchecked(double p, std::vector<Operator> ops) {
    if (!(p > 0.0) || !std::isfinite(p)) throw Error("power mean needs p > 0");
    if (ops.empty()) throw Error("power mean needs at least one operator");
    auto node = node_with_children(Operator::Kind::power_mean, std::move(ops));
    node->p = p;
    node->unchecked = true;
    node->validated = false;
    return Operator(std::move(node));
}

std::size_t truncation_terms(const CoefficientSequence& coeffs, double bound, double epsilon) {
    if (!(epsilon > 0.0)) throw Error("truncation epsilon must be positive");
    constexpr std::size_t kMaxTerms = 1'000'000;
    for (std::size_t k = 1; k <= kMaxTerms; ++k) {
        if (coeffs.tail(k) * bound <= epsilon) return k;
    }
    throw Error("no truncation length within " + std::to_string(kMaxTerms) + " terms");
}

namespace {

// Geometric sequences are positive and decreasing by construction; custom
// ones are checked over the terms that are actually summed.
void check_terms(const CoefficientSequence& coeffs, std::size_t terms) {
    if (coeffs.is_geometric()) return;
    double prev = coeffs.term(1);
    for (std::size_t k = 1; k <= terms; ++k) {
        const double a = coeffs.term(k);
        if (!(a > 0.0)) throw Error("series coefficient a_" + std::to_string(k) + " is not positive");
        if (a > prev) throw Error("series coefficients increase at k = " + std::to_string(k));
        prev = a;
    }
}

void check_series_hypotheses(const CoefficientSequence& coeffs) {
    const double total = coeffs.total();  // throws "missing tail formula"
    if (total > 1.0 + kSumSlack) {
        throw Error("series coefficients sum to " + std::to_string(total) + " > 1");
    }
}

Operator make_series(CoefficientSequence coeffs, OperatorSequence family, std::size_t terms,
                     double epsilon) {
    if (terms == 0) throw Error("series needs at least one term");
    check_terms(coeffs, terms);
    auto node = std::make_shared<Operator::Node>();
    node->kind = Operator::Kind::series;
    node->grid = family.grid_size();
    node->validated = family.validated();
    node->coeffs = std::move(coeffs);
    node->family = std::move(family);
    node->terms = terms;
    node->epsilon = epsilon;
    return Operator(std::move(node));
}

}  // namespace

Operator series(CoefficientSequence coeffs, OperatorSequence family, TruncationPolicy policy) {
    check_series_hypotheses(coeffs);
    const std::size_t k = truncation_terms(coeffs, family.bound(), policy.epsilon);
    return make_series(std::move(coeffs), std::move(family), k, policy.epsilon);
}

Operator series_with_terms(CoefficientSequence coeffs, OperatorSequence family, std::size_t terms) {
    check_series_hypotheses(coeffs);
    const double eps = coeffs.tail(terms) * family.bound();
    return make_series(std::move(coeffs), std::move(family), terms, eps);
}

Operator compose(Operator outer, Operator inner) {
    return Operator(node_with_children(Operator::Kind::compose, {std::move(outer), std::move(inner)}));
}

double norm_p(std::span<const double> x, double p) {
    if (std::isinf(p) && p > 0) {
        double m = 0.0;
        for (double v : x) m = std::max(m, std::abs(v));
        return m;
    }
    if (!(p >= 1.0)) throw Error("p-norm needs p >= 1");
    double s = 0.0;
    for (double v : x) s += std::pow(std::abs(v), p);
    return std::pow(s, 1.0 / p);
}

ClosedResult apply_in(const Operator& op, const SampledFunction& phi, const FunctionSpace& space,
                      ClosureMode mode) {
    SampledFunction value = op.apply(phi);
    auto violations = membership_check(space, value);
    if (!violations.empty() && mode == ClosureMode::strict) {
        const auto& v = violations.front();
        throw ClosureError("operator output leaves the function space: " + v.constraint +
                               " violated at index " + std::to_string(v.index),
                           std::move(violations));
    }
    return {std::move(value), std::move(violations)};
}

}  // namespace geneo
