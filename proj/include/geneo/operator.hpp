#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "geneo/function_space.hpp"

namespace geneo {

/// A map R^n -> R that is 1-Lipschitz for the max-norm on its inputs.
class LipschitzMap {
public:
    enum class Kind { max, min, projection, convex };

    static LipschitzMap max(std::size_t arity);
    static LipschitzMap min(std::size_t arity);
    /// `coordinate` is 0-based.
    static LipschitzMap projection(std::size_t arity, std::size_t coordinate);
    /// Nonnegative weights with sum <= 1.
    static LipschitzMap convex(std::vector<double> weights);

    Kind kind() const noexcept { return kind_; }
    std::size_t arity() const noexcept { return arity_; }
    std::size_t coordinate() const noexcept { return coordinate_; }
    std::span<const double> weights() const noexcept { return weights_; }

    double operator()(std::span<const double> x) const;

    friend bool operator==(const LipschitzMap&, const LipschitzMap&) = default;

private:
    LipschitzMap(Kind kind, std::size_t arity) : kind_(kind), arity_(arity) {}

    Kind kind_;
    std::size_t arity_;
    std::size_t coordinate_ = 0;
    std::vector<double> weights_;
};

/// Positive, decreasing coefficients a_1, a_2, ... with a closed-form tail
/// T(K) = sum_{k > K} a_k.
class CoefficientSequence {
public:
    using Term = std::function<double(std::size_t)>;

    /// a_k = c * r^(k-1) for k >= 1; requires c > 0 and 0 < r < 1.
    static CoefficientSequence geometric(double c, double r);
    /// Arbitrary terms; without a tail formula the sequence cannot back a series.
    static CoefficientSequence custom(Term term, std::optional<Term> tail = std::nullopt);

    bool is_geometric() const noexcept { return geometric_; }
    double ratio() const noexcept { return r_; }
    double scale() const noexcept { return c_; }

    double term(std::size_t k) const;
    bool has_tail() const noexcept { return static_cast<bool>(tail_); }
    /// Throws if no tail formula is known.
    double tail(std::size_t k) const;
    double total() const { return tail(0); }

private:
    CoefficientSequence() = default;

    bool geometric_ = false;
    double c_ = 0.0;
    double r_ = 0.0;
    Term term_;
    Term tail_;
};

class OperatorSequence;

/// A GENEO as an immutable combinator tree. Copies share structure.
class Operator {
public:
    enum class Kind { identity, precompose, lipschitz_combine, power_mean, series, compose };

    struct Node;

    static Operator identity();

    Kind kind() const noexcept;
    /// False if any node in the tree was built through an unchecked constructor.
    bool validated() const noexcept;
    /// True if this node itself was built unchecked.
    bool unchecked_node() const noexcept;
    /// Grid size the tree is bound to, if any node fixes one.
    std::optional<std::size_t> grid_size() const noexcept;

    const GroupElement& element() const;             // precompose
    const LipschitzMap& lipschitz_map() const;       // lipschitz_combine
    double exponent() const;                         // power_mean
    std::span<const Operator> children() const;      // combine, mean, compose (outer, inner)
    const CoefficientSequence& coefficients() const; // series
    const OperatorSequence& family() const;          // series
    std::size_t terms() const;                       // series: K
    double epsilon() const;                          // series: requested truncation error

    SampledFunction apply(const SampledFunction& phi) const;

    explicit Operator(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

private:
    std::shared_ptr<const Node> node_;
};

/// Rule producing F_1, F_2, ... with a declared uniform bound B on
/// ||F_k(phi)||_inf over the function space.
class OperatorSequence {
public:
    enum class Kind { constant, rotation };

    static OperatorSequence constant(Operator op, double bound);
    /// F_k = precompose(step^k). Throws unless step commutes with every element of G.
    static OperatorSequence rotations(const GroupElement& step, const Group& group, double bound);
    static OperatorSequence rotations_unchecked(const GroupElement& step, double bound);

    Kind kind() const noexcept { return kind_; }
    double bound() const noexcept { return bound_; }
    bool validated() const noexcept;
    std::optional<std::size_t> grid_size() const noexcept;
    const Operator& base() const { return *base_; }
    const GroupElement& step() const { return *step_; }

    Operator at(std::size_t k) const;

private:
    OperatorSequence(Kind kind, double bound) : kind_(kind), bound_(bound) {}

    Kind kind_;
    double bound_;
    bool checked_ = true;
    std::optional<Operator> base_;
    std::optional<GroupElement> step_;
};

struct TruncationPolicy {
    double epsilon = 1e-9;
};

Operator precompose(const GroupElement& g0, const Group& group);
Operator precompose_unchecked(const GroupElement& g0);
Operator lipschitz_combine(LipschitzMap map, std::vector<Operator> ops);

/// ((1/n) sum |v_i|^p)^(1/p); p > 0.
double power_mean_values(double p, std::span<const double> v);
/// Requires p >= 1: M_p is not 1-Lipschitz for 0 < p < 1 and more than one input.
Operator power_mean(double p, std::vector<Operator> ops);
/// Any p > 0. Only for counterexample experiments; the tree is marked unvalidated.
Operator power_mean_unchecked(double p, std::vector<Operator> ops);

/// Smallest K >= 1 with tail(K) * bound <= epsilon.
std::size_t truncation_terms(const CoefficientSequence& coeffs, double bound, double epsilon);
Operator series(CoefficientSequence coeffs, OperatorSequence family, TruncationPolicy policy = {});
/// Fixed number of terms, bypassing the policy.
Operator series_with_terms(CoefficientSequence coeffs, OperatorSequence family, std::size_t terms);

Operator compose(Operator outer, Operator inner);

inline SampledFunction apply(const Operator& op, const SampledFunction& phi) {
    return op.apply(phi);
}

/// (sum |x_i|^p)^(1/p) for p >= 1; max |x_i| for p = +inf.
double norm_p(std::span<const double> x, double p);

enum class ClosureMode { strict, lax };

struct ClosedResult {
    SampledFunction value;
    std::vector<Violation> violations;
};

class ClosureError : public Error {
public:
    ClosureError(const std::string& what, std::vector<Violation> violations)
        : Error(what), violations_(std::move(violations)) {}
    const std::vector<Violation>& violations() const noexcept { return violations_; }

private:
    std::vector<Violation> violations_;
};

/// Applies op and checks that the output stays in the space. Strict mode throws
/// ClosureError on any violation; lax mode reports them alongside the value.
ClosedResult apply_in(const Operator& op, const SampledFunction& phi, const FunctionSpace& space,
                      ClosureMode mode);

}  // namespace geneo
