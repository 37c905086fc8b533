#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace geneo {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Uniform sampling of the unit circle at angles 2*pi*i/n.
class GridCircle {
public:
    explicit GridCircle(std::size_t n);

    std::size_t size() const noexcept { return n_; }
    double spacing() const noexcept;
    double angle(std::size_t i) const noexcept;

    friend bool operator==(const GridCircle&, const GridCircle&) = default;

private:
    std::size_t n_;
};

/// Real values on a GridCircle. Immutable once built; every value is finite.
class SampledFunction {
public:
    SampledFunction(GridCircle grid, std::vector<double> values);

    static SampledFunction constant(GridCircle grid, double c);

    const GridCircle& grid() const noexcept { return grid_; }
    std::size_t size() const noexcept { return values_.size(); }
    std::span<const double> values() const noexcept { return values_; }
    double operator[](std::size_t i) const noexcept { return values_[i]; }
    double sup_norm() const noexcept;

    friend bool operator==(const SampledFunction&, const SampledFunction&) = default;

private:
    GridCircle grid_;
    std::vector<double> values_;
};

/// A grid-preserving homeomorphism of the circle: i -> shift + i (rotation)
/// or i -> shift - i (reflection), indices taken mod n.
class GroupElement {
public:
    static GroupElement identity(std::size_t n);
    static GroupElement rotation(std::size_t n, std::int64_t shift);
    static GroupElement reflection(std::size_t n, std::int64_t shift);

    std::size_t grid_size() const noexcept { return n_; }
    std::size_t shift() const noexcept { return shift_; }
    bool reflects() const noexcept { return reflect_; }
    bool is_identity() const noexcept { return shift_ == 0 && !reflect_; }

    std::size_t operator()(std::size_t i) const noexcept;
    GroupElement inverse() const;

    // (g * h)(i) = g(h(i)), so that act(phi, g * h) == act(act(phi, g), h).
    friend GroupElement operator*(const GroupElement& g, const GroupElement& h);
    friend bool operator==(const GroupElement&, const GroupElement&) = default;

    std::string to_string() const;

private:
    GroupElement(std::size_t n, std::size_t shift, bool reflect)
        : n_(n), shift_(shift), reflect_(reflect) {}

    std::size_t n_;
    std::size_t shift_;
    bool reflect_;
};

bool commute(const GroupElement& a, const GroupElement& b);

class Group {
public:
    enum class Kind { cyclic, dihedral, trivial, explicit_list };

    static Group cyclic(GridCircle grid);
    static Group dihedral(GridCircle grid);
    static Group trivial(GridCircle grid);
    /// Throws unless the list contains the identity and is closed under
    /// composition and inverse.
    static Group from_elements(GridCircle grid, std::vector<GroupElement> elements);
    /// "rotations"/"cyclic", "dihedral", "trivial".
    static Group from_name(std::string_view name, GridCircle grid);

    Kind kind() const noexcept { return kind_; }
    const GridCircle& grid() const noexcept { return grid_; }
    std::span<const GroupElement> elements() const noexcept { return elements_; }
    std::size_t order() const noexcept { return elements_.size(); }

private:
    Group(Kind kind, GridCircle grid, std::vector<GroupElement> elements)
        : kind_(kind), grid_(grid), elements_(std::move(elements)) {}

    Kind kind_;
    GridCircle grid_;
    std::vector<GroupElement> elements_;
};

double sup_distance(const SampledFunction& a, const SampledFunction& b);

/// result(i) = phi(g(i)).
SampledFunction act(const SampledFunction& phi, const GroupElement& g);

struct PseudoDistance {
    double value;
    GroupElement minimizer;
};

/// Exact min over G of sup_distance(phi1, act(phi2, g)). Ties resolve to the
/// first minimizer in the group's element order (identity first for the
/// built-in groups).
PseudoDistance natural_pseudo_distance(const SampledFunction& phi1,
                                       const SampledFunction& phi2,
                                       const Group& group);

struct FunctionSpace {
    double bound = 1.0;
    std::optional<double> lipschitz;
    std::optional<double> range_low;
    std::optional<double> range_high;

    /// 1-Lipschitz functions into [0, 1].
    static FunctionSpace unit_lipschitz();

    /// Throws on negative bound/lipschitz or an inverted range.
    void validate() const;
};

struct Violation {
    std::string constraint;  // "bound", "range", or "lipschitz"
    std::size_t index;
    double value;
    double limit;
};

inline constexpr double kMembershipTolerance = 1e-9;

/// Empty result means phi is a member. The lipschitz check uses the discrete
/// quotient |phi(i+1) - phi(i)| / (2*pi/n), including the wrap-around edge.
std::vector<Violation> membership_check(const FunctionSpace& space, const SampledFunction& phi);

/// Membership violations of the constants -bound and +bound on the grid. Empty
/// iff every constant c with |c| <= bound belongs to the space (the space is
/// convex in c, so the two extremes suffice).
std::vector<Violation> constant_violations(const FunctionSpace& space, GridCircle grid);

/// sin(2*pi*k/n) with exact quadrant reduction, so that grid points at
/// multiples of pi/2 give exactly 0 or +-1 and symmetric points agree bitwise.
double grid_sin(std::int64_t k, std::size_t n);
double grid_cos(std::int64_t k, std::size_t n);

/// abs_sin, sin_sq, sin_sq_root:<p> (also sin_sq_root(<p>)), constant:<c>.
SampledFunction builtin_function(std::string_view spec, GridCircle grid);

SampledFunction abs_sin(GridCircle grid);
SampledFunction sin_sq(GridCircle grid);
SampledFunction sin_sq_root(GridCircle grid, double p);

}  // namespace geneo
