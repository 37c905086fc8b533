#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geneo/function_space.hpp"
#include "geneo/operator.hpp"

namespace geneo {

/// Operator expression language.
///
///   expr   := 'id'
///           | 'rot' '(' angle ')' | 'refl' '(' angle ')'
///           | 'Mp' '(' number ';' expr (',' expr)* ')'
///           | 'L' '(' lmap ';' expr (',' expr)* ')'
///           | 'series' '(' 'geom' '(' number ',' number ')' ',' family [';' 'eps' '=' number] ')'
///           | 'compose' '(' expr ',' expr ')'
///           | 'unchecked' expr
///   lmap   := 'max' | 'min' | 'proj' ':' integer | 'convex' ':' number (',' number)*
///   family := 'rot-family' '(' angle ')' | 'const-family' '(' expr ')'
///   angle  := ['-'] ( '0' | [integer ['*']] 'pi' ['/' integer] )
///
/// Angles are rational multiples of pi and are resolved against the grid only
/// at elaboration, so `pi/7` parses but fails to elaborate on n = 360.
/// `proj` coordinates are 1-based.

/// angle = num/den * pi, kept reduced with den > 0.
struct Angle {
    std::int64_t num = 0;
    std::int64_t den = 1;

    static Angle make(std::int64_t num, std::int64_t den);
    /// Grid shift for this angle; throws if it is not a multiple of 2pi/n.
    std::int64_t shift_on(std::size_t n) const;
    static Angle from_shift(std::int64_t shift, std::size_t n);

    friend bool operator==(const Angle&, const Angle&) = default;
};

struct OpExpr {
    enum class Kind { identity, rot, refl, power_mean, lipschitz, series, compose, unchecked };
    enum class MapKind { max, min, proj, convex };
    enum class FamilyKind { rotation, constant };

    Kind kind = Kind::identity;
    Angle angle;                 // rot, refl, rotation family step
    double p = 1.0;              // power_mean
    MapKind map = MapKind::max;  // lipschitz
    std::size_t coordinate = 1;  // proj, 1-based
    std::vector<double> weights; // convex
    double c = 0.0;              // series geom(c, r)
    double r = 0.0;
    FamilyKind family = FamilyKind::rotation;
    std::optional<double> eps;
    // power_mean/lipschitz: arguments; compose: {outer, inner};
    // unchecked: {body}; series with const-family: {base}.
    std::vector<OpExpr> children;

    friend bool operator==(const OpExpr&, const OpExpr&) = default;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t offset, std::vector<std::string> expected);

    std::size_t offset() const noexcept { return offset_; }
    const std::vector<std::string>& expected() const noexcept { return expected_; }

private:
    std::size_t offset_;
    std::vector<std::string> expected_;
};

class ElaborationError : public Error {
public:
    using Error::Error;
};

/// Syntax only.
OpExpr parse(std::string_view text);
/// Syntax plus grid-representability of every angle (ElaborationError otherwise).
OpExpr parse(std::string_view text, GridCircle grid);

/// Canonical text form; parse(print(e)) == e.
std::string print(const OpExpr& expr);

/// Builds the operator with all construction-time checks: precompose and
/// rotation families must commute with G, power means need p >= 1, series
/// coefficients must sum to at most 1. Inside `unchecked` the relaxed
/// constructors are used and the tree is marked unvalidated. Series use the
/// space bound as their uniform bound B.
Operator elaborate(const OpExpr& expr, const Group& group, const FunctionSpace& space);

/// parse + elaborate.
Operator parse_operator(std::string_view text, const Group& group, const FunctionSpace& space);

/// Expression for an operator tree; throws for series over custom coefficients.
OpExpr to_expr(const Operator& op);
std::string describe(const Operator& op);

}  // namespace geneo
