#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "geneo/function_space.hpp"
#include "geneo/io.hpp"
#include "geneo/operator.hpp"
#include "geneo/validate.hpp"

namespace geneo {

struct NamedOperator {
    std::string id;
    Operator op;
};

/// Wraps each operator with its canonical text form as id.
std::vector<NamedOperator> named(std::vector<Operator> ops);

struct LowerBound {
    double value = 0.0;
    std::size_t argmax = 0;
    std::string id;
};

/// max over F in family of bottleneck(Dgm(F(phi1)), Dgm(F(phi2))). For
/// GENEOs this never exceeds d_G(phi1, phi2). Throws if any operator is
/// unvalidated.
LowerBound lower_bound(std::span<const NamedOperator> family, const SampledFunction& phi1,
                       const SampledFunction& phi2);

/// Elements of the grid's dihedral group commuting with every element of G;
/// the admissible arguments of precompose.
std::vector<GroupElement> centralizer(const Group& group);

/// Random validated combinator tree with at most `max_depth` nodes on any
/// root-to-leaf path, drawn from identity, precompose (centralizer elements),
/// power_mean (p in {1, 2, 3}), lipschitz_combine (max/min), geometric series
/// and compose.
Operator random_operator(Rng& rng, const Group& group, const FunctionSpace& space, int max_depth = 4);

struct GapConfig {
    std::uint64_t seed = 0;
    std::vector<std::size_t> family_sizes{1, 4, 16};
    int max_depth = 4;
    /// Operators placed ahead of the random ones in every family.
    std::vector<NamedOperator> base_family;
};

struct GapRecord {
    std::size_t family_size;
    std::size_t first;
    std::size_t second;
    double natural_distance;
    double bound;
    std::string witness;
    double gap;
};

struct GapStats {
    std::size_t family_size;
    double max_gap;
    double mean_gap;
};

struct GapReport {
    GapConfig config;
    std::vector<std::string> family;  // ids of the largest family, in order
    std::vector<GapRecord> records;
    std::vector<GapStats> stats;
};

/// For each family size m (sorted ascending), the family is base_family plus
/// the first m random operators, so families are nested and every pair's
/// best bound is non-decreasing in m.
GapReport gap_report(const GapConfig& config, std::span<const SampledFunction> corpus,
                     const Group& group, const FunctionSpace& space);

Json gap_report_json(const GapReport& report);
void write_gap_csv(std::ostream& out, const GapReport& report);

}  // namespace geneo
