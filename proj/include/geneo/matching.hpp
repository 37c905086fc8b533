#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "geneo/persistence.hpp"

namespace geneo {

/// One assignment of a matching. An unset side means the diagonal.
struct MatchedPair {
    std::optional<std::size_t> left;   // index into the first diagram
    std::optional<std::size_t> right;  // index into the second diagram
    bool essential = false;            // indices refer to essential births
    double cost = 0.0;
};

struct Matching {
    std::vector<MatchedPair> pairs;
    double cost = 0.0;
};

struct BottleneckResult {
    double distance = 0.0;  // +inf when essential counts differ
    Matching matching;
};

/// L-infinity distance between finite points.
double point_cost(const PersistencePair& a, const PersistencePair& b);
/// Cost of sending a finite point to the diagonal: (death - birth) / 2.
double diagonal_cost(const PersistencePair& a);

/// Bottleneck (matching) distance. The finite part is solved exactly by
/// binary search over the sorted candidate costs with a bipartite perfect
/// matching test at each step. Essential births are matched to essential
/// births in sorted order; differing essential counts give +inf.
BottleneckResult bottleneck(const PersistenceDiagram& a, const PersistenceDiagram& b);

}  // namespace geneo
