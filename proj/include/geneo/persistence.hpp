#pragma once

#include <vector>

#include "geneo/function_space.hpp"

namespace geneo {

struct PersistencePair {
    double birth;
    double death;

    friend bool operator==(const PersistencePair&, const PersistencePair&) = default;
    friend auto operator<=>(const PersistencePair&, const PersistencePair&) = default;
};

/// Degree-0 persistence diagram: finite pairs with birth < death, plus the
/// births of essential classes (death = +inf). Both lists are kept sorted.
struct PersistenceDiagram {
    std::vector<PersistencePair> finite;
    std::vector<double> essential;

    /// Drops zero-persistence pairs and sorts; throws on birth > death or
    /// non-finite coordinates.
    static PersistenceDiagram normalized(std::vector<PersistencePair> finite,
                                         std::vector<double> essential);

    friend bool operator==(const PersistenceDiagram&, const PersistenceDiagram&) = default;
};

/// H0 persistence of the sublevel filtration of phi on the cycle graph.
///
/// Vertices enter in (value, index) order. A vertex with no processed
/// neighbour starts a component; when two components meet at a vertex, the
/// one with the later birth dies there (equal births: the component whose
/// founding vertex has the larger index dies). The component of the global
/// minimum is essential.
PersistenceDiagram sublevel_diagram(const SampledFunction& phi);

/// True iff bottleneck(a, b) <= tol.
bool diagram_equal(const PersistenceDiagram& a, const PersistenceDiagram& b, double tol);

}  // namespace geneo
