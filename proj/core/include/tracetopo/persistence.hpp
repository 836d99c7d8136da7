#pragma once

#include <limits>
#include <string>
#include <vector>

#include "tracetopo/rips.hpp"

namespace tracetopo {

// One persistence interval [birth, death). Infinite deaths are a
// first-class state, never folded into a float sentinel for arithmetic.
struct PersistenceBar {
    int dim = 0;
    double birth = 0.0;
    double death = std::numeric_limits<double>::infinity();
    bool infinite = false;

    double lifetime() const { return infinite ? std::numeric_limits<double>::infinity() : death - birth; }
    bool operator==(const PersistenceBar&) const = default;
};

// The bar multiset of one filtration. max_dim is the highest homology
// dimension whose deaths are fully observed (one below the filtration's
// top simplex dimension); bars of dimension max_dim + 1 are kept but
// flagged partial, since nothing in the complex can kill them.
struct PersistenceDiagram {
    std::vector<PersistenceBar> bars;  // sorted by (dim, birth, death)
    int max_dim = 1;
    int partial_dim = 2;  // bars of this dimension have unobservable deaths
    double eps_max = 0.0;
    bool full_merge = false;

    std::vector<PersistenceBar> bars_in_dim(int k) const;
    int infinite_bar_count(int k) const;
};

// Column reduction of the boundary matrix over the two-element field, in
// filtration order, with the clearing optimization (dimensions processed
// descending). Zero-length pairs are discarded. Throws InternalError if
// the filtration violates face-before-coface ordering.
PersistenceDiagram compute_persistence(const Filtration& f);

// Number of dimension-k bars alive at scale eps (birth <= eps < death).
// eps must not exceed the filtration cap, and k must be a fully-observed
// dimension.
int betti_number_at(const PersistenceDiagram& diag, double eps, int k);

// Independent oracle: Betti numbers from boundary-operator ranks computed
// by Gaussian elimination over the two-element field, enumerating the
// scale-eps complex directly from the distance matrix. Refuses n > 12.
int brute_force_betti(const DistanceMatrix& dm, double eps, int k, int max_dim);

// {"dims": {"0": [[b, d|"inf"], ...], ...}, "eps_max": ..., "max_dim": ...}
std::string diagram_to_json(const PersistenceDiagram& diag);
PersistenceDiagram diagram_from_json(const std::string& text);

// CSV with header dim,birth,death; infinite deaths spelled "inf".
std::string diagram_to_csv(const PersistenceDiagram& diag);

}  // namespace tracetopo
