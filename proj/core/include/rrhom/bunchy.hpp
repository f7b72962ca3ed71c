#pragma once

#include <optional>
#include <vector>

#include "rrhom/minimal_factor.hpp"
#include "rrhom/stability.hpp"

namespace rrhom {

/// Per-state and graph-level bunchiness data. A state is a bunch when it has
/// exactly one follower; it is bunchy when Sigma restricted to its followers
/// is a bijection onto the followers of its image. The graph is bunchy when
/// every state is; almost bunchy when, for each ordered pair (I, J) of
/// minimal-factor states, at most one state in the fiber of I has two or more
/// followers in the fiber of J.
struct BunchClassification {
    MinimalFactor mf;
    std::vector<bool> is_bunch;
    std::vector<bool> is_bunchy_state;
    bool bunchy = false;
    bool almost_bunchy = false;
    bool cycle_of_bunches = false;

    struct Witness {
        int m_src = -1, m_dst = -1;  // the offending ordered fiber pair
        int state1 = -1, state2 = -1;  // two states violating the bound
    };
    std::optional<Witness> non_almost_bunchy_witness;
};

BunchClassification classify(const GraphPtr& g);

/// A strongly connected graph in which every state is a bunch, together with
/// its cyclic order and out-degree sequence.
struct CycleOfBunches {
    GraphPtr graph;
    std::vector<int> cycle_order;      // states in follower order, starting at state 0
    std::vector<int> degree_sequence;  // out-degrees along cycle_order
    bool is_minimal = false;  // the sequence is not a proper cyclic power
};

std::optional<CycleOfBunches> as_cycle_of_bunches(const GraphPtr& g);

/// The cycle of bunches whose degree sequence is q cyclic repetitions of m's.
/// Requires m minimal and q >= 1.
GraphPtr build_o(const CycleOfBunches& m, int q);

struct MaxBunchyFactor {
    GraphPtr graph;         // B(G), verified bunchy
    GraphHom quotient_map;  // right-resolver G -> B(G)
};

/// Maximal bunchy right-resolving factor via the pair-graph reachability
/// congruence: pairs of fiber-mates reachable from the diagonal through
/// fiber-respecting simultaneous steps are merged (transitively).
MaxBunchyFactor max_bunchy_factor(const GraphPtr& g);

/// The stability relation of an almost bunchy graph, independent of the
/// choice of resolver onto M(G). Throws PreconditionError otherwise.
StabilityRelation almost_bunchy_stability(const GraphPtr& g);

struct MinimalSyncFactor {
    GraphPtr graph;     // O(G) = G / ~_G
    GraphHom sync_map;  // verified synchronizing quotient map
    /// Set for strongly connected inputs: whether O(G) verified bunchy.
    std::optional<bool> bunchy_verified;
};

/// The unique minimal synchronizing factor of an almost bunchy graph.
MinimalSyncFactor og_almost_bunchy(const GraphPtr& g);

struct UniversalPropertyWitness {
    GraphPtr c;              // principal subgraph of the fiber product, bunchy
    GraphHom delta1, delta2; // right-resolvers G -> C with equal state maps
    GraphHom proj1, proj2;   // fiber-product projections restricted to C
};

/// Verifies the universal property of the fiber product of psi1, psi2 for a
/// common extension given by phi1, phi2: builds the induced subgraph C on the
/// paired images and the lifts delta_i, and checks phi_i = proj_i . delta_i
/// edge for edge, that C is principal and bunchy, and that the lifts share a
/// state map. All hypothesis violations are reported precisely.
UniversalPropertyWitness verify_universal_property(const GraphHom& phi1, const GraphHom& phi2,
                                                   const GraphHom& psi1, const GraphHom& psi2);

}  // namespace rrhom
