#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rrhom/bunchy.hpp"
#include "rrhom/enumerate.hpp"

namespace rrhom {

/// A total order on each state's outgoing edges, as rank labels 0..deg-1.
/// When M(G) is a cycle of bunches these correspond bijectively with
/// right-resolvers G -> M(G) (the order on M's edges is fixed to declaration
/// order).
struct TotalOrderColouring {
    GraphPtr graph;
    std::vector<int> rank;  // per edge

    static TotalOrderColouring from_ranks(GraphPtr g, std::vector<int> rank);
    static TotalOrderColouring declaration_order(const GraphPtr& g);
    /// Ranks derived from a choice of 0-edge per state; the remaining edges
    /// keep declaration order.
    static TotalOrderColouring from_zero_edges(const GraphPtr& g,
                                               const std::vector<int>& zero_choice);
    int zero_edge(int state) const;
};

/// The resolver induced by a colouring: the rank-r edge at I' maps to the
/// rank-r edge of M at Sigma(I'). Requires M(G) to be a cycle of bunches.
GraphHom colouring_resolver(const MinimalFactor& mf, const TotalOrderColouring& c);

/// Heights, roots and periods of the spanning out-degree-1 subgraph W formed
/// by the 0-labelled edges, per state and per cyclic position.
struct TreeAnalysis {
    std::vector<int> zero_edge;  // W: one edge per state
    std::vector<int> height;     // steps until the orbit reaches its root
    std::vector<int> root;       // first W-cycle state on the orbit
    std::vector<int> z;          // W-cycle length of the root, divided by p
    std::vector<int> position;   // cyclic position of the state's fiber
    int p = 0;                   // period of the cycle of bunches M(G)

    std::vector<int> h_max;                                  // per position
    std::vector<std::vector<std::pair<int, int>>> tallest;   // per position: (root, h_k(root))
    std::vector<long long> z_lcm;                            // per position
    std::optional<int> unique_tallest_at;                    // first position with a unique tallest tree
};

TreeAnalysis tree_analysis(const GraphPtr& g, const TotalOrderColouring& c);
TreeAnalysis tree_analysis(const MinimalFactor& mf, const CycleOfBunches& mcob,
                           const TotalOrderColouring& c);

struct InAmalgamation {
    GraphHom rewired;              // differs from the input only on E_{I2}, by
                                   // parallel-edge permutations of the codomain
    std::pair<int, int> merged;    // the stable pair (I1, I2)
};

/// Searches each fiber for two states with identical per-target edge counts;
/// when found, rewires the resolver on the second state's edges so that the
/// pair becomes stable, verified with the stability relation.
std::optional<InAmalgamation> in_amalgamation_stable_pair(const GraphHom& phi);

struct SearchBudget {
    long long max_candidates = 200000;
    std::uint64_t seed = 0;
};

struct NontrivialStability {
    GraphHom phi;
    StabilityRelation relation;
    long long candidates_tried = 0;
    bool via_in_amalgamation = false;
    bool used_exhaustive = false;
};

/// For a strongly connected G with M(G) a cycle of bunches and G not itself a
/// cycle of bunches: a right-resolver G -> M(G) with nontrivial stability.
/// Tries in-amalgamation first, then searches total order colourings with a
/// unique tallest tree (local 0-edge swap hill climbing, then exhaustive
/// enumeration under the budget). Every acceptance rests on the computed
/// stability relation, never on the search heuristic. Throws BudgetError when
/// the budget is exhausted without success (an incomplete search, not a
/// counterexample claim).
NontrivialStability find_nontrivial_stability(const GraphPtr& g, const SearchBudget& budget = {});

/// A composable factorization G -> G_1 -> ... -> H of right-resolvers.
struct ResolverChain {
    GraphPtr source;
    std::vector<GraphHom> steps;
    GraphHom composed() const;  // identity when empty
};

struct SyncToCycle {
    GraphPtr o_graph;       // isomorphic to the q-th cyclic power of M(G)
    ResolverChain chain;    // quotient steps, each synchronizing
    GraphHom synchronizer;  // the composed chain, verified synchronizing
    int q = 1;
    long long candidates_tried = 0;
    bool used_exhaustive = false;
};

/// The generalized road colouring construction: repeatedly quotient by a
/// nontrivial stability relation until the graph is bunchy (hence a cycle of
/// bunches). Requires G strongly connected with M(G) a cycle of bunches.
SyncToCycle synchronize_to_cycle_of_bunches(const GraphPtr& g, const SearchBudget& budget = {});

struct OgIsoDecision {
    bool isomorphic = false;
    bool conjecture_conditional = false;  // true for the bunchy-factor-conjecture route
    std::string detail;
    std::optional<CommonSyncExtension> witness;  // positive decisions
};

/// Decides O(G1) = O(G2) for strongly connected bunchy graphs: false when the
/// minimal factors differ, otherwise true iff some principal component of the
/// fiber product of canonical resolvers synchronizes over both inputs.
OgIsoDecision decide_og_iso_bunchy(const GraphPtr& g1, const GraphPtr& g2);

/// Decides O(G1) = O(G2) via the maximal bunchy factors. The result is
/// conditional on the bunchy factor conjecture and is flagged as such.
OgIsoDecision decide_og_iso_bfc(const GraphPtr& g1, const GraphPtr& g2);

struct ConjectureProbe {
    bool witness_found = false;
    bool exhausted = false;        // enumeration completed
    bool budget_exceeded = false;  // inconclusive
    /// exhausted with no witness: would contradict the bunchy factor
    /// conjecture; reported at maximum severity.
    bool counterexample = false;
    long long classes_checked = 0;
    std::optional<unsigned long long> class_count;
    std::optional<GraphHom> witness;
    std::optional<StabilityRelation> witness_relation;
};

/// Enumerates right-resolvers G -> M(G) up to parallel-edge permutation and
/// reports whether any has a nontrivial stability relation. Requires G
/// strongly connected and not bunchy.
ConjectureProbe probe_bunchy_factor_conjecture(const GraphPtr& g, const SearchBudget& budget = {});

}  // namespace rrhom
