#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "rrhom/hom.hpp"

namespace rrhom {

/// The minimal right-resolving factor M(G) with its forced state map Sigma.
///
/// States of `graph` are indexed in a canonical order derived from the
/// refinement history; the order is invariant under graph isomorphism, so any
/// isomorphism between minimal factors maps state k to state k.
struct MinimalFactor {
    GraphPtr source;
    GraphPtr graph;                    // M(G), states in canonical order
    std::vector<int> sigma;            // V(source) -> V(M)
    std::vector<int> canonical_order;  // identity by construction, kept explicit
};

/// Computes M(G) by successive refinement of the single-block partition: two
/// states stay in one block iff they have, for every block, equal counts of
/// outgoing edges into that block. Throws ValidationError if g has sinks.
MinimalFactor minimal_factor(const GraphPtr& g);

/// Optional orderings consumed by construct_right_resolver. Missing entries
/// default to declaration order. Keys are pairs of state indices:
/// codomain_order by (I, J) in V(M)^2 over E_IJ(M); domain_order by
/// (I', J) in V(G) x V(M) over the edges of I' into the fiber of J.
struct EdgeOrders {
    std::map<std::pair<int, int>, std::vector<int>> codomain_order;
    std::map<std::pair<int, int>, std::vector<int>> domain_order;
};

/// Builds a right-resolver G -> M(G) by matching, for each state I' and each
/// target state J of M, the ordered edges of I' into the fiber of J with the
/// ordered edges E_{Sigma(I') J}(M). The state map is always Sigma.
GraphHom construct_right_resolver(const MinimalFactor& mf, const EdgeOrders& orders = {});

/// Uniformly shuffled orderings for both choice points of the construction.
EdgeOrders shuffled_edge_orders(const MinimalFactor& mf, std::uint64_t seed);

}  // namespace rrhom
