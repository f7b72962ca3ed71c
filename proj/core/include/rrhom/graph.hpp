#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "rrhom/errors.hpp"

namespace rrhom {

class MultiGraph;
using GraphPtr = std::shared_ptr<const MultiGraph>;

/// An edge of a multigraph. Endpoints are dense state indices.
struct Edge {
    std::string id;
    int src = -1;
    int dst = -1;
};

/// A finite directed multigraph with explicit edge identities. Loops and
/// parallel edges are allowed. Immutable after construction: every operation
/// in the library returns a new graph, so values are safe to share across
/// threads.
///
/// States and edges carry external string ids and are addressed internally by
/// dense indices in declaration order.
class MultiGraph {
public:
    /// Validates and builds a graph. Throws ValidationError on duplicate ids,
    /// dangling endpoints, or (unless allow_sinks) a state with no outgoing
    /// edges.
    static GraphPtr make(std::vector<std::string> state_ids,
                         std::vector<std::tuple<std::string, std::string, std::string>> edges,
                         bool allow_sinks = false);

    /// Index-based factory used by graph constructions.
    static GraphPtr make_indexed(std::vector<std::string> state_ids, std::vector<Edge> edges,
                                 bool allow_sinks = false);

    int num_states() const { return static_cast<int>(states_.size()); }
    int num_edges() const { return static_cast<int>(edges_.size()); }

    const std::string& state_id(int i) const { return states_[i]; }
    const Edge& edge(int e) const { return edges_[e]; }
    const std::vector<Edge>& edges() const { return edges_; }

    /// Outgoing edge indices of a state, in declaration order. E_I(G).
    const std::vector<int>& out_edges(int state) const { return out_[state]; }
    const std::vector<int>& in_edges(int state) const { return in_[state]; }
    int out_degree(int state) const { return static_cast<int>(out_[state].size()); }

    std::optional<int> find_state(std::string_view id) const;
    std::optional<int> find_edge(std::string_view id) const;

    /// Distinct follower states F(I), ascending.
    std::vector<int> followers(int state) const;
    /// |E_IJ(G)|.
    int count_edges(int src, int dst) const;
    /// Edge indices from src to dst, in declaration order.
    std::vector<int> edges_between(int src, int dst) const;
    /// States with empty E_I(G).
    std::vector<int> sink_states() const;

    bool has_state_named(std::string_view id) const { return find_state(id).has_value(); }

    /// Exact id-level equality (same states, same edges, same order). Graph
    /// equality in the mathematical sense is isomorphism; see find_isomorphism.
    bool same_structure(const MultiGraph& other) const;

private:
    MultiGraph() = default;

    std::vector<std::string> states_;
    std::vector<Edge> edges_;
    std::vector<std::vector<int>> out_;
    std::vector<std::vector<int>> in_;
    std::unordered_map<std::string, int> state_index_;
    std::unordered_map<std::string, int> edge_index_;
};

/// A list of disjoint state subsets of one graph (strong components, principal
/// components, fibers, ...).
struct StateSetFamily {
    GraphPtr graph;
    std::vector<std::vector<int>> sets;
};

/// Strong components of g, as a partition of V(g). Deterministic: components
/// are ordered by their smallest state index, members ascending.
StateSetFamily strong_components(const GraphPtr& g);

bool is_strongly_connected(const MultiGraph& g);
inline bool is_strongly_connected(const GraphPtr& g) { return is_strongly_connected(*g); }

/// The condensation of g: acyclic, one state per strong component, one edge
/// per ordered component pair joined by at least one crossing edge.
GraphPtr condensation(const GraphPtr& g);

/// The strong components that are sinks of the condensation.
StateSetFamily principal_components(const GraphPtr& g);

/// Subgraph on a follower-closed state set with all of its outgoing edges.
/// Throws PreconditionError if the set is not follower-closed.
GraphPtr induced_principal_subgraph(const GraphPtr& g, const std::vector<int>& states);

/// gcd of cycle lengths of a strongly connected graph, via BFS level
/// differences. Throws PreconditionError if g is not strongly connected.
int period(const GraphPtr& g);

/// k-th higher edge graph: states are length-(k-1) edge paths, edges are
/// length-k edge paths. Returns g itself for k = 1. Requires g sink-free.
GraphPtr higher_edge_graph(const GraphPtr& g, int k);

/// Witness of a graph isomorphism: state and edge bijections g -> h.
struct GraphIso {
    std::vector<int> state_map;
    std::vector<int> edge_map;
};

/// Backtracking isomorphism search over degree-refined candidate maps. Desk
/// scale only: throws BudgetError when either graph exceeds size_guard states.
/// A returned witness has been verified edge by edge.
std::optional<GraphIso> find_isomorphism(const GraphPtr& g, const GraphPtr& h,
                                         int size_guard = 12);

bool isomorphic(const GraphPtr& g, const GraphPtr& h, int size_guard = 12);

}  // namespace rrhom
