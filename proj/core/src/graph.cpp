#include "rrhom/graph.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <queue>
#include <set>
#include <tuple>

namespace rrhom {

GraphPtr MultiGraph::make(std::vector<std::string> state_ids,
                          std::vector<std::tuple<std::string, std::string, std::string>> edges,
                          bool allow_sinks) {
    std::unordered_map<std::string, int> sidx;
    for (int i = 0; i < static_cast<int>(state_ids.size()); ++i) {
        if (!sidx.emplace(state_ids[i], i).second)
            throw ValidationError("duplicate state id '" + state_ids[i] + "'");
    }
    std::vector<Edge> es;
    es.reserve(edges.size());
    for (auto& [id, src, dst] : edges) {
        auto is = sidx.find(src);
        if (is == sidx.end())
            throw ValidationError("edge '" + id + "' has dangling source '" + src + "'");
        auto it = sidx.find(dst);
        if (it == sidx.end())
            throw ValidationError("edge '" + id + "' has dangling target '" + dst + "'");
        es.push_back(Edge{std::move(id), is->second, it->second});
    }
    return make_indexed(std::move(state_ids), std::move(es), allow_sinks);
}

GraphPtr MultiGraph::make_indexed(std::vector<std::string> state_ids, std::vector<Edge> edges,
                                  bool allow_sinks) {
    if (state_ids.empty()) throw ValidationError("a graph needs at least one state");
    auto g = std::shared_ptr<MultiGraph>(new MultiGraph());
    const int n = static_cast<int>(state_ids.size());
    g->states_ = std::move(state_ids);
    for (int i = 0; i < n; ++i) {
        if (!g->state_index_.emplace(g->states_[i], i).second)
            throw ValidationError("duplicate state id '" + g->states_[i] + "'");
    }
    g->edges_ = std::move(edges);
    g->out_.assign(n, {});
    g->in_.assign(n, {});
    for (int e = 0; e < static_cast<int>(g->edges_.size()); ++e) {
        const Edge& ed = g->edges_[e];
        if (!g->edge_index_.emplace(ed.id, e).second)
            throw ValidationError("duplicate edge id '" + ed.id + "'");
        if (ed.src < 0 || ed.src >= n || ed.dst < 0 || ed.dst >= n)
            throw ValidationError("edge '" + ed.id + "' has an endpoint outside the state list");
        g->out_[ed.src].push_back(e);
        g->in_[ed.dst].push_back(e);
    }
    if (!allow_sinks) {
        for (int i = 0; i < n; ++i)
            if (g->out_[i].empty())
                throw ValidationError("state '" + g->states_[i] +
                                      "' is a sink (no outgoing edges); graphs are sink-free "
                                      "unless loaded with allow_sinks");
    }
    return g;
}

std::optional<int> MultiGraph::find_state(std::string_view id) const {
    auto it = state_index_.find(std::string(id));
    if (it == state_index_.end()) return std::nullopt;
    return it->second;
}

std::optional<int> MultiGraph::find_edge(std::string_view id) const {
    auto it = edge_index_.find(std::string(id));
    if (it == edge_index_.end()) return std::nullopt;
    return it->second;
}

std::vector<int> MultiGraph::followers(int state) const {
    std::vector<int> f;
    for (int e : out_[state]) f.push_back(edges_[e].dst);
    std::sort(f.begin(), f.end());
    f.erase(std::unique(f.begin(), f.end()), f.end());
    return f;
}

int MultiGraph::count_edges(int src, int dst) const {
    int c = 0;
    for (int e : out_[src])
        if (edges_[e].dst == dst) ++c;
    return c;
}

std::vector<int> MultiGraph::edges_between(int src, int dst) const {
    std::vector<int> r;
    for (int e : out_[src])
        if (edges_[e].dst == dst) r.push_back(e);
    return r;
}

std::vector<int> MultiGraph::sink_states() const {
    std::vector<int> r;
    for (int i = 0; i < num_states(); ++i)
        if (out_[i].empty()) r.push_back(i);
    return r;
}

bool MultiGraph::same_structure(const MultiGraph& other) const {
    if (states_ != other.states_) return false;
    if (edges_.size() != other.edges_.size()) return false;
    for (size_t e = 0; e < edges_.size(); ++e) {
        if (edges_[e].id != other.edges_[e].id || edges_[e].src != other.edges_[e].src ||
            edges_[e].dst != other.edges_[e].dst)
            return false;
    }
    return true;
}

namespace {

// Iterative Tarjan; component ids then renumbered by smallest member.
std::vector<int> tarjan_components(const MultiGraph& g, int& ncomp) {
    const int n = g.num_states();
    std::vector<int> comp(n, -1), low(n), num(n, -1), stk, call_state, call_edge;
    std::vector<bool> onstk(n, false);
    int counter = 0;
    ncomp = 0;
    for (int root = 0; root < n; ++root) {
        if (num[root] != -1) continue;
        call_state.push_back(root);
        call_edge.push_back(0);
        num[root] = low[root] = counter++;
        stk.push_back(root);
        onstk[root] = true;
        while (!call_state.empty()) {
            int v = call_state.back();
            int& ei = call_edge.back();
            if (ei < static_cast<int>(g.out_edges(v).size())) {
                int w = g.edge(g.out_edges(v)[ei]).dst;
                ++ei;
                if (num[w] == -1) {
                    num[w] = low[w] = counter++;
                    stk.push_back(w);
                    onstk[w] = true;
                    call_state.push_back(w);
                    call_edge.push_back(0);
                } else if (onstk[w]) {
                    low[v] = std::min(low[v], num[w]);
                }
            } else {
                if (low[v] == num[v]) {
                    while (true) {
                        int w = stk.back();
                        stk.pop_back();
                        onstk[w] = false;
                        comp[w] = ncomp;
                        if (w == v) break;
                    }
                    ++ncomp;
                }
                call_state.pop_back();
                call_edge.pop_back();
                if (!call_state.empty())
                    low[call_state.back()] = std::min(low[call_state.back()], low[v]);
            }
        }
    }
    // Renumber components by smallest member state index.
    std::vector<int> first(ncomp, n);
    for (int i = 0; i < n; ++i) first[comp[i]] = std::min(first[comp[i]], i);
    std::vector<int> order(ncomp);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) { return first[a] < first[b]; });
    std::vector<int> rank(ncomp);
    for (int r = 0; r < ncomp; ++r) rank[order[r]] = r;
    for (int i = 0; i < n; ++i) comp[i] = rank[comp[i]];
    return comp;
}

}  // namespace

StateSetFamily strong_components(const GraphPtr& g) {
    int ncomp = 0;
    auto comp = tarjan_components(*g, ncomp);
    StateSetFamily fam;
    fam.graph = g;
    fam.sets.assign(ncomp, {});
    for (int i = 0; i < g->num_states(); ++i) fam.sets[comp[i]].push_back(i);
    return fam;
}

bool is_strongly_connected(const MultiGraph& g) {
    int ncomp = 0;
    tarjan_components(g, ncomp);
    return ncomp == 1 && g.num_states() > 0;
}

GraphPtr condensation(const GraphPtr& g) {
    int ncomp = 0;
    auto comp = tarjan_components(*g, ncomp);
    std::vector<std::vector<int>> sets(ncomp);
    for (int i = 0; i < g->num_states(); ++i) sets[comp[i]].push_back(i);
    std::vector<std::string> ids(ncomp);
    for (int c = 0; c < ncomp; ++c) ids[c] = g->state_id(sets[c][0]);
    std::set<std::pair<int, int>> cross;
    for (const Edge& e : g->edges())
        if (comp[e.src] != comp[e.dst]) cross.insert({comp[e.src], comp[e.dst]});
    std::vector<Edge> edges;
    for (auto [a, b] : cross) edges.push_back(Edge{ids[a] + ">" + ids[b], a, b});
    return MultiGraph::make_indexed(std::move(ids), std::move(edges), /*allow_sinks=*/true);
}

StateSetFamily principal_components(const GraphPtr& g) {
    int ncomp = 0;
    auto comp = tarjan_components(*g, ncomp);
    std::vector<std::vector<int>> sets(ncomp);
    for (int i = 0; i < g->num_states(); ++i) sets[comp[i]].push_back(i);
    std::vector<bool> has_exit(ncomp, false);
    for (const Edge& e : g->edges())
        if (comp[e.src] != comp[e.dst]) has_exit[comp[e.src]] = true;
    StateSetFamily fam;
    fam.graph = g;
    for (int c = 0; c < ncomp; ++c)
        if (!has_exit[c]) fam.sets.push_back(sets[c]);
    return fam;
}

GraphPtr induced_principal_subgraph(const GraphPtr& g, const std::vector<int>& states) {
    std::vector<bool> in_set(g->num_states(), false);
    for (int s : states) in_set[s] = true;
    for (int s : states)
        for (int e : g->out_edges(s))
            if (!in_set[g->edge(e).dst])
                throw PreconditionError("state set is not follower-closed: '" +
                                        g->state_id(s) + "' has follower '" +
                                        g->state_id(g->edge(e).dst) + "' outside the set");
    std::vector<int> sorted(states);
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> local(g->num_states(), -1);
    std::vector<std::string> ids;
    for (int s : sorted) {
        local[s] = static_cast<int>(ids.size());
        ids.push_back(g->state_id(s));
    }
    std::vector<Edge> edges;
    for (int s : sorted)
        for (int e : g->out_edges(s))
            edges.push_back(Edge{g->edge(e).id, local[s], local[g->edge(e).dst]});
    return MultiGraph::make_indexed(std::move(ids), std::move(edges), /*allow_sinks=*/true);
}

int period(const GraphPtr& g) {
    if (!is_strongly_connected(*g))
        throw PreconditionError("period is defined for strongly connected graphs only");
    const int n = g->num_states();
    std::vector<int> dist(n, -1);
    std::queue<int> q;
    dist[0] = 0;
    q.push(0);
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int e : g->out_edges(v)) {
            int w = g->edge(e).dst;
            if (dist[w] == -1) {
                dist[w] = dist[v] + 1;
                q.push(w);
            }
        }
    }
    long long p = 0;
    for (const Edge& e : g->edges()) p = std::gcd(p, static_cast<long long>(dist[e.src]) + 1 - dist[e.dst]);
    return static_cast<int>(p < 0 ? -p : p);
}

GraphPtr higher_edge_graph(const GraphPtr& g, int k) {
    if (k < 1) throw PreconditionError("higher edge graph requires k >= 1");
    if (!g->sink_states().empty())
        throw PreconditionError("higher edge graph requires a sink-free graph");
    if (k == 1) return g;

    auto path_id = [&](const std::vector<int>& path) {
        std::string s;
        for (size_t i = 0; i < path.size(); ++i) {
            if (i) s += '.';
            s += g->edge(path[i]).id;
        }
        return s;
    };

    // Length-(k-1) paths in lexicographic order of edge indices.
    std::vector<std::vector<int>> paths;
    {
        std::vector<std::vector<int>> frontier;
        for (int e = 0; e < g->num_edges(); ++e) frontier.push_back({e});
        for (int len = 2; len <= k - 1; ++len) {
            std::vector<std::vector<int>> next;
            for (const auto& p : frontier)
                for (int e : g->out_edges(g->edge(p.back()).dst)) {
                    auto q = p;
                    q.push_back(e);
                    next.push_back(std::move(q));
                }
            frontier = std::move(next);
        }
        paths = std::move(frontier);
    }
    std::map<std::vector<int>, int> index;
    std::vector<std::string> ids;
    for (const auto& p : paths) {
        index.emplace(p, static_cast<int>(ids.size()));
        ids.push_back(path_id(p));
    }
    std::vector<Edge> edges;
    for (const auto& p : paths) {
        int src = index.at(p);
        for (int e : g->out_edges(g->edge(p.back()).dst)) {
            std::vector<int> full = p;
            full.push_back(e);
            std::vector<int> suffix(full.begin() + 1, full.end());
            edges.push_back(Edge{path_id(full), src, index.at(suffix)});
        }
    }
    return MultiGraph::make_indexed(std::move(ids), std::move(edges));
}

namespace {

struct StateSig {
    int outdeg, indeg, loops;
    std::vector<int> outmult, inmult;
    auto tie() const { return std::tie(outdeg, indeg, loops, outmult, inmult); }
    bool operator<(const StateSig& o) const { return tie() < o.tie(); }
    bool operator==(const StateSig& o) const { return tie() == o.tie(); }
};

StateSig state_sig(const MultiGraph& g, int s) {
    StateSig sig;
    sig.outdeg = g.out_degree(s);
    sig.indeg = static_cast<int>(g.in_edges(s).size());
    sig.loops = g.count_edges(s, s);
    std::map<int, int> om, im;
    for (int e : g.out_edges(s)) om[g.edge(e).dst]++;
    for (int e : g.in_edges(s)) im[g.edge(e).src]++;
    for (auto& [_, c] : om) sig.outmult.push_back(c);
    for (auto& [_, c] : im) sig.inmult.push_back(c);
    std::sort(sig.outmult.begin(), sig.outmult.end());
    std::sort(sig.inmult.begin(), sig.inmult.end());
    return sig;
}

bool extend_map(const MultiGraph& g, const MultiGraph& h, const std::vector<int>& order, size_t pos,
                std::vector<int>& smap, std::vector<bool>& used,
                const std::vector<std::vector<int>>& candidates) {
    if (pos == order.size()) return true;
    int v = order[pos];
    for (int w : candidates[v]) {
        if (used[w]) continue;
        bool ok = true;
        for (size_t j = 0; j < pos && ok; ++j) {
            int u = order[j];
            if (g.count_edges(v, u) != h.count_edges(w, smap[u]) ||
                g.count_edges(u, v) != h.count_edges(smap[u], w))
                ok = false;
        }
        if (g.count_edges(v, v) != h.count_edges(w, w)) ok = false;
        if (!ok) continue;
        smap[v] = w;
        used[w] = true;
        if (extend_map(g, h, order, pos + 1, smap, used, candidates)) return true;
        used[w] = false;
        smap[v] = -1;
    }
    return false;
}

}  // namespace

std::optional<GraphIso> find_isomorphism(const GraphPtr& gp, const GraphPtr& hp, int size_guard) {
    const MultiGraph& g = *gp;
    const MultiGraph& h = *hp;
    if (g.num_states() > size_guard || h.num_states() > size_guard)
        throw BudgetError("isomorphism size guard exceeded (" + std::to_string(size_guard) +
                          " states); this check is for desk-scale verification only");
    if (g.num_states() != h.num_states() || g.num_edges() != h.num_edges()) return std::nullopt;
    const int n = g.num_states();

    std::vector<StateSig> gs(n), hs(n);
    for (int i = 0; i < n; ++i) gs[i] = state_sig(g, i), hs[i] = state_sig(h, i);
    {
        auto a = gs, b = hs;
        std::sort(a.begin(), a.end());
        std::sort(b.begin(), b.end());
        if (!(a == b)) return std::nullopt;
    }
    std::vector<std::vector<int>> candidates(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            if (gs[i] == hs[j]) candidates[i].push_back(j);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (candidates[a].size() != candidates[b].size())
            return candidates[a].size() < candidates[b].size();
        return a < b;
    });

    std::vector<int> smap(n, -1);
    std::vector<bool> used(n, false);
    if (!extend_map(g, h, order, 0, smap, used, candidates)) return std::nullopt;

    // Edge bijection: match parallel classes in declaration order.
    std::vector<int> emap(g.num_edges(), -1);
    for (int i = 0; i < n; ++i) {
        for (int j : g.followers(i)) {
            auto ge = g.edges_between(i, j);
            auto he = h.edges_between(smap[i], smap[j]);
            if (ge.size() != he.size()) return std::nullopt;
            for (size_t t = 0; t < ge.size(); ++t) emap[ge[t]] = he[t];
        }
    }
    // Verify the witness before returning it.
    std::vector<bool> hit(h.num_edges(), false);
    for (int e = 0; e < g.num_edges(); ++e) {
        if (emap[e] < 0 || hit[emap[e]]) throw InternalCheckError("isomorphism witness not bijective");
        hit[emap[e]] = true;
        if (h.edge(emap[e]).src != smap[g.edge(e).src] || h.edge(emap[e]).dst != smap[g.edge(e).dst])
            throw InternalCheckError("isomorphism witness fails edge verification");
    }
    return GraphIso{std::move(smap), std::move(emap)};
}

bool isomorphic(const GraphPtr& g, const GraphPtr& h, int size_guard) {
    return find_isomorphism(g, h, size_guard).has_value();
}

}  // namespace rrhom
