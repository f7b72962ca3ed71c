#include "rrhom/stability.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <numeric>
#include <queue>
#include <set>

namespace rrhom {

int transition(const ResolverTable& table, int state, std::span<const int> word) {
    const MultiGraph& h = *table.hom().codomain;
    int cur = state;
    int expected = table.hom().state_map[state];
    for (int a : word) {
        if (a < 0 || a >= h.num_edges() || h.edge(a).src != expected)
            throw PreconditionError("transition: word is not a codomain path from the state's image");
        cur = table.step(cur, a);
        expected = h.edge(a).dst;
    }
    return cur;
}

int transition(const GraphHom& phi, int state, std::span<const int> word) {
    return transition(ResolverTable(phi), state, word);
}

int FiberProduct::pair_index(int i1, int i2) const {
    if (i1 < 0 || i1 >= static_cast<int>(index_.size())) return -1;
    if (i2 < 0 || i2 >= static_cast<int>(index_[i1].size())) return -1;
    return index_[i1][i2];
}

FiberProduct fiber_product(const GraphHom& psi1, const GraphHom& psi2) {
    if (psi1.codomain.get() != psi2.codomain.get() &&
        !psi1.codomain->same_structure(*psi2.codomain))
        throw PreconditionError("fiber_product: codomains differ");
    require_right_resolver(psi1, "fiber_product");
    require_right_resolver(psi2, "fiber_product");
    ResolverTable t1(psi1), t2(psi2);
    const MultiGraph& g1 = *psi1.domain;
    const MultiGraph& g2 = *psi2.domain;
    const MultiGraph& k = *psi1.codomain;

    FiberProduct fp;
    fp.index_.assign(g1.num_states(), std::vector<int>(g2.num_states(), -1));
    std::vector<std::string> ids;
    for (int i = 0; i < k.num_states(); ++i)
        for (int a : t1.fiber(i))
            for (int b : t2.fiber(i)) {
                fp.index_[a][b] = static_cast<int>(fp.state_pairs.size());
                fp.state_pairs.push_back({a, b});
                ids.push_back("(" + g1.state_id(a) + "," + g2.state_id(b) + ")");
            }

    std::vector<Edge> edges;
    std::vector<int> p1e, p2e;
    for (int p = 0; p < static_cast<int>(fp.state_pairs.size()); ++p) {
        auto [a, b] = fp.state_pairs[p];
        for (int e1 : g1.out_edges(a)) {
            int ke = psi1.edge_map[e1];
            int e2 = t2.lift(b, ke);
            if (e2 < 0) throw InternalCheckError("fiber product lift failed");
            int q = fp.index_[g1.edge(e1).dst][g2.edge(e2).dst];
            if (q < 0) throw InternalCheckError("fiber product target pair missing");
            edges.push_back(Edge{"(" + g1.edge(e1).id + "," + g2.edge(e2).id + ")", p, q});
            p1e.push_back(e1);
            p2e.push_back(e2);
        }
    }
    std::vector<int> p1s, p2s;
    for (auto& [a, b] : fp.state_pairs) p1s.push_back(a), p2s.push_back(b);
    // The fiber product of sink-free graphs is sink-free; keep the check on.
    fp.product = MultiGraph::make_indexed(std::move(ids), std::move(edges));
    fp.proj1 = GraphHom::make(fp.product, psi1.domain, std::move(p1e), std::move(p1s));
    fp.proj2 = GraphHom::make(fp.product, psi2.domain, std::move(p2e), std::move(p2s));
    fp.to_base = compose(psi1, fp.proj1);
    {
        // psi1 . proj1 and psi2 . proj2 must agree on every edge.
        GraphHom other = compose(psi2, fp.proj2);
        if (other.edge_map != fp.to_base.edge_map || other.state_map != fp.to_base.state_map)
            throw InternalCheckError("fiber product projections do not commute over the base");
    }
    return fp;
}

namespace {

// States of `g` from which `targets` is unreachable (reachability includes
// the empty path, so target states themselves are excluded).
std::vector<bool> unreachable_from(const MultiGraph& g, const std::vector<bool>& targets) {
    std::vector<bool> reached(g.num_states(), false);
    std::queue<int> q;
    for (int i = 0; i < g.num_states(); ++i)
        if (targets[i]) {
            reached[i] = true;
            q.push(i);
        }
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int e : g.in_edges(v)) {
            int w = g.edge(e).src;
            if (!reached[w]) {
                reached[w] = true;
                q.push(w);
            }
        }
    }
    std::vector<bool> out(g.num_states());
    for (int i = 0; i < g.num_states(); ++i) out[i] = !reached[i];
    return out;
}

}  // namespace

StabilityRelation stability_relation(const GraphHom& phi) {
    FiberProduct fp = fiber_product(phi, phi);
    const MultiGraph& p = *fp.product;
    const int np = p.num_states();

    std::vector<bool> diagonal(np, false);
    for (int i = 0; i < np; ++i)
        diagonal[i] = fp.state_pairs[i].first == fp.state_pairs[i].second;

    std::vector<bool> in_u = unreachable_from(p, diagonal);
    std::vector<bool> stable = unreachable_from(p, in_u);

    const int n = phi.domain->num_states();
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (int i = 0; i < np; ++i) {
        if (!stable[i]) continue;
        auto [a, b] = fp.state_pairs[i];
        parent[find(a)] = find(b);
    }
    std::vector<int> assign(n);
    for (int s = 0; s < n; ++s) assign[s] = find(s);
    StabilityRelation rel{Partition::from_block_assignment(phi.domain, assign)};

    // The stable pair set is symmetric by construction; assert that it is
    // also transitive within fibers and contains the diagonal.
    for (int i = 0; i < np; ++i)
        if (diagonal[i] && !stable[i])
            throw InternalCheckError("stability relation: diagonal pair not stable");
    for (const auto& block : rel.partition.blocks)
        for (int a : block)
            for (int b : block) {
                int idx = fp.pair_index(a, b);
                if (idx < 0 || !stable[idx])
                    throw InternalCheckError("stability relation is not transitive within a fiber");
            }
    return rel;
}

bool is_synchronizing(const GraphHom& phi) {
    return stability_relation(phi).partition.same_blocks(Partition::fibers_of(phi));
}

std::vector<int> synchronizing_word(const GraphHom& phi, int codomain_state) {
    if (!is_synchronizing(phi))
        throw PreconditionError("synchronizing_word: map is not synchronizing");
    ResolverTable table(phi);
    FiberProduct fp = fiber_product(phi, phi);
    const MultiGraph& p = *fp.product;

    // BFS toward the diagonal on reversed product edges: dist and the edge to
    // follow from each product state on a shortest path to the diagonal.
    std::vector<int> next_edge(p.num_states(), -1);
    std::vector<int> dist(p.num_states(), -1);
    std::queue<int> q;
    for (int i = 0; i < p.num_states(); ++i)
        if (fp.state_pairs[i].first == fp.state_pairs[i].second) {
            dist[i] = 0;
            q.push(i);
        }
    while (!q.empty()) {
        int v = q.front();
        q.pop();
        for (int e : p.in_edges(v)) {
            int w = p.edge(e).src;
            if (dist[w] == -1) {
                dist[w] = dist[v] + 1;
                next_edge[w] = e;
                q.push(w);
            }
        }
    }

    std::vector<int> current = table.fiber(codomain_state);
    std::vector<int> word;
    while (current.size() > 1) {
        int pair = fp.pair_index(current[0], current[1]);
        if (pair < 0 || dist[pair] == -1)
            throw InternalCheckError("synchronizing_word: no merging word for a stable pair");
        std::vector<int> merging;
        for (int v = pair; dist[v] > 0; v = fp.product->edge(next_edge[v]).dst)
            merging.push_back(fp.to_base.edge_map[next_edge[v]]);
        std::set<int> next;
        for (int s : current) next.insert(transition(table, s, merging));
        if (next.size() >= current.size())
            throw InternalCheckError("synchronizing_word: merging word did not shrink the fiber");
        current.assign(next.begin(), next.end());
        word.insert(word.end(), merging.begin(), merging.end());
    }
    return word;
}

std::vector<ImageSet> minimal_images_bruteforce(const GraphHom& phi, int codomain_state,
                                                int fiber_guard) {
    require_right_resolver(phi, "minimal_images_bruteforce");
    ResolverTable table(phi);
    const MultiGraph& h = *phi.codomain;
    if (static_cast<int>(table.fiber(codomain_state).size()) > fiber_guard)
        throw BudgetError("minimal_images_bruteforce: fiber exceeds the size guard");
    const size_t node_guard = size_t{1} << fiber_guard;

    struct Node {
        int base;
        std::vector<int> image;
        int parent = -1;
        int via_edge = -1;  // codomain edge taken from the parent
    };
    std::map<std::pair<int, std::vector<int>>, int> seen;
    std::vector<Node> nodes;
    std::vector<std::vector<int>> succ;

    Node root{codomain_state, table.fiber(codomain_state), -1, -1};
    seen[{root.base, root.image}] = 0;
    nodes.push_back(root);
    succ.emplace_back();
    for (size_t v = 0; v < nodes.size(); ++v) {
        for (int a : h.out_edges(nodes[v].base)) {
            std::set<int> img;
            for (int s : nodes[v].image) img.insert(table.step(s, a));
            Node nxt{h.edge(a).dst, std::vector<int>(img.begin(), img.end()),
                     static_cast<int>(v), a};
            auto [it, inserted] = seen.emplace(std::make_pair(nxt.base, nxt.image),
                                               static_cast<int>(nodes.size()));
            if (inserted) {
                nodes.push_back(std::move(nxt));
                succ.emplace_back();
                if (nodes.size() > node_guard)
                    throw BudgetError("minimal_images_bruteforce: subset graph exceeds the guard");
            }
            succ[v].push_back(it->second);
        }
    }

    // Terminal strong components of the subset graph.
    const int nn = static_cast<int>(nodes.size());
    std::vector<int> comp(nn, -1), low(nn), num(nn, -1), stk;
    std::vector<bool> onstk(nn, false);
    int counter = 0, ncomp = 0;
    std::vector<std::pair<int, size_t>> frame;
    for (int root_v = 0; root_v < nn; ++root_v) {
        if (num[root_v] != -1) continue;
        frame.push_back({root_v, 0});
        num[root_v] = low[root_v] = counter++;
        stk.push_back(root_v);
        onstk[root_v] = true;
        while (!frame.empty()) {
            auto& [v, ei] = frame.back();
            if (ei < succ[v].size()) {
                int w = succ[v][ei++];
                if (num[w] == -1) {
                    num[w] = low[w] = counter++;
                    stk.push_back(w);
                    onstk[w] = true;
                    frame.push_back({w, 0});
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
                int done = v;
                frame.pop_back();
                if (!frame.empty())
                    low[frame.back().first] = std::min(low[frame.back().first], low[done]);
            }
        }
    }
    std::vector<bool> terminal(ncomp, true);
    for (int v = 0; v < nn; ++v)
        for (int w : succ[v])
            if (comp[v] != comp[w]) terminal[comp[v]] = false;

    std::vector<ImageSet> out;
    for (int v = 0; v < nn; ++v) {
        if (!terminal[comp[v]]) continue;
        ImageSet im;
        im.base_state = nodes[v].base;
        im.image = nodes[v].image;
        for (int u = v; nodes[u].parent != -1; u = nodes[u].parent)
            im.word.push_back(nodes[u].via_edge);
        std::reverse(im.word.begin(), im.word.end());
        out.push_back(std::move(im));
    }
    std::sort(out.begin(), out.end(), [](const ImageSet& a, const ImageSet& b) {
        return std::tie(a.base_state, a.image) < std::tie(b.base_state, b.image);
    });
    return out;
}

CommonSyncExtension common_sync_extension(const GraphHom& psi1, const GraphHom& psi2) {
    if (!is_strongly_connected(*psi1.domain) || !is_strongly_connected(*psi2.domain))
        throw PreconditionError("common_sync_extension: domains must be strongly connected");
    if (!is_synchronizing(psi1) || !is_synchronizing(psi2))
        throw PreconditionError("common_sync_extension: both maps must be synchronizing");
    FiberProduct fp = fiber_product(psi1, psi2);
    auto comps = principal_components(fp.product);
    for (const auto& comp : comps.sets) {
        std::vector<bool> hit1(psi1.domain->num_states(), false),
            hit2(psi2.domain->num_states(), false);
        for (int v : comp) {
            hit1[fp.state_pairs[v].first] = true;
            hit2[fp.state_pairs[v].second] = true;
        }
        if (std::find(hit1.begin(), hit1.end(), false) != hit1.end()) continue;
        if (std::find(hit2.begin(), hit2.end(), false) != hit2.end()) continue;

        GraphPtr c = induced_principal_subgraph(fp.product, comp);
        // Rebuild the restricted projections on the subgraph's indexing.
        std::vector<int> s1, s2, e1, e2;
        for (int i = 0; i < c->num_states(); ++i) {
            int pv = *fp.product->find_state(c->state_id(i));
            s1.push_back(fp.state_pairs[pv].first);
            s2.push_back(fp.state_pairs[pv].second);
        }
        for (int e = 0; e < c->num_edges(); ++e) {
            int pe = *fp.product->find_edge(c->edge(e).id);
            e1.push_back(fp.proj1.edge_map[pe]);
            e2.push_back(fp.proj2.edge_map[pe]);
        }
        CommonSyncExtension ext;
        ext.graph = c;
        ext.to_g1 = GraphHom::make(c, psi1.domain, std::move(e1), std::move(s1));
        ext.to_g2 = GraphHom::make(c, psi2.domain, std::move(e2), std::move(s2));
        if (!is_synchronizing(ext.to_g1) || !is_synchronizing(ext.to_g2))
            throw InternalCheckError("common_sync_extension: restricted projection fails to synchronize");
        return ext;
    }
    throw PreconditionError(
        "common_sync_extension: no principal component has state-surjective projections");
}

}  // namespace rrhom
