// Acceptance suite. Each criterion prints exactly one PASS/FAIL line; the
// process exits nonzero if any executed criterion fails. Invoke with a
// criterion number (1..10) or with no argument to run all of them.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <iostream>
#include <mutex>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <thread>
#include <vector>

#include "corpus.hpp"
#include "oracles.hpp"
#include "rrhom/graph_io.hpp"
#include "rrhom/pipeline.hpp"
#include "smallgraphs.hpp"

using namespace rrhom;

namespace {

int hardware_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 2 : static_cast<int>(n);
}

template <typename F>
void parallel_for(std::size_t count, F&& f) {
    std::atomic<std::size_t> cursor{0};
    auto work = [&] {
        while (true) {
            std::size_t i = cursor.fetch_add(1);
            if (i >= count) break;
            f(i);
        }
    };
    std::vector<std::thread> pool;
    for (int t = 1; t < hardware_threads(); ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

struct Failures {
    std::mutex mu;
    std::vector<std::string> items;
    void add(std::string s) {
        std::lock_guard<std::mutex> lock(mu);
        items.push_back(std::move(s));
    }
    bool empty() {
        std::lock_guard<std::mutex> lock(mu);
        return items.empty();
    }
    std::string brief() {
        std::lock_guard<std::mutex> lock(mu);
        std::sort(items.begin(), items.end());
        std::string out;
        for (std::size_t i = 0; i < items.size() && i < 3; ++i) out += " [" + items[i] + "]";
        if (items.size() > 3) out += " (+" + std::to_string(items.size() - 3) + " more)";
        return out;
    }
};

std::vector<corpus::Named> corpus_with_max_states(int max_states) {
    std::vector<corpus::Named> out;
    for (const auto& entry : corpus::acceptance_corpus())
        if (entry.graph->num_states() <= max_states) out.push_back(entry);
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 1: road colouring. Every strongly connected aperiodic graph of
// constant out-degree (exhaustive, <= 5 states, D <= 3, up to isomorphism;
// plus Cerny4..6) admits a verified synchronizing colouring, confirmed by the
// subset-construction oracle.
// ---------------------------------------------------------------------------
bool criterion1(std::string& detail) {
    std::vector<GraphPtr> graphs;
    for (int n = 1; n <= 5; ++n) {
        smallgraphs::Options opt;
        opt.n = n;
        opt.min_degree = 1;
        opt.max_degree = 3;
        opt.constant_degree = true;
        opt.require_aperiodic = true;
        opt.threads = hardware_threads();
        for (const auto& s : smallgraphs::enumerate(opt)) graphs.push_back(smallgraphs::to_graph(s));
    }
    std::size_t enumerated = graphs.size();
    for (int n = 4; n <= 6; ++n) graphs.push_back(corpus::cerny(n));

    Failures failures;
    std::atomic<long long> verified{0};
    std::atomic<long long> exhaustive_fallbacks{0};
    parallel_for(graphs.size(), [&](std::size_t i) {
        const GraphPtr& g = graphs[i];
        try {
            SyncToCycle r = synchronize_to_cycle_of_bunches(g);
            if (r.used_exhaustive) ++exhaustive_fallbacks;
            if (!is_synchronizing(r.synchronizer)) throw Error("not synchronizing");
            // Independent confirmation: subset construction reaches a singleton
            // from every fiber.
            for (int b = 0; b < r.o_graph->num_states(); ++b) {
                auto word = oracles::subset_sync_word(r.synchronizer, b);
                if (!word) throw Error("subset oracle found no collapsing word");
            }
            if (r.q != 1) throw Error("aperiodic input produced q != 1");
            auto mcob = as_cycle_of_bunches(minimal_factor(g).graph);
            if (!find_isomorphism(r.o_graph, build_o(*mcob, r.q)))
                throw Error("codomain is not M_D");
            ++verified;
        } catch (const std::exception& e) {
            failures.add("graph#" + std::to_string(i) + ": " + e.what());
        }
    });
    std::ostringstream os;
    os << verified.load() << " graphs road-coloured (" << enumerated
       << " enumerated classes + Cerny4..6; exhaustive colouring fallback used "
       << exhaustive_fallbacks.load() << " times)";
    detail = os.str() + failures.brief();
    return failures.empty() && enumerated > 1000;
}

// ---------------------------------------------------------------------------
// Criterion 2: periodic and generalized road colouring. Exhaustive strongly
// connected graphs (<= 5 states, out-degrees 1..3, up to isomorphism) with
// M(G) a cycle of bunches synchronize onto O_{M(G), per(G)/per(M)}.
// ---------------------------------------------------------------------------
bool criterion2(std::string& detail) {
    std::vector<GraphPtr> graphs;
    for (int n = 1; n <= 5; ++n) {
        smallgraphs::Options opt;
        opt.n = n;
        opt.min_degree = 1;
        opt.max_degree = 3;
        opt.require_m_cycle_of_bunches = true;
        opt.threads = hardware_threads();
        for (const auto& s : smallgraphs::enumerate(opt)) graphs.push_back(smallgraphs::to_graph(s));
    }
    Failures failures;
    std::atomic<long long> verified{0};
    std::atomic<long long> exhaustive_fallbacks{0};
    parallel_for(graphs.size(), [&](std::size_t i) {
        const GraphPtr& g = graphs[i];
        try {
            MinimalFactor mf = minimal_factor(g);
            auto mcob = as_cycle_of_bunches(mf.graph);
            if (!mcob) throw Error("corpus filter admitted a non-cycle-of-bunches M");
            SyncToCycle r = synchronize_to_cycle_of_bunches(g);
            if (r.used_exhaustive) ++exhaustive_fallbacks;
            if (!is_synchronizing(r.synchronizer)) throw Error("not synchronizing");
            int q = period(g) / period(mf.graph);
            if (r.q != q) throw Error("q mismatch");
            if (!find_isomorphism(r.o_graph, build_o(*mcob, q)))
                throw Error("codomain not isomorphic to the q-th cyclic power of M(G)");
            for (int b = 0; b < r.o_graph->num_states(); ++b)
                if (!oracles::subset_sync_word(r.synchronizer, b))
                    throw Error("subset oracle found no collapsing word");
            ++verified;
        } catch (const std::exception& e) {
            failures.add("graph#" + std::to_string(i) + ": " + e.what());
        }
    });
    std::ostringstream os;
    os << verified.load()
       << " graphs synchronized onto cyclic powers of their minimal factors"
       << " (exhaustive colouring fallback used " << exhaustive_fallbacks.load() << " times)";
    detail = os.str() + failures.brief();
    return failures.empty() && verified.load() > 1000;
}

// ---------------------------------------------------------------------------
// Criterion 3: uniqueness of the forced state map. 100 shuffled edge orders
// per corpus graph; exhaustive enumeration of valid state maps on <= 5
// states.
// ---------------------------------------------------------------------------
bool criterion3(std::string& detail) {
    const auto corpus = corpus::acceptance_corpus();
    Failures failures;
    std::atomic<long long> runs{0};
    parallel_for(corpus.size(), [&](std::size_t i) {
        const auto& [name, g] = corpus[i];
        try {
            MinimalFactor mf = minimal_factor(g);
            GraphHom base = construct_right_resolver(mf);
            for (std::uint64_t seed = 0; seed < 100; ++seed) {
                GraphHom other = construct_right_resolver(mf, shuffled_edge_orders(mf, seed));
                if (!check_right_resolver(other).ok) throw Error("shuffled run not right-resolving");
                if (other.state_map != base.state_map) throw Error("state map differs");
                ++runs;
            }
            if (g->num_states() <= 5) {
                auto maps = oracles::resolver_state_maps(g, mf.graph);
                if (maps.empty()) throw Error("no valid state map found");
                for (const auto& m : maps)
                    if (m != mf.sigma) throw Error("exhaustive enumeration found a second state map");
            }
        } catch (const std::exception& e) {
            failures.add(name + ": " + e.what());
        }
    });
    detail = std::to_string(runs.load()) + " shuffled runs, exact state-map equality" +
             failures.brief();
    return failures.empty();
}

// Resolvers generated from a graph for the oracle comparisons: the canonical
// construction, shuffled variants, colouring resolvers when M(G) is a cycle
// of bunches, and in-amalgamation rewirings when available.
std::vector<GraphHom> corpus_resolvers(const GraphPtr& g) {
    std::vector<GraphHom> out;
    MinimalFactor mf = minimal_factor(g);
    out.push_back(construct_right_resolver(mf));
    for (std::uint64_t seed = 1; seed <= 3; ++seed)
        out.push_back(construct_right_resolver(mf, shuffled_edge_orders(mf, seed)));
    if (auto mcob = as_cycle_of_bunches(mf.graph)) {
        std::mt19937_64 rng(5);
        for (int v = 0; v < 2; ++v) {
            std::vector<int> zero(g->num_states());
            for (int s = 0; s < g->num_states(); ++s)
                zero[s] = static_cast<int>(rng() % g->out_degree(s));
            out.push_back(colouring_resolver(mf, TotalOrderColouring::from_zero_edges(g, zero)));
        }
    }
    if (auto amalg = in_amalgamation_stable_pair(out.front())) out.push_back(amalg->rewired);
    return out;
}

// ---------------------------------------------------------------------------
// Criterion 4: the stability construction equals the definition-based oracle
// on all corpus resolvers for graphs <= 8 states. Exact equality.
// ---------------------------------------------------------------------------
bool criterion4(std::string& detail) {
    const auto corpus = corpus_with_max_states(8);
    Failures failures;
    std::atomic<long long> checked{0};
    parallel_for(corpus.size(), [&](std::size_t i) {
        const auto& [name, g] = corpus[i];
        try {
            for (const GraphHom& phi : corpus_resolvers(g)) {
                if (!stability_relation(phi).partition.same_blocks(oracles::stability_oracle(phi)))
                    throw Error("relation differs from the oracle");
                ++checked;
            }
        } catch (const std::exception& e) {
            failures.add(name + ": " + e.what());
        }
    });
    detail = std::to_string(checked.load()) + " resolvers against the reachability oracle" +
             failures.brief();
    return failures.empty() && checked.load() > 0;
}

// ---------------------------------------------------------------------------
// Criterion 5: the four structural statements about stability under
// composition, over all composable corpus pairs with <= 6-state domains.
// ---------------------------------------------------------------------------
bool criterion5(std::string& detail) {
    const auto corpus = corpus_with_max_states(6);
    Failures failures;
    std::atomic<long long> pairs{0};
    parallel_for(corpus.size(), [&](std::size_t i) {
        const auto& [name, g] = corpus[i];
        try {
            MinimalFactor mf = minimal_factor(g);
            ResolverClassEnumerator en(g, mf.graph, mf.sigma);
            int classes = 0;
            while (auto phi = en.next()) {
                if (++classes > 200) break;  // deterministic cap per graph
                StabilityRelation sphi = stability_relation(*phi);
                // (2) quotient by the stability relation itself.
                if (!sphi.partition.is_discrete()) {
                    QuotientResult qr = quotient_by_congruence(*phi, sphi.partition);
                    if (!is_synchronizing(qr.quotient_map))
                        throw Error("(2) quotient map not synchronizing");
                    if (!stability_relation(qr.induced).partition.is_discrete())
                        throw Error("(2) induced stability not trivial");
                }
                for (const auto& assign : oracles::all_partitions(g->num_states())) {
                    Partition p = Partition::from_block_assignment(g, assign);
                    if (p.is_discrete()) continue;
                    if (!is_congruence(p, *phi)) continue;
                    QuotientResult qr = quotient_by_congruence(*phi, p);
                    ++pairs;
                    StabilityRelation spsi = stability_relation(qr.quotient_map);
                    for (int a = 0; a < g->num_states(); ++a)
                        for (int b = 0; b < g->num_states(); ++b) {
                            bool same_psi =
                                spsi.partition.block_of[a] == spsi.partition.block_of[b];
                            bool same_phi =
                                sphi.partition.block_of[a] == sphi.partition.block_of[b];
                            bool same_fiber =
                                qr.quotient_map.state_map[a] == qr.quotient_map.state_map[b];
                            if (same_psi != (same_phi && same_fiber))
                                throw Error("(1) class/fiber intersection mismatch");
                        }
                    bool s_phi = is_synchronizing(*phi);
                    bool s_psi = is_synchronizing(qr.quotient_map);
                    bool s_delta = is_synchronizing(qr.induced);
                    if (s_phi != (s_psi && s_delta)) throw Error("(4) composition mismatch");
                    if (stability_relation(qr.induced).partition.is_discrete() &&
                        !spsi.partition.same_blocks(sphi.partition))
                        throw Error("(3) trivial induced stability but relations differ");
                }
            }
        } catch (const std::exception& e) {
            failures.add(name + ": " + e.what());
        }
    });
    detail = std::to_string(pairs.load()) + " composable pairs checked" + failures.brief();
    return failures.empty() && pairs.load() > 0;
}

// ---------------------------------------------------------------------------
// Criterion 6: on almost bunchy corpus graphs <= 6 states, exhaustive chains
// of synchronizing quotients confirm G/~_G is the unique minimal
// synchronizing factor up to isomorphism.
// ---------------------------------------------------------------------------
bool criterion6(std::string& detail) {
    std::vector<corpus::Named> inputs;
    for (const auto& entry : corpus_with_max_states(6))
        if (classify(entry.graph).almost_bunchy) inputs.push_back(entry);
    Failures failures;
    std::atomic<long long> confirmed{0};
    parallel_for(inputs.size(), [&](std::size_t i) {
        const auto& [name, g] = inputs[i];
        try {
            GraphPtr og = og_almost_bunchy(g).graph;
            auto factors = oracles::all_sync_factors(g);
            std::vector<GraphPtr> minimal;
            for (const auto& h : factors)
                if (oracles::is_sync_minimal(h)) minimal.push_back(h);
            if (minimal.empty()) throw Error("no minimal synchronizing factor found");
            for (const auto& h : minimal)
                if (!isomorphic(h, og, 16)) throw Error("a minimal factor differs from G/~_G");
            ++confirmed;
        } catch (const std::exception& e) {
            failures.add(name + ": " + e.what());
        }
    });
    detail = std::to_string(confirmed.load()) + " almost bunchy graphs confirmed" +
             failures.brief();
    return failures.empty() && confirmed.load() > 0;
}

// ---------------------------------------------------------------------------
// Criterion 7: the stable-pair trichotomy. For every strongly connected
// corpus graph with M(G) a cycle of bunches that is not one itself, either
// two distinct bunches share their target or some total order colouring has a
// unique tallest tree (exhaustive over 0-edge choices, <= 6 states); and
// every unique-tallest-tree colouring yields nontrivial stability.
// ---------------------------------------------------------------------------
bool criterion7(std::string& detail) {
    std::vector<corpus::Named> inputs;
    for (const auto& entry : corpus_with_max_states(6)) {
        if (!is_strongly_connected(*entry.graph)) continue;
        if (as_cycle_of_bunches(entry.graph)) continue;
        if (!as_cycle_of_bunches(minimal_factor(entry.graph).graph)) continue;
        inputs.push_back(entry);
    }
    Failures failures;
    std::atomic<long long> utt_checked{0};
    parallel_for(inputs.size(), [&](std::size_t i) {
        const auto& [name, g] = inputs[i];
        try {
            MinimalFactor mf = minimal_factor(g);
            auto mcob = as_cycle_of_bunches(mf.graph);
            // Case 2: two distinct bunches with the same single follower.
            bool case2 = false;
            for (int a = 0; a < g->num_states() && !case2; ++a)
                for (int b = a + 1; b < g->num_states() && !case2; ++b) {
                    auto fa = g->followers(a);
                    auto fb = g->followers(b);
                    if (fa.size() == 1 && fb.size() == 1 && fa[0] == fb[0]) case2 = true;
                }
            // Case 3: exhaustive search over 0-edge assignments.
            bool case3 = false;
            std::vector<int> zero(g->num_states(), 0);
            while (true) {
                auto c = TotalOrderColouring::from_zero_edges(g, zero);
                TreeAnalysis ta = tree_analysis(mf, *mcob, c);
                if (ta.unique_tallest_at) {
                    case3 = true;
                    GraphHom phi = colouring_resolver(mf, c);
                    if (!stability_relation(phi).nontrivial())
                        throw Error("unique tallest tree with trivial stability");
                    ++utt_checked;
                }
                int s = 0;
                for (; s < g->num_states(); ++s) {
                    if (++zero[s] < g->out_degree(s)) break;
                    zero[s] = 0;
                }
                if (s == g->num_states()) break;
            }
            if (!case2 && !case3) throw Error("no trichotomy case holds");
        } catch (const std::exception& e) {
            failures.add(name + ": " + e.what());
        }
    });
    detail = std::to_string(inputs.size()) + " graphs, " + std::to_string(utt_checked.load()) +
             " unique-tallest-tree colourings verified" + failures.brief();
    return failures.empty() && utt_checked.load() > 0;
}

// ---------------------------------------------------------------------------
// Criterion 8: maximal bunchy factor. B is idempotent and bunchy; on graphs
// <= 5 states every enumerated bunchy right-resolving factor admits a
// right-resolver from B(G) (exhaustive search over state maps).
// ---------------------------------------------------------------------------
bool criterion8(std::string& detail) {
    const auto corpus = corpus_with_max_states(5);
    Failures failures;
    std::atomic<long long> factors_checked{0};
    parallel_for(corpus.size(), [&](std::size_t i) {
        const auto& [name, g] = corpus[i];
        try {
            MaxBunchyFactor b = max_bunchy_factor(g);
            if (!classify(b.graph).bunchy) throw Error("B(G) not bunchy");
            if (!check_right_resolver(b.quotient_map).ok) throw Error("quotient map invalid");
            if (!isomorphic(max_bunchy_factor(b.graph).graph, b.graph, 16))
                throw Error("B not idempotent");
            for (const auto& assign : oracles::all_partitions(g->num_states())) {
                auto rq = oracles::row_quotient(g, assign);
                if (!rq) continue;
                if (!classify(rq->graph).bunchy) continue;
                if (!oracles::admits_right_resolver(b.graph, rq->graph))
                    throw Error("a bunchy factor does not factor through B(G)");
                ++factors_checked;
            }
        } catch (const std::exception& e) {
            failures.add(name + ": " + e.what());
        }
    });
    detail = std::to_string(factors_checked.load()) + " bunchy factors factored through B(G)" +
             failures.brief();
    return failures.empty() && factors_checked.load() > 0;
}

// ---------------------------------------------------------------------------
// Criterion 9: the bunchy decision procedure agrees with the direct
// construction O(G_i) = G_i/~_{G_i} plus isomorphism search, on all bunchy
// corpus pairs <= 6 states.
// ---------------------------------------------------------------------------
bool criterion9(std::string& detail) {
    std::vector<GraphPtr> bunchies;
    for (const auto& entry : corpus_with_max_states(6))
        if (is_strongly_connected(*entry.graph) && classify(entry.graph).bunchy)
            bunchies.push_back(entry.graph);
    Failures failures;
    std::atomic<long long> pairs{0};
    parallel_for(bunchies.size(), [&](std::size_t i) {
        try {
            GraphPtr oi = og_almost_bunchy(bunchies[i]).graph;
            for (std::size_t j = i; j < bunchies.size(); ++j) {
                bool expect = isomorphic(oi, og_almost_bunchy(bunchies[j]).graph, 16);
                OgIsoDecision d = decide_og_iso_bunchy(bunchies[i], bunchies[j]);
                if (d.isomorphic != expect) throw Error("decision disagrees with the oracle");
                ++pairs;
            }
        } catch (const std::exception& e) {
            failures.add("pair starting at #" + std::to_string(i) + ": " + e.what());
        }
    });
    detail = std::to_string(pairs.load()) + " bunchy pairs decided (" +
             std::to_string(bunchies.size()) + " graphs)" + failures.brief();
    return failures.empty() && pairs.load() > 0;
}

// ---------------------------------------------------------------------------
// Criterion 10: the universal property verifies on corpus instances of bunchy
// H1, H2 with a common extension <= 6 states.
// ---------------------------------------------------------------------------
bool criterion10(std::string& detail) {
    const auto corpus = corpus_with_max_states(6);
    Failures failures;
    std::atomic<long long> instances{0};
    parallel_for(corpus.size(), [&](std::size_t i) {
        const auto& [name, g] = corpus[i];
        try {
            MinimalFactor mf_g = minimal_factor(g);
            // Bunchy quotients of g with their canonical resolvers.
            std::vector<oracles::RowQuotient> bunchy_quotients;
            for (const auto& assign : oracles::all_partitions(g->num_states())) {
                auto rq = oracles::row_quotient(g, assign);
                if (!rq || !classify(rq->graph).bunchy) continue;
                bunchy_quotients.push_back(std::move(*rq));
                if (bunchy_quotients.size() >= 5) break;
            }
            auto align_to_mg = [&](const GraphPtr& h) {
                MinimalFactor mf_h = minimal_factor(h);
                if (mf_h.graph->num_states() != mf_g.graph->num_states())
                    throw Error("factor has a different minimal factor");
                std::vector<int> sm(mf_h.graph->num_states());
                std::iota(sm.begin(), sm.end(), 0);
                std::vector<int> em(mf_h.graph->num_edges(), -1);
                for (int a = 0; a < mf_h.graph->num_states(); ++a)
                    for (int bb : mf_h.graph->followers(a)) {
                        auto from = mf_h.graph->edges_between(a, bb);
                        auto to = mf_g.graph->edges_between(a, bb);
                        if (from.size() != to.size())
                            throw Error("factor has a different minimal factor");
                        for (std::size_t t = 0; t < from.size(); ++t) em[from[t]] = to[t];
                    }
                return compose(GraphHom::make(mf_h.graph, mf_g.graph, em, sm),
                               construct_right_resolver(mf_h));
            };
            for (std::size_t a = 0; a < bunchy_quotients.size(); ++a)
                for (std::size_t b = a; b < bunchy_quotients.size(); ++b) {
                    GraphHom psi1 = align_to_mg(bunchy_quotients[a].graph);
                    GraphHom psi2 = align_to_mg(bunchy_quotients[b].graph);
                    auto w = verify_universal_property(bunchy_quotients[a].resolver,
                                                       bunchy_quotients[b].resolver, psi1, psi2);
                    if (!classify(w.c).bunchy) throw Error("witness C not bunchy");
                    ++instances;
                }
        } catch (const std::exception& e) {
            failures.add(name + ": " + e.what());
        }
    });
    detail = std::to_string(instances.load()) + " instances verified" + failures.brief();
    return failures.empty() && instances.load() > 0;
}

struct Criterion {
    int number;
    const char* name;
    bool (*fn)(std::string&);
};

const Criterion kCriteria[] = {
    {1, "road colouring (aperiodic constant out-degree corpus)", criterion1},
    {2, "periodic and generalized road colouring", criterion2},
    {3, "uniqueness of the forced state map", criterion3},
    {4, "stability relation vs definition oracle", criterion4},
    {5, "stability under composition (four parts)", criterion5},
    {6, "unique minimal synchronizing factor, almost bunchy", criterion6},
    {7, "stable-pair trichotomy and unique tallest trees", criterion7},
    {8, "maximal bunchy factor: idempotent, bunchy, maximal", criterion8},
    {9, "bunchy decision procedure vs direct construction", criterion9},
    {10, "universal property of the fiber product", criterion10},
};

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> to_run;
    if (argc > 1) {
        for (int i = 1; i < argc; ++i) to_run.push_back(std::atoi(argv[i]));
    } else {
        for (const auto& c : kCriteria) to_run.push_back(c.number);
    }
    bool all_pass = true;
    for (int number : to_run) {
        const Criterion* crit = nullptr;
        for (const auto& c : kCriteria)
            if (c.number == number) crit = &c;
        if (!crit) {
            std::cerr << "unknown criterion " << number << "\n";
            return 2;
        }
        auto t0 = std::chrono::steady_clock::now();
        std::string detail;
        bool pass = false;
        try {
            pass = crit->fn(detail);
        } catch (const std::exception& e) {
            detail = std::string("exception: ") + e.what();
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %2d [%s]: %s (%.1fs; %s)\n", crit->number, crit->name,
                    pass ? "PASS" : "FAIL", secs, detail.c_str());
        std::fflush(stdout);
        all_pass = all_pass && pass;
    }
    return all_pass ? 0 : 1;
}
