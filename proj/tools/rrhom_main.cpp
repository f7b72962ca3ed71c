// Command-line front end: wires the library's constructions together behind
// the subcommands documented in the README, with machine-readable run
// reports. Every verdict in a report is recomputed on the produced artifact,
// not cached from intermediate state.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rrhom/bunchy.hpp"
#include "rrhom/graph_io.hpp"
#include "rrhom/pipeline.hpp"

using namespace rrhom;
using nlohmann::json;

namespace {

constexpr int kExitYes = 0;
constexpr int kExitNo = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitUsage = 64;
constexpr int kExitData = 65;
constexpr int kExitVerification = 70;

std::string fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomic(const std::string& path, const std::string& content) {
    std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write '" + tmp + "'");
        out << content;
    }
    std::filesystem::rename(tmp, path);
}

struct RunReport {
    std::string command;
    json inputs = json::array();
    json outputs = json::array();
    json verification = json::object();
    json budget = json::object();
    std::uint64_t seed = 0;
    double elapsed_ms = 0;

    void add_input(const std::string& path, const std::string& content) {
        inputs.push_back({{"path", path}, {"hash", fnv1a64(content)}});
    }
    void add_output(const std::string& path, const std::string& kind) {
        outputs.push_back({{"path", path}, {"kind", kind}});
    }
    json to_json() const {
        return json{{"command", command}, {"inputs", inputs},       {"outputs", outputs},
                    {"verification", verification}, {"budget", budget}, {"seed", seed},
                    {"elapsed_ms", elapsed_ms}};
    }
};

struct Ctx {
    bool json_out = false;
    std::uint64_t seed = 0;
    bool allow_sinks = false;
    RunReport report;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    GraphPtr load(const std::string& path) {
        std::string content = slurp(path);
        report.add_input(path, content);
        return parse_graph(content, allow_sinks);
    }
    GraphHom load_hom(const std::string& path, GraphPtr domain, GraphPtr codomain) {
        std::string content = slurp(path);
        report.add_input(path, content);
        return parse_hom(content, std::move(domain), std::move(codomain));
    }
    void emit_graph(const std::string& path, const MultiGraph& g) {
        if (path.empty()) return;
        write_atomic(path, graph_to_json(g));
        report.add_output(path, "graph");
    }
    void emit_hom(const std::string& path, const GraphHom& h) {
        if (path.empty()) return;
        write_atomic(path, hom_to_json(h));
        report.add_output(path, "hom");
    }
    void emit_dot(const std::string& path, const MultiGraph& g, const GraphHom* colours = nullptr) {
        if (path.empty()) return;
        write_atomic(path, graph_to_dot(g, colours));
        report.add_output(path, "dot");
    }
    int finish(int code, const std::string& text_summary) {
        report.elapsed_ms =
            std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0)
                .count();
        report.seed = seed;
        if (json_out)
            std::cout << report.to_json().dump(2) << "\n";
        else
            std::cout << text_summary << "\n";
        return code;
    }
};

json blocks_to_json(const Partition& p) {
    json out = json::array();
    for (const auto& b : p.blocks) {
        json blk = json::array();
        for (int s : b) blk.push_back(p.graph->state_id(s));
        out.push_back(blk);
    }
    return out;
}

json word_to_json(const GraphPtr& h, const std::vector<int>& word) {
    json out = json::array();
    for (int e : word) out.push_back(h->edge(e).id);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"right-resolving graph homomorphisms: minimal factors, stability, "
                 "synchronizers, bunchy factors, road colourings"};
    app.require_subcommand(1);
    Ctx ctx;
    app.add_flag("--json", ctx.json_out, "emit the run report as JSON on stdout");
    app.add_option("--seed", ctx.seed, "seed for randomized search orders");
    app.add_flag("--allow-sinks", ctx.allow_sinks, "accept graphs with sink states");

    std::string g_path, g2_path, hom_path, hom2_path, codomain_path;
    std::string out_path, hom_out_path, proj1_out, proj2_out, dot_path, resolver_out;
    long long budget = 200000;
    int k = 1;
    bool flag_bunchy = false, flag_bfc = false, flag_images = false;

    auto* minimize = app.add_subcommand("minimize", "minimal right-resolving factor M(G)");
    minimize->add_option("graph", g_path)->required();
    minimize->add_option("--out", out_path, "write M(G)");
    minimize->add_option("--resolver-out", resolver_out, "write a resolver G -> M(G)");
    minimize->add_option("--dot", dot_path, "write M(G) as DOT");

    auto* road = app.add_subcommand("road-color",
                                    "synchronizer onto O_{D,p} for constant out-degree input");
    road->add_option("graph", g_path)->required();
    road->add_option("--out", hom_out_path, "write the synchronizer");
    road->add_option("--budget", budget);
    road->add_option("--dot", dot_path, "write the coloured graph as DOT");

    auto* syncf = app.add_subcommand("sync-factor",
                                     "synchronizer onto O_{M(G),q} when M(G) is a cycle of bunches");
    syncf->add_option("graph", g_path)->required();
    syncf->add_option("--out", hom_out_path, "write the synchronizer");
    syncf->add_option("--budget", budget);
    syncf->add_option("--dot", dot_path);

    auto* stab = app.add_subcommand("stability", "stability relation of a right-resolver");
    stab->add_option("graph", g_path)->required();
    stab->add_option("hom", hom_path)->required();
    stab->add_option("--codomain", codomain_path, "codomain graph for text-format homs");
    stab->add_flag("--images", flag_images, "include brute-force minimal images");

    auto* scheck = app.add_subcommand("sync-check", "is the map synchronizing? exit 0/1");
    scheck->add_option("graph", g_path)->required();
    scheck->add_option("hom", hom_path)->required();
    scheck->add_option("--codomain", codomain_path);

    auto* bunchy = app.add_subcommand("bunchy", "bunchiness classification report");
    bunchy->add_option("graph", g_path)->required();

    auto* bg = app.add_subcommand("bg", "maximal bunchy right-resolving factor B(G)");
    bg->add_option("graph", g_path)->required();
    bg->add_option("--out", out_path, "write B(G)");
    bg->add_option("--hom-out", hom_out_path, "write the quotient resolver");
    bg->add_option("--dot", dot_path);

    auto* og = app.add_subcommand("og", "minimal synchronizing factor of an almost bunchy graph");
    og->add_option("graph", g_path)->required();
    og->add_option("--out", out_path, "write O(G)");
    og->add_option("--hom-out", hom_out_path, "write the synchronizer");
    og->add_option("--dot", dot_path);

    auto* dog = app.add_subcommand("decide-og", "decide O(G1) = O(G2); exit 0 yes / 1 no");
    dog->add_option("g1", g_path)->required();
    dog->add_option("g2", g2_path)->required();
    dog->add_flag("--bunchy", flag_bunchy, "inputs are bunchy; unconditional decision");
    dog->add_flag("--bfc", flag_bfc, "compare B(G_i); conditional on the bunchy factor conjecture");

    auto* probe = app.add_subcommand("probe-bfc",
                                     "search all resolver classes G -> M(G) for nontrivial "
                                     "stability; exit 0 witness / 1 exhaustive negative / 2 budget");
    probe->add_option("graph", g_path)->required();
    probe->add_option("--budget", budget);

    auto* fiber = app.add_subcommand("fiber", "fiber product of two right-resolvers");
    fiber->add_option("hom1", hom_path)->required();
    fiber->add_option("hom2", hom2_path)->required();
    fiber->add_option("--out", out_path, "write the product graph");
    fiber->add_option("--proj1-out", proj1_out);
    fiber->add_option("--proj2-out", proj2_out);
    fiber->add_option("--dot", dot_path);

    auto* higher = app.add_subcommand("higher-edge", "k-th higher edge graph");
    higher->add_option("graph", g_path)->required();
    higher->add_option("-k,--k", k, "path length")->required();
    higher->add_option("--out", out_path);
    higher->add_option("--dot", dot_path);

    auto* dot = app.add_subcommand("export-dot", "DOT export of a graph (optionally coloured)");
    dot->add_option("graph", g_path)->required();
    dot->add_option("--hom", hom_path, "resolver supplying colour labels");
    dot->add_option("--out", out_path)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        ctx.report.command = app.get_subcommands().front()->get_name();
        ctx.report.budget["max_candidates"] = budget;

        if (*minimize) {
            GraphPtr g = ctx.load(g_path);
            MinimalFactor mf = minimal_factor(g);
            GraphHom phi = construct_right_resolver(mf);
            ctx.report.verification["resolver_ok"] = check_right_resolver(phi).ok;
            json sigma = json::object();
            for (int s = 0; s < g->num_states(); ++s)
                sigma[g->state_id(s)] = mf.graph->state_id(mf.sigma[s]);
            ctx.report.verification["states"] = mf.graph->num_states();
            ctx.report.verification["sigma"] = sigma;
            json order = json::array();
            for (int b : mf.canonical_order) order.push_back(mf.graph->state_id(b));
            ctx.report.verification["canonical_order"] = order;
            ctx.emit_graph(out_path, *mf.graph);
            ctx.emit_hom(resolver_out, phi);
            ctx.emit_dot(dot_path, *mf.graph);
            return ctx.finish(kExitYes, "M(G) has " + std::to_string(mf.graph->num_states()) +
                                            " states and " +
                                            std::to_string(mf.graph->num_edges()) + " edges");
        }
        if (*road || *syncf) {
            GraphPtr g = ctx.load(g_path);
            if (*road) {
                int d = g->out_degree(0);
                for (int s = 0; s < g->num_states(); ++s)
                    if (g->out_degree(s) != d)
                        throw PreconditionError("road-color requires constant out-degree");
            }
            SearchBudget sb{budget, ctx.seed};
            SyncToCycle r = synchronize_to_cycle_of_bunches(g, sb);
            bool sync_ok = is_synchronizing(r.synchronizer);
            ctx.report.verification["is_synchronizing"] = sync_ok;
            ctx.report.verification["q"] = r.q;
            auto ocob = as_cycle_of_bunches(r.o_graph);
            ctx.report.verification["codomain_degree_sequence"] = ocob->degree_sequence;
            ctx.report.budget["candidates_tried"] = r.candidates_tried;
            ctx.report.budget["used_exhaustive"] = r.used_exhaustive;
            if (!sync_ok) return ctx.finish(kExitVerification, "verification failed");
            ctx.emit_hom(hom_out_path, r.synchronizer);
            ctx.emit_dot(dot_path, *g, &r.synchronizer);
            return ctx.finish(kExitYes,
                              "synchronizer onto a cycle of bunches with q = " +
                                  std::to_string(r.q) + "; is_synchronizing = true");
        }
        if (*stab || *scheck) {
            GraphPtr g = ctx.load(g_path);
            GraphPtr codomain;
            if (!codomain_path.empty()) codomain = ctx.load(codomain_path);
            GraphHom phi = ctx.load_hom(hom_path, g, codomain);
            require_right_resolver(phi, "stability");
            StabilityRelation rel = stability_relation(phi);
            bool sync = rel.partition.same_blocks(Partition::fibers_of(phi));
            ctx.report.verification["is_congruence"] = is_congruence(rel.partition, phi);
            ctx.report.verification["is_synchronizing"] = sync;
            ctx.report.verification["blocks"] = blocks_to_json(rel.partition);
            if (*scheck)
                return ctx.finish(sync ? kExitYes : kExitNo,
                                  sync ? "synchronizing" : "not synchronizing");
            if (flag_images) {
                json images = json::array();
                for (int i = 0; i < phi.codomain->num_states(); ++i)
                    for (const auto& im : minimal_images_bruteforce(phi, i)) {
                        json e = json::object();
                        e["base_state"] = phi.codomain->state_id(im.base_state);
                        e["word"] = word_to_json(phi.codomain, im.word);
                        json img = json::array();
                        for (int s : im.image) img.push_back(g->state_id(s));
                        e["image"] = img;
                        images.push_back(e);
                    }
                ctx.report.verification["minimal_images"] = images;
            }
            std::string summary = "stability relation has " +
                                  std::to_string(rel.partition.num_blocks()) + " blocks; " +
                                  (sync ? "synchronizing" : "not synchronizing");
            return ctx.finish(kExitYes, summary);
        }
        if (*bunchy) {
            GraphPtr g = ctx.load(g_path);
            BunchClassification c = classify(g);
            ctx.report.verification["bunchy"] = c.bunchy;
            ctx.report.verification["almost_bunchy"] = c.almost_bunchy;
            ctx.report.verification["cycle_of_bunches"] = c.cycle_of_bunches;
            if (c.non_almost_bunchy_witness) {
                auto& w = *c.non_almost_bunchy_witness;
                ctx.report.verification["witness"] = {
                    {"fiber_pair", {c.mf.graph->state_id(w.m_src), c.mf.graph->state_id(w.m_dst)}},
                    {"states", {g->state_id(w.state1), g->state_id(w.state2)}}};
            }
            std::string kind = c.bunchy ? (c.cycle_of_bunches ? "cycle of bunches" : "bunchy")
                                        : (c.almost_bunchy ? "almost bunchy" : "not almost bunchy");
            return ctx.finish(kExitYes, kind);
        }
        if (*bg) {
            GraphPtr g = ctx.load(g_path);
            MaxBunchyFactor b = max_bunchy_factor(g);
            ctx.report.verification["bunchy"] = classify(b.graph).bunchy;
            ctx.report.verification["resolver_ok"] = check_right_resolver(b.quotient_map).ok;
            ctx.report.verification["states"] = b.graph->num_states();
            ctx.emit_graph(out_path, *b.graph);
            ctx.emit_hom(hom_out_path, b.quotient_map);
            ctx.emit_dot(dot_path, *b.graph);
            return ctx.finish(kExitYes, "B(G) has " + std::to_string(b.graph->num_states()) +
                                            " states; bunchy = true");
        }
        if (*og) {
            GraphPtr g = ctx.load(g_path);
            MinimalSyncFactor o = og_almost_bunchy(g);
            ctx.report.verification["is_synchronizing"] = is_synchronizing(o.sync_map);
            if (o.bunchy_verified) ctx.report.verification["bunchy"] = *o.bunchy_verified;
            ctx.emit_graph(out_path, *o.graph);
            ctx.emit_hom(hom_out_path, o.sync_map);
            ctx.emit_dot(dot_path, *o.graph);
            return ctx.finish(kExitYes,
                              "O(G) has " + std::to_string(o.graph->num_states()) + " states");
        }
        if (*dog) {
            GraphPtr g1 = ctx.load(g_path);
            GraphPtr g2 = ctx.load(g2_path);
            if (flag_bunchy && flag_bfc)
                throw PreconditionError("choose one of --bunchy / --bfc");
            bool use_bunchy = flag_bunchy ||
                              (!flag_bfc && classify(g1).bunchy && classify(g2).bunchy);
            OgIsoDecision d =
                use_bunchy ? decide_og_iso_bunchy(g1, g2) : decide_og_iso_bfc(g1, g2);
            ctx.report.verification["isomorphic"] = d.isomorphic;
            ctx.report.verification["conditional_on_bunchy_factor_conjecture"] =
                d.conjecture_conditional;
            ctx.report.verification["detail"] = d.detail;
            std::string summary = std::string(d.isomorphic ? "O(G1) = O(G2)" : "O(G1) != O(G2)") +
                                  (d.conjecture_conditional
                                       ? " (conditional on the bunchy factor conjecture)"
                                       : "");
            return ctx.finish(d.isomorphic ? kExitYes : kExitNo, summary);
        }
        if (*probe) {
            GraphPtr g = ctx.load(g_path);
            SearchBudget sb{budget, ctx.seed};
            ConjectureProbe p = probe_bunchy_factor_conjecture(g, sb);
            ctx.report.verification["witness_found"] = p.witness_found;
            ctx.report.verification["exhausted"] = p.exhausted;
            ctx.report.verification["counterexample"] = p.counterexample;
            ctx.report.budget["classes_checked"] = p.classes_checked;
            if (p.class_count) ctx.report.budget["class_count"] = *p.class_count;
            if (p.witness_relation)
                ctx.report.verification["witness_blocks"] =
                    blocks_to_json(p.witness_relation->partition);
            if (p.witness_found)
                return ctx.finish(kExitYes, "witness resolver with nontrivial stability found");
            if (p.counterexample)
                return ctx.finish(kExitNo,
                                  "SEVERE: exhaustive enumeration found no nontrivial stability; "
                                  "this would contradict the bunchy factor conjecture");
            return ctx.finish(kExitInconclusive, "budget exhausted; inconclusive");
        }
        if (*fiber) {
            GraphHom psi1 = ctx.load_hom(hom_path, nullptr, nullptr);
            GraphHom psi2 = ctx.load_hom(hom2_path, nullptr, nullptr);
            FiberProduct fp = fiber_product(psi1, psi2);
            ctx.report.verification["proj1_right_resolving"] = check_right_resolver(fp.proj1).ok;
            ctx.report.verification["proj2_right_resolving"] = check_right_resolver(fp.proj2).ok;
            ctx.report.verification["states"] = fp.product->num_states();
            ctx.emit_graph(out_path, *fp.product);
            ctx.emit_hom(proj1_out, fp.proj1);
            ctx.emit_hom(proj2_out, fp.proj2);
            ctx.emit_dot(dot_path, *fp.product);
            return ctx.finish(kExitYes, "fiber product has " +
                                            std::to_string(fp.product->num_states()) + " states");
        }
        if (*higher) {
            GraphPtr g = ctx.load(g_path);
            GraphPtr hk = higher_edge_graph(g, k);
            ctx.report.verification["states"] = hk->num_states();
            ctx.report.verification["edges"] = hk->num_edges();
            ctx.emit_graph(out_path, *hk);
            ctx.emit_dot(dot_path, *hk);
            return ctx.finish(kExitYes, "higher edge graph has " +
                                            std::to_string(hk->num_states()) + " states and " +
                                            std::to_string(hk->num_edges()) + " edges");
        }
        if (*dot) {
            GraphPtr g = ctx.load(g_path);
            if (!hom_path.empty()) {
                GraphHom phi = ctx.load_hom(hom_path, g, nullptr);
                write_atomic(out_path, graph_to_dot(*g, &phi));
            } else {
                write_atomic(out_path, graph_to_dot(*g));
            }
            ctx.report.add_output(out_path, "dot");
            return ctx.finish(kExitYes, "wrote " + out_path);
        }
        return kExitUsage;
    } catch (const InternalCheckError& e) {
        std::cerr << "verification failure (library bug): " << e.what() << "\n";
        return kExitVerification;
    } catch (const BudgetError& e) {
        std::cerr << "inconclusive: " << e.what() << "\n";
        return kExitInconclusive;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    }
}
