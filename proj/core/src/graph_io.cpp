#include "rrhom/graph_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rrhom/hom.hpp"

namespace rrhom {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
    std::vector<std::string> toks;
    std::istringstream is(line);
    std::string t;
    while (is >> t) toks.push_back(t);
    return toks;
}

GraphPtr parse_graph_json(const std::string& text, bool allow_sinks) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
    }
    if (!j.is_object() || !j.contains("states") || !j.contains("edges"))
        throw ParseError("graph JSON must be an object with 'states' and 'edges'", 0);
    try {
        std::vector<std::string> states;
        for (const auto& s : j.at("states")) states.push_back(s.get<std::string>());
        std::vector<std::tuple<std::string, std::string, std::string>> edges;
        for (const auto& e : j.at("edges")) {
            if (!e.is_array() || e.size() != 3)
                throw ParseError("each edge must be a [id, src, dst] triple", 0);
            edges.emplace_back(e[0].get<std::string>(), e[1].get<std::string>(),
                               e[2].get<std::string>());
        }
        return MultiGraph::make(std::move(states), std::move(edges), allow_sinks);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("graph JSON: ") + e.what(), 0);
    }
}

}  // namespace

GraphPtr parse_graph(const std::string& text, bool allow_sinks) {
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{')
        return parse_graph_json(text, allow_sinks);

    std::vector<std::string> states;
    std::vector<std::tuple<std::string, std::string, std::string>> edges;
    bool in_edges = false;
    std::istringstream is(text);
    std::string raw;
    int line_no = 0;
    while (std::getline(is, raw)) {
        ++line_no;
        if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
        auto toks = tokenize(raw);
        if (toks.empty()) continue;
        try {
            if (toks[0] == "states") {
                if (in_edges) throw ParseError("'states' line after 'edges'", line_no);
                states.insert(states.end(), toks.begin() + 1, toks.end());
            } else if (toks[0] == "edges") {
                in_edges = true;
                if ((toks.size() - 1) % 3 != 0)
                    throw ParseError("edge triples must be '<edge-id> <src> <dst>'", line_no);
                for (size_t i = 1; i + 2 < toks.size() + 1; i += 3)
                    edges.emplace_back(toks[i], toks[i + 1], toks[i + 2]);
            } else if (in_edges) {
                if (toks.size() % 3 != 0)
                    throw ParseError("edge triples must be '<edge-id> <src> <dst>'", line_no);
                for (size_t i = 0; i + 2 < toks.size() + 1; i += 3)
                    edges.emplace_back(toks[i], toks[i + 1], toks[i + 2]);
            } else {
                throw ParseError("expected a 'states' or 'edges' line, got '" + toks[0] + "'",
                                 line_no);
            }
        } catch (const ParseError&) {
            throw;
        } catch (const ValidationError& e) {
            throw ParseError(e.what(), line_no);
        }
    }
    try {
        return MultiGraph::make(std::move(states), std::move(edges), allow_sinks);
    } catch (const ValidationError& e) {
        throw ParseError(e.what(), line_no);
    }
}

GraphPtr load_graph_file(const std::string& path, bool allow_sinks) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open graph file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_graph(ss.str(), allow_sinks);
}

std::string graph_to_text(const MultiGraph& g) {
    std::ostringstream os;
    os << "states";
    for (int i = 0; i < g.num_states(); ++i) os << ' ' << g.state_id(i);
    os << "\nedges\n";
    for (const Edge& e : g.edges())
        os << e.id << ' ' << g.state_id(e.src) << ' ' << g.state_id(e.dst) << '\n';
    return os.str();
}

std::string graph_to_json(const MultiGraph& g) {
    nlohmann::json j;
    j["states"] = nlohmann::json::array();
    for (int i = 0; i < g.num_states(); ++i) j["states"].push_back(g.state_id(i));
    j["edges"] = nlohmann::json::array();
    for (const Edge& e : g.edges())
        j["edges"].push_back({e.id, g.state_id(e.src), g.state_id(e.dst)});
    return j.dump(2);
}

namespace {

GraphHom hom_from_id_maps(GraphPtr domain, GraphPtr codomain,
                          const std::vector<std::pair<std::string, std::string>>& state_pairs,
                          const std::vector<std::pair<std::string, std::string>>& edge_pairs) {
    std::vector<int> sm(domain->num_states(), -1), em(domain->num_edges(), -1);
    for (const auto& [from, to] : state_pairs) {
        auto fi = domain->find_state(from);
        auto ti = codomain->find_state(to);
        if (!fi) throw ParseError("unknown domain state '" + from + "'", 0);
        if (!ti) throw ParseError("unknown codomain state '" + to + "'", 0);
        if (sm[*fi] != -1) throw ParseError("state '" + from + "' mapped twice", 0);
        sm[*fi] = *ti;
    }
    for (const auto& [from, to] : edge_pairs) {
        auto fi = domain->find_edge(from);
        auto ti = codomain->find_edge(to);
        if (!fi) throw ParseError("unknown domain edge '" + from + "'", 0);
        if (!ti) throw ParseError("unknown codomain edge '" + to + "'", 0);
        if (em[*fi] != -1) throw ParseError("edge '" + from + "' mapped twice", 0);
        em[*fi] = *ti;
    }
    for (int s = 0; s < domain->num_states(); ++s)
        if (sm[s] == -1)
            throw ParseError("state '" + domain->state_id(s) + "' is not mapped", 0);
    for (int e = 0; e < domain->num_edges(); ++e)
        if (em[e] == -1) throw ParseError("edge '" + domain->edge(e).id + "' is not mapped", 0);
    return GraphHom::make(std::move(domain), std::move(codomain), std::move(em), std::move(sm));
}

}  // namespace

GraphHom parse_hom(const std::string& text, GraphPtr domain, GraphPtr codomain) {
    std::vector<std::pair<std::string, std::string>> state_pairs, edge_pairs;
    size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text[first] == '{') {
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), 0);
        }
        if (!domain && j.contains("domain")) domain = parse_graph(j.at("domain").dump());
        if (!codomain && j.contains("codomain")) codomain = parse_graph(j.at("codomain").dump());
        if (!j.contains("states") || !j.contains("edges"))
            throw ParseError("hom JSON must contain 'states' and 'edges' maps", 0);
        try {
            for (auto& [k, v] : j.at("states").items())
                state_pairs.push_back({k, v.get<std::string>()});
            for (auto& [k, v] : j.at("edges").items())
                edge_pairs.push_back({k, v.get<std::string>()});
        } catch (const nlohmann::json::exception& e) {
            throw ParseError(std::string("hom JSON: ") + e.what(), 0);
        }
    } else {
        std::istringstream is(text);
        std::string raw;
        int line_no = 0;
        while (std::getline(is, raw)) {
            ++line_no;
            if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
            auto toks = tokenize(raw);
            if (toks.empty()) continue;
            if (toks.size() != 4 || toks[2] != "->" || (toks[0] != "state" && toks[0] != "edge"))
                throw ParseError("expected 'state <src> -> <dst>' or 'edge <src> -> <dst>'",
                                 line_no);
            if (toks[0] == "state")
                state_pairs.push_back({toks[1], toks[3]});
            else
                edge_pairs.push_back({toks[1], toks[3]});
        }
    }
    if (!domain || !codomain)
        throw ParseError("homomorphism needs both graphs (embedded in JSON or supplied)", 0);
    return hom_from_id_maps(std::move(domain), std::move(codomain), state_pairs, edge_pairs);
}

GraphHom load_hom_file(const std::string& path, GraphPtr domain, GraphPtr codomain) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open hom file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_hom(ss.str(), std::move(domain), std::move(codomain));
}

std::string hom_to_text(const GraphHom& h) {
    std::ostringstream os;
    for (int s = 0; s < h.domain->num_states(); ++s)
        os << "state " << h.domain->state_id(s) << " -> "
           << h.codomain->state_id(h.state_map[s]) << '\n';
    for (int e = 0; e < h.domain->num_edges(); ++e)
        os << "edge " << h.domain->edge(e).id << " -> " << h.codomain->edge(h.edge_map[e]).id
           << '\n';
    return os.str();
}

std::string hom_to_json(const GraphHom& h) {
    nlohmann::json j;
    j["domain"] = nlohmann::json::parse(graph_to_json(*h.domain));
    j["codomain"] = nlohmann::json::parse(graph_to_json(*h.codomain));
    j["states"] = nlohmann::json::object();
    j["edges"] = nlohmann::json::object();
    for (int s = 0; s < h.domain->num_states(); ++s)
        j["states"][h.domain->state_id(s)] = h.codomain->state_id(h.state_map[s]);
    for (int e = 0; e < h.domain->num_edges(); ++e)
        j["edges"][h.domain->edge(e).id] = h.codomain->edge(h.edge_map[e]).id;
    return j.dump(2);
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out;
}

}  // namespace

std::string graph_to_dot(const MultiGraph& g, const GraphHom* colours) {
    std::ostringstream os;
    os << "digraph {\n";
    for (int i = 0; i < g.num_states(); ++i) os << "  \"" << dot_escape(g.state_id(i)) << "\";\n";
    for (int e = 0; e < g.num_edges(); ++e) {
        const Edge& ed = g.edge(e);
        os << "  \"" << dot_escape(g.state_id(ed.src)) << "\" -> \""
           << dot_escape(g.state_id(ed.dst)) << "\" [label=\"" << dot_escape(ed.id);
        if (colours)
            os << ":" << dot_escape(colours->codomain->edge(colours->edge_map[e]).id);
        os << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

}  // namespace rrhom
