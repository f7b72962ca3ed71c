#pragma once

#include <iosfwd>
#include <string>

#include "rrhom/graph.hpp"

namespace rrhom {

struct GraphHom;

/// Parses the graph text format:
///
///     # comment
///     states A B C
///     edges
///     e1 A B
///     e2 B C
///
/// `states` lines may repeat; edge triples may also follow the `edges` keyword
/// on the same line. If the first non-space character is '{' the input is
/// parsed as the JSON equivalent {"states":[...],"edges":[[id,src,dst],...]}.
GraphPtr parse_graph(const std::string& text, bool allow_sinks = false);
GraphPtr load_graph_file(const std::string& path, bool allow_sinks = false);

std::string graph_to_text(const MultiGraph& g);
std::string graph_to_json(const MultiGraph& g);

/// DOT export, one DOT edge per multigraph edge labelled with the edge id.
/// When a resolver is given, each label also carries the codomain edge id.
std::string graph_to_dot(const MultiGraph& g, const GraphHom* colours = nullptr);

/// Parses a homomorphism. The text format is lines of
///
///     state <src-id> -> <dst-id>
///     edge <src-edge> -> <dst-edge>
///
/// and requires both graphs to be supplied. The JSON format is
/// {"states":{...},"edges":{...}} with optional embedded "domain" and
/// "codomain" graphs; supplied graphs take precedence and are validated
/// against the maps.
GraphHom parse_hom(const std::string& text, GraphPtr domain = nullptr,
                   GraphPtr codomain = nullptr);
GraphHom load_hom_file(const std::string& path, GraphPtr domain = nullptr,
                       GraphPtr codomain = nullptr);

std::string hom_to_text(const GraphHom& h);
/// JSON with the domain and codomain embedded, so the file round-trips on its
/// own.
std::string hom_to_json(const GraphHom& h);

}  // namespace rrhom
