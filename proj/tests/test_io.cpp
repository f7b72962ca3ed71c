#include <doctest.h>

#include <random>

#include "corpus.hpp"
#include "rrhom/graph_io.hpp"
#include "rrhom/minimal_factor.hpp"

using namespace rrhom;

TEST_CASE("text format parses the worked examples") {
    GraphPtr m2 = parse_graph("states 1\nedges e1 1 1 e2 1 1\n");
    CHECK(m2->num_states() == 1);
    CHECK(m2->num_edges() == 2);

    GraphPtr c3 = parse_graph("# a simple cycle\nstates a b c\nedges\nab a b\nbc b c\nca c a\n");
    CHECK(c3->num_states() == 3);
    for (int i = 0; i < 3; ++i) CHECK(c3->out_degree(i) == 1);
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_WITH_AS(parse_graph("states a\nedges\nbad a\n"),
                         doctest::Contains("line 3"), ParseError);
    CHECK_THROWS_AS(parse_graph("states a a\nedges\nl a a\n"), ParseError);      // duplicate id
    CHECK_THROWS_AS(parse_graph("states a\nedges\ne a b\n"), ParseError);        // dangling
    CHECK_THROWS_AS(parse_graph("states a\nedges\n"), ParseError);               // sink
    CHECK_THROWS_AS(parse_graph("states\nedges\n"), ParseError);                 // no states
    CHECK(parse_graph("states a\nedges\n", /*allow_sinks=*/true)->num_states() == 1);
}

TEST_CASE("malformed JSON is reported, not propagated") {
    CHECK_THROWS_AS(parse_graph("{\"states\": [1], \"edges\": []}"), ParseError);
    CHECK_THROWS_AS(parse_graph("{\"states\": [\"a\"]}"), ParseError);
    CHECK_THROWS_AS(parse_graph("{\"states\": [\"a\"], \"edges\": [[\"e\", \"a\"]]}"), ParseError);
    CHECK_THROWS_AS(parse_hom("{\"states\": {\"a\": 1}, \"edges\": {}}"), ParseError);
}

TEST_CASE("round-trips through both formats") {
    std::mt19937_64 rng(11);
    for (const auto& [name, g] : corpus::acceptance_corpus()) {
        if (rng() % 10 != 0) continue;
        CHECK(parse_graph(graph_to_text(*g))->same_structure(*g));
        CHECK(parse_graph(graph_to_json(*g))->same_structure(*g));
    }
}

TEST_CASE("hom serialization round-trips with embedded graphs") {
    GraphHom phi = corpus::g_merge_colouring();
    GraphHom back = parse_hom(hom_to_json(phi));
    CHECK(back.domain->same_structure(*phi.domain));
    CHECK(back.codomain->same_structure(*phi.codomain));
    CHECK(back.edge_map == phi.edge_map);
    CHECK(back.state_map == phi.state_map);

    SUBCASE("text format needs the graphs supplied") {
        std::string text = hom_to_text(phi);
        CHECK_THROWS_AS(parse_hom(text), ParseError);
        GraphHom again = parse_hom(text, phi.domain, phi.codomain);
        CHECK(again.edge_map == phi.edge_map);
    }
}

TEST_CASE("dot export") {
    GraphHom phi = corpus::g_merge_colouring();
    std::string plain = graph_to_dot(*phi.domain);
    CHECK(plain.find("\"1\" -> \"2\" [label=\"e2\"]") != std::string::npos);
    std::string coloured = graph_to_dot(*phi.domain, &phi);
    CHECK(coloured.find("label=\"e2:b\"") != std::string::npos);
}
