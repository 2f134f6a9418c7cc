#include <catch2/catch_amalgamated.hpp>

#include "coref/treebank.hpp"
#include "coref/util.hpp"

using namespace coref;

namespace {
const std::string kFixtures = FIXTURE_DIR;

int count_category(const TreeNode& root, const std::string& cat) {
    int n = 0;
    visit_nodes(root, [&](const TreeNode& node, const NodePath&) {
        if (node.category == cat) ++n;
    });
    return n;
}
}  // namespace

TEST_CASE("label decomposition handles tags, coindex and escapes") {
    ParsedSentence s = parse_tree("(NP-SBJ-1 (PRP you))");
    CHECK(s.root.category == "NP");
    REQUIRE(s.root.function_tags.size() == 1);
    CHECK(s.root.function_tags[0] == "SBJ");
    REQUIRE(s.root.coindex.has_value());
    CHECK(*s.root.coindex == 1);

    ParsedSentence gap = parse_tree("(NP=2 (NN x))");
    REQUIRE(gap.root.gap_index.has_value());
    CHECK(*gap.root.gap_index == 2);
    CHECK(serialize_tree(gap) == "(NP=2 (NN x))");

    ParsedSentence esc = parse_tree("(-LRB- -LRB-)");
    CHECK(esc.root.category == "-LRB-");
    CHECK(esc.root.is_leaf());
}

TEST_CASE("minimal NP tree parses and spans tokens") {
    ParsedSentence s = parse_tree("(NP (DT the) (NN lion))");
    CHECK(s.root.category == "NP");
    CHECK(s.root.span_begin == 0);
    CHECK(s.root.span_end == 2);
    REQUIRE(s.tokens.size() == 2);
    CHECK(s.tokens[0].form == "the");
    CHECK(s.tokens[1].pos == "NN");
    CHECK(serialize_tree(s) == "(NP (DT the) (NN lion))");
}

TEST_CASE("trace-only NP has an empty overt interval") {
    ParsedSentence s = parse_tree("(NP (-NONE- *-1))");
    CHECK(s.tokens.empty());
    CHECK(s.root.span_begin == s.root.span_end);
    // the empty category is preserved through serialization
    CHECK(serialize_tree(s) == "(NP (-NONE- *-1))");
    CHECK(parse_tree(serialize_tree(s)) == s);
}

TEST_CASE("imperative tree with traces: NP count and overt tokens") {
    auto trees = read_treebank_file(kFixtures + "/trees/misc/lion.mrg");
    REQUIRE(trees.size() == 1);
    const ParsedSentence& s = trees[0];
    CHECK(count_category(s.root, "NP") == 7);
    CHECK(sentence_text(s) ==
          "If you were saved from the lion do n't start wishing to hunt it Mona Lisa");
    // one leaf per overt token plus the three empty categories
    int overt = 0, empty = 0;
    visit_nodes(s.root, [&](const TreeNode& n, const NodePath&) {
        if (!n.is_leaf()) return;
        if (n.is_empty_category())
            ++empty;
        else
            ++overt;
    });
    CHECK(overt == int(s.tokens.size()));
    CHECK(empty == 3);
}

TEST_CASE("parse errors carry byte offsets") {
    CHECK_THROWS_AS(parse_tree(""), parse_error);
    CHECK_THROWS_AS(parse_tree("   \n  "), parse_error);
    CHECK_THROWS_AS(parse_tree("(NP (DT the)"), parse_error);
    CHECK_THROWS_AS(parse_tree("(NP (DT the)))"), parse_error);
    CHECK_THROWS_AS(parse_tree("(NP)"), parse_error);
    try {
        parse_tree("(NP (DT the)");
        FAIL("expected parse_error");
    } catch (const parse_error& e) {
        CHECK(e.byte_offset == 0);  // the unclosed '(' sits at byte 0
        CHECK(std::string(e.what()).find("byte") != std::string::npos);
    }
}

TEST_CASE("unlabeled wrapper gets the TOP category") {
    ParsedSentence s = parse_tree("( (S (NP (NNP Ann)) (VP (VBD ran))))");
    CHECK(s.root.category == "TOP");
    CHECK(parse_tree(serialize_tree(s)) == s);
}

TEST_CASE("round-trip on all fixture trees") {
    for (const std::string& rel :
         {"/trees/fic/alpha.mrg", "/trees/nw/beta.mrg", "/trees/misc/lion.mrg"}) {
        auto trees = read_treebank_file(kFixtures + rel);
        REQUIRE(!trees.empty());
        for (const auto& t : trees) {
            ParsedSentence again = parse_tree(serialize_tree(t));
            CHECK(again == t);
            CHECK(serialize_tree(again) == serialize_tree(t));
        }
    }
}

TEST_CASE("canonical fixture files reproduce byte-for-byte") {
    for (const std::string& rel : {"/trees/fic/alpha.mrg", "/trees/nw/beta.mrg"}) {
        std::string text = read_file(kFixtures + rel);
        auto trees = parse_trees(text);
        std::string out;
        for (const auto& t : trees) out += serialize_tree(t) + "\n";
        CHECK(out == text);
    }
}

TEST_CASE("span intervals nest within parents") {
    for (const std::string& rel :
         {"/trees/fic/alpha.mrg", "/trees/nw/beta.mrg", "/trees/misc/lion.mrg"}) {
        for (const auto& tree : read_treebank_file(kFixtures + rel)) {
            visit_nodes(tree.root, [&](const TreeNode& n, const NodePath&) {
                CHECK(n.span_begin <= n.span_end);
                for (const auto& c : n.children) {
                    CHECK(n.span_begin <= c.span_begin);
                    CHECK(c.span_end <= n.span_end);
                }
            });
        }
    }
}

TEST_CASE("multi-tree files iterate sentences") {
    auto trees = parse_trees("(NP (DT a))\n\n(NP (DT b))  (NP (DT c))");
    REQUIRE(trees.size() == 3);
    CHECK(trees[2].tokens[0].form == "c");
}
