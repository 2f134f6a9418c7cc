#include <catch2/catch_amalgamated.hpp>

#include "coref/candidates.hpp"
#include "coref/corpus.hpp"
#include "coref/features.hpp"

using namespace coref;

namespace {
const std::string kFixtures = FIXTURE_DIR;

double slot(const FeatureVector& v, int off, int idx = 0) { return v[size_t(off + idx)]; }

struct MiniDoc {
    std::vector<ParsedSentence> trees;
    std::vector<Candidate> candidates;
};

MiniDoc mini_doc(const std::string& tree_text) {
    MiniDoc d;
    d.trees.push_back(parse_tree(tree_text));
    d.candidates = post_process_nonnp(d.trees[0], extract_candidates(d.trees[0], 0), 0);
    return d;
}
}  // namespace

TEST_CASE("schema is stable and self-describing") {
    const FeatureSchema& fs = FeatureSchema::standard();
    CHECK(fs.width() > 100);
    CHECK(fs.slots[size_t(fs.off_largest)].name == "largest_flag");
    CHECK(fs.slots[size_t(fs.off_largest)].kind == "boolean");
    // manifest round-trips through the fingerprint deterministically
    CHECK(fs.fingerprint() == FeatureSchema::standard().fingerprint());
    CHECK(fs.manifest().find("corefkit feature schema v1") == 0);
    CHECK_THROWS_AS(check_schema_fingerprint("feedfeedfeedfeed"), version_error);
    CHECK_NOTHROW(check_schema_fingerprint(fs.fingerprint()));
}

TEST_CASE("definite NP under PP gets determiner and preposition slots") {
    auto trees = read_treebank_file(kFixtures + "/trees/misc/lion.mrg");
    auto cands = extract_candidates(trees[0]);
    const FeatureSchema& fs = FeatureSchema::standard();

    // cands[1] is "the lion" under PP-CLR
    FeatureVector lion = featurize(cands[1], trees[0], cands);
    CHECK(slot(lion, fs.off_det, 0) == 1.0);  // definite
    CHECK(slot(lion, fs.off_parent_pp) == 1.0);
    int from_idx = fvocab::index_or_oov(fvocab::prepositions(), "from");
    CHECK(slot(lion, fs.off_prep, from_idx) == 1.0);
    CHECK(slot(lion, fs.off_containing) == 0.0);
    CHECK(slot(lion, fs.off_len, length_bucket(2)) == 1.0);

    // cands[0] is "you" with the SBJ function tag
    FeatureVector you = featurize(cands[0], trees[0], cands);
    int sbj = fvocab::index_or_oov(fvocab::function_tags(), "SBJ");
    CHECK(slot(you, fs.off_ftag, sbj) == 1.0);
    int prp = fvocab::index_or_oov(fvocab::pos_tags(), "PRP");
    CHECK(slot(you, fs.off_first_pos, prp) == 1.0);
    CHECK(slot(you, fs.off_len, length_bucket(1)) == 1.0);
    CHECK(slot(you, fs.off_coindex) == 1.0);  // NP-SBJ-1
}

TEST_CASE("candidate with no overlaps is both largest and smallest") {
    MiniDoc d = mini_doc("(S (NP (NNP Ann)) (VP (VBD ran)))");
    const FeatureSchema& fs = FeatureSchema::standard();
    FeatureVector v = featurize(d.candidates[0], d.trees[0], d.candidates);
    CHECK(slot(v, fs.off_largest) == 1.0);
    CHECK(slot(v, fs.off_smallest) == 1.0);
    CHECK(slot(v, fs.off_containing) == 0.0);
    CHECK(slot(v, fs.off_contained) == 0.0);
}

TEST_CASE("overlap counts are monotone along a nesting stack") {
    MiniDoc d = mini_doc("(NP (NP (NP (NNP Ann)) (POS 's)) (NN dog))");
    const FeatureSchema& fs = FeatureSchema::standard();
    REQUIRE(d.candidates.size() == 3);
    std::vector<double> containing;
    for (const auto& c : d.candidates)
        containing.push_back(slot(featurize(c, d.trees[0], d.candidates), fs.off_containing));
    // candidates are sorted outer to inner here
    CHECK(containing[0] == 0.0);
    CHECK(containing[1] == 1.0);
    CHECK(containing[2] == 2.0);
    int largest = 0, smallest = 0;
    for (const auto& c : d.candidates) {
        FeatureVector v = featurize(c, d.trees[0], d.candidates);
        largest += int(slot(v, fs.off_largest));
        smallest += int(slot(v, fs.off_smallest));
    }
    CHECK(largest == 1);
    CHECK(smallest == 1);
}

TEST_CASE("possessive and coordination child flags") {
    MiniDoc d = mini_doc("(NP (NP (NNP Ann) (POS 's)) (NN dog))");
    const FeatureSchema& fs = FeatureSchema::standard();
    // inner NP "Ann 's" has a POS child
    REQUIRE(d.candidates.size() >= 2);
    FeatureVector inner = featurize(d.candidates[1], d.trees[0], d.candidates);
    CHECK(slot(inner, fs.off_possessive) == 1.0);
    MiniDoc coord = mini_doc("(NP (NP (NNP Ann)) (CC and) (NP (NNP Bo)))");
    FeatureVector outer = featurize(coord.candidates[0], coord.trees[0], coord.candidates);
    CHECK(slot(outer, fs.off_cc_child) == 1.0);
    CHECK(slot(outer, fs.off_np_children) == 2.0);
}

TEST_CASE("trace child and subject role flags") {
    ParsedSentence s = parse_tree(
        "(S (NP-SBJ (NNP Ann)) (VP (VBD saw) (NP (DT the) (NN dog))) (. .))");
    auto cands = extract_candidates(s);
    const FeatureSchema& fs = FeatureSchema::standard();
    FeatureVector subj = featurize(cands[0], s, cands);
    CHECK(slot(subj, fs.off_role_subj) == 1.0);
    FeatureVector obj = featurize(cands[1], s, cands);
    CHECK(slot(obj, fs.off_role_obj) == 1.0);
    ParsedSentence traced = parse_tree("(S (NP (-NONE- *-1) (NN deal)) (VP (VBD sold)))");
    auto tcands = extract_candidates(traced);
    FeatureVector tv = featurize(tcands[0], traced, tcands);
    CHECK(slot(tv, fs.off_none_child) == 1.0);
}

TEST_CASE("post_process candidates featurize against the covering NP") {
    MiniDoc d = mini_doc("(NP (NNP Hong) (NNP Kong) (NN government))");
    const FeatureSchema& fs = FeatureSchema::standard();
    REQUIRE(d.candidates.size() == 2);
    const Candidate& run = d.candidates[1];
    REQUIRE(run.source == CandidateSource::post_process);
    FeatureVector v = featurize(run, d.trees[0], d.candidates);
    int np = fvocab::index_or_oov(fvocab::categories(), "NP");
    CHECK(slot(v, fs.off_parent_cat, np) == 1.0);
    CHECK(slot(v, fs.off_source, 2) == 1.0);
    int nnp = fvocab::index_or_oov(fvocab::pos_tags(), "NNP");
    CHECK(slot(v, fs.off_head_pos, nnp) == 1.0);
}

TEST_CASE("featurization is deterministic and row counts match candidates") {
    std::vector<Document> conll = read_conll(kFixtures + "/gold.conll");
    SplitManifest m = read_split_manifest(kFixtures + "/manifest.txt");
    Corpus corpus = build_corpus(kFixtures + "/trees", conll, m);
    auto docs = corpus.split("train");
    FeatureMatrix a = featurize_corpus(docs);
    FeatureMatrix b = featurize_corpus(docs);
    CHECK(a.rows == b.rows);
    CHECK(a.labels == b.labels);
    std::size_t total = 0;
    for (const auto& d : docs) total += d.candidates.size();
    CHECK(a.rows.size() == total);
    for (const auto& row : a.rows) {
        CHECK(row.size() == size_t(FeatureSchema::standard().width()));
        for (double x : row) {
            CHECK(std::isfinite(x));
        }
    }
    SECTION("csv export has header plus one line per row") {
        std::string csv = feature_matrix_csv(a);
        std::size_t lines = std::count(csv.begin(), csv.end(), '\n');
        CHECK(lines == a.rows.size() + 1);
    }
}
