#include <catch2/catch_amalgamated.hpp>

#include "coref/harness.hpp"
#include "coref/linker.hpp"
#include "support/synthetic.hpp"

using namespace coref;

namespace {

Span sp(int s, int a, int b) { return Span{s, a, b}; }

// mention sets realizing given corpus-level TP/FP counts across n_docs;
// gold = the true positives plus `extra_gold` spans the predictions miss
struct Synthetic {
    MentionSets pred;
    MentionSets gold;
};

Synthetic spread_counts(long tp, long fp, long extra_gold, int n_docs) {
    Synthetic out;
    for (long i = 0; i < tp; ++i) {
        std::string key = "p/d" + std::to_string(i % n_docs) + "#0";
        Span s = sp(0, int(2 * (i / n_docs)), int(2 * (i / n_docs)));
        out.pred[key].insert(s);
        out.gold[key].insert(s);
    }
    for (long i = 0; i < fp; ++i) {
        std::string key = "p/d" + std::to_string(i % n_docs) + "#0";
        Span s = sp(1, int(2 * (i / n_docs) + 1), int(2 * (i / n_docs) + 1));
        out.pred[key].insert(s);
    }
    for (long i = 0; i < extra_gold; ++i) {
        std::string key = "p/d" + std::to_string(i % n_docs) + "#0";
        Span s = sp(2, int(2 * (i / n_docs)), int(2 * (i / n_docs)));
        out.gold[key].insert(s);
    }
    return out;
}

long total_size(const MentionSets& sets) {
    long n = 0;
    for (const auto& [k, v] : sets) n += long(v.size());
    return n;
}

long intersection_size(const MentionSets& a, const MentionSets& b) {
    long n = 0;
    for (const auto& [k, v] : a) {
        auto it = b.find(k);
        if (it == b.end()) continue;
        for (const auto& s : v)
            if (it->second.count(s)) ++n;
    }
    return n;
}

std::string serialize_sets(const MentionSets& sets) {
    std::string out;
    for (const auto& [k, v] : sets) {
        out += k + ":";
        for (const auto& s : v) out += strf("(%d,%d,%d)", s.sentence, s.start, s.end);
        out += ";";
    }
    return out;
}

}  // namespace

TEST_CASE("augment_union basics") {
    MentionSets gold = {{"a#0", {sp(0, 0, 0), sp(0, 2, 2)}}};
    MentionSets pred = {{"a#0", {sp(0, 2, 2), sp(0, 4, 4)}}};
    MentionSets u = augment_union(gold, pred);
    CHECK(u["a#0"].size() == 3);

    SECTION("empty predictions reproduce gold") {
        MentionSets empty = {{"a#0", {}}};
        CHECK(augment_union(gold, empty) == gold);
    }
    SECTION("set identity |union| = |gold| + |pred \\ gold|") {
        long pred_minus_gold = 0;
        for (const auto& s : pred["a#0"])
            if (!gold["a#0"].count(s)) ++pred_minus_gold;
        CHECK(long(u["a#0"].size()) == long(gold["a#0"].size()) + pred_minus_gold);
    }
    SECTION("unmatched ids raise an error naming them") {
        MentionSets stray = pred;
        stray["b#0"] = {sp(0, 0, 0)};
        try {
            augment_union(gold, stray);
            FAIL("expected error");
        } catch (const error& e) {
            CHECK(std::string(e.what()).find("b#0") != std::string::npos);
        }
    }
}

TEST_CASE("largest remainder apportionment") {
    using coref::detail::largest_remainder;
    CHECK(largest_remainder(4, {3, 3, 3}) == std::vector<long>{2, 1, 1});
    CHECK(largest_remainder(0, {5, 5}) == std::vector<long>{0, 0});
    CHECK(largest_remainder(10, {0, 10}) == std::vector<long>{0, 10});
    auto alloc = largest_remainder(7, {1, 2, 3, 4});
    long sum = 0;
    for (std::size_t i = 0; i < alloc.size(); ++i) {
        sum += alloc[i];
        CHECK(alloc[i] <= std::vector<long>{1, 2, 3, 4}[i]);
    }
    CHECK(sum == 7);
}

TEST_CASE("perturb_precision hits the arithmetic targets") {
    Synthetic s = spread_counts(18321, 48419 - 18321, 19156 - 18321, 149);
    REQUIRE(total_size(s.pred) == 48419);

    MentionSets at50 = perturb_precision(s.pred, s.gold, 50.0, 1234);
    CHECK(std::llabs(total_size(at50) - 36642) <= 1);
    long tp = intersection_size(at50, s.gold);
    CHECK(tp == 18321);  // every true positive retained
    double achieved = double(tp) / double(total_size(at50));
    CHECK(achieved * 100.0 == Catch::Approx(50.0).margin(0.5));
    // output is a subset of the input
    for (const auto& [k, v] : at50)
        for (const auto& m : v) CHECK(s.pred.at(k).count(m) == 1);

    SECTION("target 100 keeps exactly the true positives") {
        MentionSets ideal = perturb_precision(s.pred, s.gold, 100.0, 7);
        CHECK(total_size(ideal) == 18321);
        CHECK(intersection_size(ideal, s.gold) == 18321);
    }
    SECTION("determinism under a fixed seed") {
        MentionSets again = perturb_precision(s.pred, s.gold, 50.0, 1234);
        CHECK(serialize_sets(again) == serialize_sets(at50));
        MentionSets other = perturb_precision(s.pred, s.gold, 50.0, 4321);
        CHECK(serialize_sets(other) != serialize_sets(at50));
    }
    SECTION("target below current precision is rejected") {
        CHECK_THROWS_AS(perturb_precision(s.pred, s.gold, 10.0, 1), error);
    }
}

TEST_CASE("perturb_recall hits the arithmetic targets") {
    Synthetic s = spread_counts(18321, 48419 - 18321, 19156 - 18321, 149);
    MentionSets full = perturb_recall(s.pred, s.gold, 100.0, 99);
    CHECK(total_size(full) == 48419 + 835);  // all 835 missed gold spans added
    CHECK(intersection_size(full, s.gold) == 19156);
    // never removes an existing prediction
    for (const auto& [k, v] : s.pred)
        for (const auto& m : v) CHECK(full.at(k).count(m) == 1);

    SECTION("target equal to current recall is a no-op") {
        double current = 100.0 * 18321.0 / 19156.0;
        MentionSets same = perturb_recall(s.pred, s.gold, current, 5);
        CHECK(serialize_sets(same) == serialize_sets(s.pred));
    }
    SECTION("target below current recall is rejected") {
        CHECK_THROWS_AS(perturb_recall(s.pred, s.gold, 50.0, 1), error);
    }
}

TEST_CASE("sweep curve produces deterministic, on-target points") {
    synth::Options opt;
    opt.documents = 25;
    opt.seed = 31;
    auto docs = synth::make_corpus(opt);
    MentionSets noised = synth::noised_mentions(docs, 80, 1.2, 17);

    std::vector<LinkerDocument> train;
    for (const auto& d : docs) train.push_back(make_linker_document(d, d.gold_mentions));
    LinkerConfig cfg;
    cfg.epochs = 60;
    LinkerModel model = train_linker(train, cfg);

    PerturbSpec spec;
    spec.axis = PerturbSpec::Axis::precision;
    spec.targets = {60.0, 80.0, 100.0};
    spec.seed = 5;
    auto points = sweep_curve(docs, noised, model, spec);
    REQUIRE(points.size() == 3);
    for (std::size_t i = 0; i < points.size(); ++i) {
        CHECK(points[i].axis_value == Catch::Approx(spec.targets[i]).margin(0.5));
        if (i) CHECK(points[i].axis_value >= points[i - 1].axis_value);
    }
    auto again = sweep_curve(docs, noised, model, spec);
    CHECK(curve_csv(points) == curve_csv(again));
    std::string csv = curve_csv(points);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);  // header + 3 rows
    CHECK(csv.rfind("axis_value,mention_p,mention_r,muc_f1,b3_f1,ceaf_f1,avg_f1\n", 0) == 0);

    SECTION("descending targets are rejected") {
        PerturbSpec bad = spec;
        bad.targets = {80.0, 60.0};
        CHECK_THROWS_AS(sweep_curve(docs, noised, model, bad), error);
    }
}

TEST_CASE("error diagnostics tag the documented categories") {
    std::string text =
        "#begin document (d/x); part 000\n"
        "d/x 0 0 Once RB - - - - s * -\n"
        "d/x 0 1 the DT - - - - s * -\n"
        "d/x 0 2 Hong NNP - - - - s * (1\n"
        "d/x 0 3 Kong NNP - - - - s * 1)\n"
        "d/x 0 4 bridge NN - - - - s * -\n"
        "d/x 0 5 opens VBZ - - - - s * -\n"
        "\n"
        "d/x 0 0 one CD - - - - s * (2)\n"
        "d/x 0 1 . . - - - - s * -\n"
        "\n"
        "d/x 0 0 red JJ - - - - s * (3\n"
        "d/x 0 1 car NN - - - - s * 3)\n"
        "d/x 0 2 fast RB - - - - s * -\n"
        "\n"
        "#end document\n";
    auto docs = read_conll_text(text);
    MentionSets pred;
    pred["d/x#0"] = {sp(0, 1, 4),   // covers gold "Hong Kong" strictly
                     sp(1, 0, 1),   // "one .": ends in punctuation, covers gold "one"
                     sp(2, 1, 2)};  // overlaps gold "red car" without containing it
    Diagnostics diag = diagnose_errors(pred, docs);
    REQUIRE(diag.recall_counts.count("nested-missing"));
    CHECK(diag.recall_counts.at("nested-missing") == 2);  // "Hong Kong" and "one"
    REQUIRE(diag.recall_counts.count("boundary"));
    CHECK(diag.recall_counts.at("boundary") == 1);  // "red car"
    REQUIRE(diag.precision_counts.count("trailing-punctuation"));
    CHECK(diag.precision_counts.at("trailing-punctuation") == 1);
    CHECK(diag.precision_counts["other"] == 2);  // the bridge span and "car fast"

    SECTION("pred == gold leaves every list empty") {
        MentionSets perfect;
        for (const auto& d : docs) perfect[d.key()] = d.gold_mentions;
        Diagnostics clean = diagnose_errors(perfect, docs);
        CHECK(clean.recall_errors.empty());
        CHECK(clean.precision_errors.empty());
    }
    SECTION("formatting lists counts and examples") {
        std::string out = format_diagnostics(diag);
        CHECK(out.find("nested-missing") != std::string::npos);
        CHECK(out.find("trailing-punctuation") != std::string::npos);
    }
}
