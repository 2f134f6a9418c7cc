#pragma once

// Synthetic corpora for tests. Gold coreference is exact string match between
// entity names, so a linker with an exact-match feature can resolve the
// corpus perfectly; noise adds non-gold spans (some with repeated text, so
// they actually link and damage precision) and holds out a slice of gold
// mentions to create recall errors.

#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "coref/conll.hpp"
#include "coref/harness.hpp"
#include "coref/util.hpp"

namespace synth {

using coref::Document;
using coref::Span;

struct Options {
    int documents = 100;
    int sentences_per_doc = 6;
    int mentions_per_sentence = 2;
    std::uint64_t seed = 7;
};

inline const std::vector<std::vector<std::string>>& entity_names() {
    static const std::vector<std::vector<std::string>> names = {
        {"alice"},        {"bob"},         {"carol"},       {"dave"},
        {"erin"},         {"frank"},       {"grace"},       {"heidi"},
        {"ivan"},         {"judy"},        {"mallory"},     {"oscar"},
        {"peggy"},        {"trent"},       {"victor"},      {"walter"},
        {"mr", "smith"},  {"dr", "jones"}, {"st", "louis"}, {"new", "york"}};
    return names;
}

inline const std::vector<std::string>& filler_forms() {
    static const std::vector<std::string> v = {"the", "old",  "green", "house", "tree",
                                               "car", "road", "sky",   "dog",   "word"};
    return v;
}

// One document: sentences of filler with embedded entity mentions; chains
// group mentions of the same entity (singletons included).
inline Document make_document(int index, const Options& opt) {
    coref::rng64 rng = coref::rng_for(opt.seed, "doc:" + std::to_string(index));
    Document doc;
    doc.doc_id = "syn/doc" + std::to_string(index);
    doc.part = 0;
    doc.genre = "syn";

    int n_entities = 3 + int(rng.below(5));
    std::vector<int> entities;
    while (int(entities.size()) < n_entities) {
        int e = int(rng.below(entity_names().size()));
        bool dup = false;
        for (int x : entities) dup = dup || x == e;
        if (!dup) entities.push_back(e);
    }
    std::map<int, std::vector<Span>> spans_by_entity;

    for (int s = 0; s < opt.sentences_per_doc; ++s) {
        std::vector<std::vector<std::string>> rows;
        std::string speaker = s % 2 ? "spk1" : "spk0";
        auto push_token = [&](const std::string& form, const std::string& pos) {
            int t = int(rows.size());
            rows.push_back({doc.doc_id, "0", std::to_string(t), form, pos, "-", "-", "-", "-",
                            speaker, "*", "-"});
        };
        int n_mentions = 1 + int(rng.below(std::uint64_t(opt.mentions_per_sentence)));
        for (int m = 0; m < n_mentions; ++m) {
            int pad = 1 + int(rng.below(3));
            for (int p = 0; p < pad; ++p) {
                const auto& fill = filler_forms()[size_t(rng.below(filler_forms().size()))];
                push_token(fill, p == 0 ? "DT" : "NN");
            }
            int e = entities[size_t(rng.below(entities.size()))];
            int start = int(rows.size());
            for (const auto& w : entity_names()[size_t(e)]) push_token(w, "NNP");
            spans_by_entity[e].push_back(Span{s, start, int(rows.size()) - 1});
        }
        push_token(".", ".");
        doc.sentences.push_back(std::move(rows));
    }

    int chain_id = 1;
    for (auto& [e, spans] : spans_by_entity) {
        coref::Chain c;
        c.chain_id = chain_id++;
        std::sort(spans.begin(), spans.end());
        c.mentions = spans;
        for (const auto& sp : spans) doc.gold_mentions.insert(sp);
        doc.chains.push_back(std::move(c));
    }
    return doc;
}

inline std::vector<Document> make_corpus(const Options& opt) {
    std::vector<Document> docs;
    for (int d = 0; d < opt.documents; ++d) docs.push_back(make_document(d, opt));
    return docs;
}

// Predicted mention sets: gold minus a held-out slice, plus false-positive
// filler spans. drop_per_mille is applied per gold mention; fp_factor scales
// the number of noise spans relative to the kept gold mentions.
inline coref::MentionSets noised_mentions(const std::vector<Document>& docs, int drop_per_mille,
                                          double fp_factor, std::uint64_t seed) {
    coref::MentionSets out;
    for (const auto& doc : docs) {
        coref::rng64 rng = coref::rng_for(seed, "noise:" + doc.key());
        std::set<Span>& result = out[doc.key()];
        long kept = 0;
        for (const auto& sp : doc.gold_mentions) {
            if (int(rng.below(1000)) < drop_per_mille) continue;
            result.insert(sp);
            ++kept;
        }
        long want_fp = std::lround(double(kept) * fp_factor);
        long guard = 0;
        while (want_fp > 0 && guard++ < 10000) {
            int s = int(rng.below(doc.sentences.size()));
            int len = doc.sentence_length(s);
            if (len < 2) continue;
            int a = int(rng.below(std::uint64_t(len)));
            int b = std::min(len - 1, a + int(rng.below(3)));
            Span sp{s, a, b};
            if (doc.gold_mentions.count(sp) || result.count(sp)) continue;
            result.insert(sp);
            --want_fp;
        }
    }
    return out;
}

}  // namespace synth
