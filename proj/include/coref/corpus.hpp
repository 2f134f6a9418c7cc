#pragma once

// Dataset assembly: split manifests, joining treebank files with CoNLL
// coreference documents (with token alignment checks), and producing labeled
// candidate corpora. Datasets themselves are not bundled; the test suite
// ships tiny synthetic fixtures in both formats.

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "coref/candidates.hpp"
#include "coref/conll.hpp"
#include "coref/treebank.hpp"
#include "coref/util.hpp"

namespace coref {

struct SplitManifest {
    std::string name;
    std::vector<std::string> train_ids;
    std::vector<std::string> test_ids;
    std::vector<std::string> dev_ids;

    void validate() const {
        std::set<std::string> seen;
        auto check = [&](const std::vector<std::string>& ids, const char* which) {
            std::set<std::string> local;
            for (const auto& id : ids) {
                if (!local.insert(id).second)
                    throw format_error(strf("manifest: duplicate id '%s' in [%s]", id.c_str(),
                                            which));
                if (!seen.insert(id).second)
                    throw format_error(strf("manifest: id '%s' appears in two splits",
                                            id.c_str()));
            }
        };
        check(train_ids, "train");
        check(test_ids, "test");
        check(dev_ids, "dev");
    }
};

inline SplitManifest parse_split_manifest(const std::string& text,
                                          const std::string& name = "manifest") {
    SplitManifest m;
    m.name = name;
    std::vector<std::string>* section = nullptr;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string t = trim(line);
        if (t.empty() || t[0] == '#') continue;
        if (t == "[train]") {
            section = &m.train_ids;
        } else if (t == "[test]") {
            section = &m.test_ids;
        } else if (t == "[dev]") {
            section = &m.dev_ids;
        } else if (t[0] == '[') {
            throw format_error(strf("manifest: unknown section '%s' at line %d", t.c_str(),
                                    line_no));
        } else {
            if (!section)
                throw format_error(strf("manifest: id before any section at line %d", line_no));
            section->push_back(t);
        }
    }
    m.validate();
    return m;
}

inline SplitManifest read_split_manifest(const std::string& path) {
    return parse_split_manifest(read_file(path), std::filesystem::path(path).filename().string());
}

// ---------------------------------------------------------------------------

struct CorpusDocument {
    Document conll;
    std::vector<ParsedSentence> trees;
    std::vector<Candidate> candidates;  // labeled iff the document carries gold mentions
    int missed_gold = 0;                // gold spans with no candidate
};

struct Corpus {
    std::map<std::string, std::vector<CorpusDocument>> splits;  // train/test/dev

    const std::vector<CorpusDocument>& split(const std::string& name) const {
        static const std::vector<CorpusDocument> empty;
        auto it = splits.find(name);
        return it == splits.end() ? empty : it->second;
    }
    std::size_t document_count() const {
        std::size_t n = 0;
        for (const auto& [k, v] : splits) n += v.size();
        return n;
    }
};

namespace detail {

// PTB bracket escapes vs raw brackets is a known treebank/CoNLL divergence.
inline std::string normalize_escape(const std::string& form) {
    if (form == "-LRB-") return "(";
    if (form == "-RRB-") return ")";
    if (form == "-LSB-") return "[";
    if (form == "-RSB-") return "]";
    if (form == "-LCB-") return "{";
    if (form == "-RCB-") return "}";
    return form;
}

inline void check_alignment(const Document& doc, const std::vector<ParsedSentence>& trees,
                            std::size_t tree_offset) {
    for (int s = 0; s < doc.sentence_count(); ++s) {
        const ParsedSentence& tree = trees[tree_offset + size_t(s)];
        int tree_n = int(tree.tokens.size());
        int conll_n = doc.sentence_length(s);
        int n = std::min(tree_n, conll_n);
        for (int t = 0; t < n; ++t) {
            std::string a = normalize_escape(tree.tokens[size_t(t)].form);
            std::string b = normalize_escape(doc.form(s, t));
            if (a != b)
                throw alignment_error(strf(
                    "token mismatch in %s sentence %d token %d: tree '%s' vs conll '%s'",
                    doc.key().c_str(), s, t, tree.tokens[size_t(t)].form.c_str(),
                    doc.form(s, t).c_str()));
        }
        if (tree_n != conll_n)
            throw alignment_error(strf(
                "token count mismatch in %s sentence %d: tree has %d, conll has %d "
                "(first differing index %d)",
                doc.key().c_str(), s, tree_n, conll_n, n));
    }
}

}  // namespace detail

struct BuildOptions {
    bool post_process = true;  // recover proper-noun premodifier runs
    bool label = true;         // assign gold labels when gold mentions exist
    int jobs = 1;
};

// Extract (and optionally label) candidates for one aligned document.
inline CorpusDocument make_corpus_document(Document conll, std::vector<ParsedSentence> trees,
                                           const BuildOptions& opts = {}) {
    if (int(trees.size()) != conll.sentence_count())
        throw alignment_error(strf("document %s: %zu trees for %d sentences",
                                   conll.key().c_str(), trees.size(), conll.sentence_count()));
    detail::check_alignment(conll, trees, 0);
    CorpusDocument doc;
    doc.conll = std::move(conll);
    doc.trees = std::move(trees);
    for (int s = 0; s < int(doc.trees.size()); ++s) {
        auto cands = extract_candidates(doc.trees[size_t(s)], s);
        if (opts.post_process) cands = post_process_nonnp(doc.trees[size_t(s)], cands, s);
        doc.candidates.insert(doc.candidates.end(), cands.begin(), cands.end());
    }
    // Unannotated documents (no chains at all) keep candidates unlabeled.
    if (opts.label && !doc.conll.chains.empty())
        doc.missed_gold = assign_gold_labels(doc.candidates, doc.conll.gold_mentions);
    return doc;
}

// Joins CoNLL documents with .mrg files under tree_root (<tree_root>/<id>.mrg;
// a multi-part document consumes its file's trees in part order).
inline Corpus build_corpus(const std::string& tree_root, const std::vector<Document>& conll_docs,
                           const SplitManifest& manifest, const BuildOptions& opts = {}) {
    manifest.validate();
    std::map<std::string, std::vector<const Document*>> by_id;
    for (const auto& d : conll_docs) by_id[d.doc_id].push_back(&d);

    Corpus corpus;
    if (manifest.train_ids.empty() && manifest.test_ids.empty() && manifest.dev_ids.empty())
        std::fprintf(stderr, "warning: empty manifest '%s'\n", manifest.name.c_str());

    auto build_split = [&](const std::vector<std::string>& ids, const std::string& split_name) {
        auto& slot = corpus.splits[split_name];
        std::vector<std::vector<CorpusDocument>> built(ids.size());
        parallel_for(ids.size(), opts.jobs, [&](std::size_t i) {
            const std::string& id = ids[i];
            auto it = by_id.find(id);
            if (it == by_id.end())
                throw error("manifest id '" + id + "' has no coreference document");
            std::string tree_path =
                (std::filesystem::path(tree_root) / (id + ".mrg")).string();
            if (!std::filesystem::exists(tree_path))
                throw error("manifest id '" + id + "' has no tree file (" + tree_path + ")");
            std::vector<ParsedSentence> trees = read_treebank_file(tree_path);
            std::size_t offset = 0;
            for (const Document* d : it->second) {
                if (offset + size_t(d->sentence_count()) > trees.size())
                    throw alignment_error(strf("document %s: tree file %s has %zu trees, needs "
                                               "more",
                                               d->key().c_str(), tree_path.c_str(), trees.size()));
                std::vector<ParsedSentence> part(trees.begin() + long(offset),
                                                 trees.begin() + long(offset) +
                                                     d->sentence_count());
                offset += size_t(d->sentence_count());
                built[i].push_back(make_corpus_document(*d, std::move(part), opts));
            }
            if (offset != trees.size())
                throw alignment_error(strf("document %s: tree file %s has %zu trees, conll uses "
                                           "%zu",
                                           id.c_str(), tree_path.c_str(), trees.size(), offset));
        });
        for (auto& group : built)
            for (auto& doc : group) slot.push_back(std::move(doc));
    };
    build_split(manifest.train_ids, "train");
    build_split(manifest.test_ids, "test");
    build_split(manifest.dev_ids, "dev");
    return corpus;
}

// Content hash: rebuilding from identical inputs must reproduce it.
inline std::string corpus_fingerprint(const Corpus& corpus) {
    std::uint64_t h = fnv1a64("corefkit corpus v1");
    for (const auto& [split, docs] : corpus.splits) {
        h = fnv1a64(split, h);
        for (const auto& d : docs) {
            h = fnv1a64(d.conll.key(), h);
            for (const auto& t : d.trees) h = fnv1a64(serialize_tree(t), h);
            for (const auto& c : d.candidates)
                h = fnv1a64(strf("%d:%d:%d:%d:%d", c.span.sentence, c.span.start, c.span.end,
                                 int(c.source), c.label ? int(*c.label) : -1),
                            h);
            h = fnv1a64(write_conll_text({d.conll}), h);
        }
    }
    return hex64(h);
}

}  // namespace coref
