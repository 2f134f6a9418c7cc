#pragma once

// Mention candidate extraction from parsed sentences: NP nodes with overt
// material, a rule-based pronoun pass, and a post-processing pass that
// recovers proper-noun premodifier runs ("[Hong Kong] government").

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "coref/conll.hpp"
#include "coref/treebank.hpp"

namespace coref {

enum class CandidateSource { np_node, pronoun_rule, post_process };

inline const char* to_string(CandidateSource s) {
    switch (s) {
        case CandidateSource::np_node: return "np_node";
        case CandidateSource::pronoun_rule: return "pronoun_rule";
        case CandidateSource::post_process: return "post_process";
    }
    return "?";
}

inline CandidateSource candidate_source_from(const std::string& s) {
    if (s == "np_node") return CandidateSource::np_node;
    if (s == "pronoun_rule") return CandidateSource::pronoun_rule;
    if (s == "post_process") return CandidateSource::post_process;
    throw format_error("unknown candidate source '" + s + "'");
}

struct Candidate {
    Span span;           // inclusive token indices within the sentence
    NodePath node_path;  // source NP node, or covering NP for post_process
    CandidateSource source = CandidateSource::np_node;
    std::optional<bool> label;  // gold mention or not, when gold is available

    bool operator==(const Candidate&) const = default;
};

namespace detail {

inline bool is_demonstrative(const std::string& form) {
    std::string f = lower(form);
    return f == "this" || f == "that" || f == "these" || f == "those";
}

inline bool is_pronoun_pos(const std::string& pos) { return pos == "PRP" || pos == "PRP$"; }

inline void sort_candidates(std::vector<Candidate>& cands) {
    std::sort(cands.begin(), cands.end(), [](const Candidate& a, const Candidate& b) {
        if (a.span.start != b.span.start) return a.span.start < b.span.start;
        if (a.span.end != b.span.end) return a.span.end > b.span.end;  // longer first
        if (a.source != b.source) return int(a.source) < int(b.source);
        return a.node_path < b.node_path;
    });
}

}  // namespace detail

// NP nodes plus rule-based pronouns, ordered by (start, -end). Trace-only
// nodes are dropped; one candidate per surface span (highest node wins).
inline std::vector<Candidate> extract_candidates(const ParsedSentence& sentence,
                                                 int sentence_index = 0) {
    std::vector<Candidate> cands;
    std::set<std::pair<int, int>> np_spans;

    visit_nodes(sentence.root, [&](const TreeNode& node, const NodePath& path) {
        if (node.category != "NP" || node.span_size() == 0) return;
        if (!np_spans.insert({node.span_begin, node.span_end}).second) return;
        cands.push_back(Candidate{Span{sentence_index, node.span_begin, node.span_end - 1},
                                  path, CandidateSource::np_node, std::nullopt});
    });

    // Pronoun pass. A demonstrative DT counts only when no NP above it covers
    // more than the determiner itself (i.e. it is not a modifier of a larger NP).
    std::vector<const TreeNode*> ancestors;
    auto walk = [&](auto&& self, const TreeNode& node, const NodePath& path) -> void {
        if (node.is_leaf()) {
            if (node.is_empty_category()) return;
            bool pronoun = detail::is_pronoun_pos(node.leaf->pos);
            if (!pronoun && node.leaf->pos == "DT" && detail::is_demonstrative(node.leaf->form)) {
                pronoun = true;
                for (const TreeNode* a : ancestors)
                    if (a->category == "NP" && a->span_size() > 1) pronoun = false;
            }
            if (pronoun && !np_spans.count({node.span_begin, node.span_end}))
                cands.push_back(Candidate{
                    Span{sentence_index, node.span_begin, node.span_end - 1}, path,
                    CandidateSource::pronoun_rule, std::nullopt});
            return;
        }
        ancestors.push_back(&node);
        NodePath child_path = path;
        for (int i = 0; i < int(node.children.size()); ++i) {
            child_path.push_back(i);
            self(self, node.children[size_t(i)], child_path);
            child_path.pop_back();
        }
        ancestors.pop_back();
    };
    walk(walk, sentence.root, NodePath{});

    detail::sort_candidates(cands);
    return cands;
}

// label = true iff exact span match against a gold mention. Returns the
// number of gold spans not covered by any candidate.
inline int assign_gold_labels(std::vector<Candidate>& cands, const std::set<Span>& gold) {
    std::set<Span> covered;
    for (auto& c : cands) {
        bool hit = gold.count(c.span) > 0;
        c.label = hit;
        if (hit) covered.insert(c.span);
    }
    int missed = 0;
    for (const auto& g : gold)
        if (!covered.count(g)) ++missed;
    return missed;
}

// Adds maximal NNP/NNPS runs that are strict prefixes of an NP and not
// themselves an NP node, as post_process candidates.
inline std::vector<Candidate> post_process_nonnp(const ParsedSentence& sentence,
                                                 const std::vector<Candidate>& cands,
                                                 int sentence_index = 0) {
    std::vector<Candidate> out = cands;
    std::set<Span> spans;
    for (const auto& c : cands) spans.insert(c.span);

    visit_nodes(sentence.root, [&](const TreeNode& node, const NodePath& path) {
        if (node.category != "NP" || node.span_size() == 0) return;
        int begin = node.span_begin;
        int run = begin;
        while (run < node.span_end &&
               (sentence.tokens[size_t(run)].pos == "NNP" ||
                sentence.tokens[size_t(run)].pos == "NNPS"))
            ++run;
        if (run == begin || run >= node.span_end) return;  // no run, or run == whole NP
        Span sp{sentence_index, begin, run - 1};
        if (spans.count(sp)) return;
        spans.insert(sp);
        out.push_back(Candidate{sp, path, CandidateSource::post_process, std::nullopt});
    });

    detail::sort_candidates(out);
    return out;
}

// ---------------------------------------------------------------------------
// Candidate table (tab-separated artifact shared by the CLI stages)
// ---------------------------------------------------------------------------

struct CandidateRecord {
    std::string doc_id;
    int part = 0;
    Span span;
    CandidateSource source = CandidateSource::np_node;
    std::optional<bool> label;
    std::optional<double> prob;

    std::string doc_key() const { return doc_id + "#" + std::to_string(part); }
};

inline std::string write_candidate_table(const std::vector<CandidateRecord>& records) {
    bool any_prob = std::any_of(records.begin(), records.end(),
                                [](const CandidateRecord& r) { return r.prob.has_value(); });
    std::string out;
    for (const auto& r : records) {
        out += r.doc_id + "\t" + std::to_string(r.part) + "\t" +
               std::to_string(r.span.sentence) + "\t" + std::to_string(r.span.start) + "\t" +
               std::to_string(r.span.end) + "\t" + to_string(r.source) + "\t" +
               (r.label ? (*r.label ? "1" : "0") : "-");
        if (any_prob) out += "\t" + (r.prob ? fmt_double(*r.prob) : std::string("-"));
        out += '\n';
    }
    return out;
}

inline std::vector<CandidateRecord> read_candidate_table(const std::string& text) {
    std::vector<CandidateRecord> out;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (trim(line).empty() || line[0] == '#') continue;
        std::vector<std::string> cols = split(line, '\t');
        if (cols.size() < 6)
            throw format_error(strf("candidate table row with %zu columns at line %d",
                                    cols.size(), line_no));
        CandidateRecord r;
        r.doc_id = cols[0];
        r.part = to_int(cols[1], "part");
        r.span.sentence = to_int(cols[2], "sentence");
        r.span.start = to_int(cols[3], "start");
        r.span.end = to_int(cols[4], "end");
        r.source = candidate_source_from(cols[5]);
        if (cols.size() > 6 && cols[6] != "-") r.label = cols[6] != "0";
        if (cols.size() > 7 && cols[7] != "-") r.prob = to_double(cols[7], "prob");
        out.push_back(std::move(r));
    }
    return out;
}

// Span sets keyed by "doc_id#part".
inline std::map<std::string, std::set<Span>> mention_sets(
    const std::vector<CandidateRecord>& records) {
    std::map<std::string, std::set<Span>> out;
    for (const auto& r : records) out[r.doc_key()].insert(r.span);
    return out;
}

}  // namespace coref
