#pragma once

// Fixed-schema feature vectors for candidate classification. The schema is a
// closed, versioned slot list: categorical groups use fixed whitelists with a
// dedicated OOV slot (and a NONE slot where a value can be absent), so vector
// width is constant and index<->descriptor mapping is stable across runs.

#include <string>
#include <vector>

#include "coref/candidates.hpp"
#include "coref/treebank.hpp"

namespace coref {

using FeatureVector = std::vector<double>;

struct FeatureDescriptor {
    std::string name;
    std::string kind;  // boolean | count | bucket | categorical
};

namespace fvocab {

inline const std::vector<std::string>& pos_tags() {
    static const std::vector<std::string> v = {
        "CC", "CD",  "DT",  "EX",  "FW",  "IN",  "JJ",   "JJR",  "JJS", "LS",  "MD",
        "NN", "NNS", "NNP", "NNPS", "PDT", "POS", "PRP",  "PRP$", "RB",  "RBR", "RBS",
        "RP", "SYM", "TO",  "UH",  "VB",  "VBD", "VBG",  "VBN",  "VBP", "VBZ", "WDT",
        "WP", "WP$", "WRB", ".",   ",",   ":",   "``",   "''",   "-LRB-", "-RRB-", "$",
        "#", "-NONE-"};
    return v;
}

inline const std::vector<std::string>& categories() {
    static const std::vector<std::string> v = {"NP",  "NML",  "NX",   "QP",   "WHNP", "PRN",
                                               "S",   "SBAR", "SINV", "SQ",   "VP",   "PP",
                                               "ADJP", "ADVP", "FRAG", "UCP",  "CONJP", "INTJ",
                                               "LST", "X",    "TOP"};
    return v;
}

inline const std::vector<std::string>& function_tags() {
    static const std::vector<std::string> v = {"SBJ", "OBJ", "PRD", "TMP", "LOC", "ADV", "MNR",
                                               "DIR", "PRP", "CLR", "NOM", "TPC", "DTV", "LGS",
                                               "EXT", "HLN", "TTL", "VOC", "SEZ", "PUT", "BNF"};
    return v;
}

inline const std::vector<std::string>& prepositions() {
    static const std::vector<std::string> v = {"of",   "in",   "on",      "at",    "by",
                                               "for",  "with", "from",    "to",    "about",
                                               "as",   "into", "over",    "after", "under",
                                               "between", "during", "against", "through"};
    return v;
}

// index into vocab; vocab.size() is the OOV slot
inline int index_or_oov(const std::vector<std::string>& vocab, const std::string& value) {
    for (int i = 0; i < int(vocab.size()); ++i)
        if (vocab[size_t(i)] == value) return i;
    return int(vocab.size());
}

}  // namespace fvocab

inline int length_bucket(int len) {
    if (len <= 4) return len - 1;  // 1,2,3,4
    if (len <= 7) return 4;
    if (len <= 15) return 5;
    return 6;
}
inline constexpr int kLengthBuckets = 7;

struct FeatureSchema {
    std::vector<FeatureDescriptor> slots;

    int off_source = 0, off_cat = 0, off_ftag = 0, off_coindex = 0, off_first_pos = 0,
        off_last_pos = 0, off_head_pos = 0, off_det = 0, off_len = 0, off_parent_cat = 0,
        off_parent_pp = 0, off_prep = 0, off_np_children = 0, off_none_child = 0,
        off_cc_child = 0, off_possessive = 0, off_role_subj = 0, off_role_obj = 0,
        off_containing = 0, off_contained = 0, off_depth_rank = 0, off_largest = 0,
        off_smallest = 0, off_position = 0;

    int width() const { return int(slots.size()); }

    std::string manifest() const {
        std::string out = "corefkit feature schema v1\n";
        out += "width " + std::to_string(width()) + "\n";
        for (int i = 0; i < width(); ++i)
            out += std::to_string(i) + " " + slots[size_t(i)].name + " " +
                   slots[size_t(i)].kind + "\n";
        return out;
    }

    std::string fingerprint() const { return hex64(fnv1a64(manifest())); }

    static const FeatureSchema& standard();
};

namespace detail {

struct SchemaBuilder {
    FeatureSchema s;
    int add(const std::string& name, const std::string& kind) {
        int at = s.width();
        s.slots.push_back({name, kind});
        return at;
    }
    int add_onehot(const std::string& prefix, const std::vector<std::string>& vocab,
                   bool with_none) {
        int at = s.width();
        for (const auto& v : vocab) s.slots.push_back({prefix + "=" + v, "categorical"});
        s.slots.push_back({prefix + "=<oov>", "categorical"});
        if (with_none) s.slots.push_back({prefix + "=<none>", "categorical"});
        return at;
    }
    int add_buckets(const std::string& prefix, int n) {
        int at = s.width();
        for (int i = 0; i < n; ++i)
            s.slots.push_back({prefix + "=" + std::to_string(i), "bucket"});
        return at;
    }
};

}  // namespace detail

inline const FeatureSchema& FeatureSchema::standard() {
    static const FeatureSchema schema = [] {
        detail::SchemaBuilder b;
        // group a: the candidate span and its node
        b.s.off_source = b.add_onehot("source", {"np_node", "pronoun_rule"}, false);
        // ("post_process" lands in the OOV slot of the 2-entry source vocab)
        b.s.off_cat = b.add_onehot("cat", fvocab::categories(), false);
        int ftag_at = -1;
        for (const auto& t : fvocab::function_tags()) {
            int at = b.add("ftag_" + t, "boolean");
            if (ftag_at < 0) ftag_at = at;
        }
        b.add("ftag_<oov>", "boolean");
        b.s.off_ftag = ftag_at;
        b.s.off_coindex = b.add("has_coindex", "boolean");
        b.s.off_first_pos = b.add_onehot("first_pos", fvocab::pos_tags(), false);
        b.s.off_last_pos = b.add_onehot("last_pos", fvocab::pos_tags(), false);
        b.s.off_head_pos = b.add_onehot("head_pos", fvocab::pos_tags(), false);
        b.s.off_det = b.add_onehot("determiner", {"definite", "indefinite"}, true);
        b.s.off_len = b.add_buckets("len_bucket", kLengthBuckets);
        // group b: parent and children
        b.s.off_parent_cat = b.add_onehot("parent_cat", fvocab::categories(), true);
        b.s.off_parent_pp = b.add("parent_is_pp", "boolean");
        b.s.off_prep = b.add_onehot("gov_prep", fvocab::prepositions(), true);
        b.s.off_np_children = b.add("np_child_count", "count");
        b.s.off_none_child = b.add("has_none_child", "boolean");
        b.s.off_cc_child = b.add("has_cc_child", "boolean");
        b.s.off_possessive = b.add("has_possessive", "boolean");
        b.s.off_role_subj = b.add("role_subject", "boolean");
        b.s.off_role_obj = b.add("role_object", "boolean");
        // group c: overlap with the sentence's other candidates
        b.s.off_containing = b.add("containing_np_count", "count");
        b.s.off_contained = b.add("contained_np_count", "count");
        b.s.off_depth_rank = b.add("overlap_depth_rank", "count");
        b.s.off_largest = b.add("largest_flag", "boolean");
        b.s.off_smallest = b.add("smallest_flag", "boolean");
        b.s.off_position = b.add("position_index", "count");
        return b.s;
    }();
    return schema;
}

inline void check_schema_fingerprint(const std::string& expected) {
    const std::string actual = FeatureSchema::standard().fingerprint();
    if (expected != actual)
        throw version_error("feature schema fingerprint mismatch: model has " + expected +
                            ", this build produces " + actual);
}

namespace detail {

inline bool pos_is_noun(const std::string& pos) { return pos.rfind("NN", 0) == 0; }
inline bool pos_is_verb(const std::string& pos) { return pos.rfind("VB", 0) == 0; }

inline int head_index(const ParsedSentence& sent, const Span& sp) {
    for (int t = sp.end; t >= sp.start; --t)
        if (pos_is_noun(sent.tokens[size_t(t)].pos)) return t;
    return sp.end;
}

inline const TreeNode* first_preposition_leaf(const TreeNode& node) {
    if (node.is_leaf())
        return (node.leaf->pos == "IN" || node.leaf->pos == "TO") ? &node : nullptr;
    for (const auto& c : node.children)
        if (const TreeNode* p = first_preposition_leaf(c)) return p;
    return nullptr;
}

}  // namespace detail

// Pure function of (candidate, sentence, sentence cohort).
inline FeatureVector featurize(const Candidate& cand, const ParsedSentence& sentence,
                               const std::vector<Candidate>& all_cands) {
    const FeatureSchema& fs = FeatureSchema::standard();
    FeatureVector v(size_t(fs.width()), 0.0);
    const Span sp = cand.span;

    const TreeNode* node = nullptr;    // the candidate's own node, when it has one
    const TreeNode* parent = nullptr;
    if (cand.source == CandidateSource::post_process) {
        parent = node_at(sentence.root, cand.node_path);  // the covering NP
    } else {
        node = node_at(sentence.root, cand.node_path);
        if (!cand.node_path.empty()) {
            NodePath pp(cand.node_path.begin(), cand.node_path.end() - 1);
            parent = node_at(sentence.root, pp);
        }
    }

    // group a
    int src = cand.source == CandidateSource::np_node      ? 0
              : cand.source == CandidateSource::pronoun_rule ? 1
                                                             : 2;
    v[size_t(fs.off_source + src)] = 1.0;
    if (node) {
        v[size_t(fs.off_cat + fvocab::index_or_oov(fvocab::categories(), node->category))] = 1.0;
        const auto& ftags = fvocab::function_tags();
        for (const auto& t : node->function_tags)
            v[size_t(fs.off_ftag + fvocab::index_or_oov(ftags, t))] = 1.0;
        if (node->coindex) v[size_t(fs.off_coindex)] = 1.0;
    } else {
        v[size_t(fs.off_cat + int(fvocab::categories().size()))] = 1.0;  // OOV: span-only
    }
    const auto& pos_vocab = fvocab::pos_tags();
    const std::string& first_pos = sentence.tokens[size_t(sp.start)].pos;
    const std::string& last_pos = sentence.tokens[size_t(sp.end)].pos;
    const std::string& head_pos =
        sentence.tokens[size_t(detail::head_index(sentence, sp))].pos;
    v[size_t(fs.off_first_pos + fvocab::index_or_oov(pos_vocab, first_pos))] = 1.0;
    v[size_t(fs.off_last_pos + fvocab::index_or_oov(pos_vocab, last_pos))] = 1.0;
    v[size_t(fs.off_head_pos + fvocab::index_or_oov(pos_vocab, head_pos))] = 1.0;

    {
        const std::string first_form = lower(sentence.tokens[size_t(sp.start)].form);
        int det = 2;  // none
        if (first_pos == "DT") {
            bool definite = first_form == "the" || first_form == "this" || first_form == "that" ||
                            first_form == "these" || first_form == "those";
            det = definite ? 0 : 1;
        } else if (first_pos == "PRP$" || first_pos == "POS") {
            det = 0;
        }
        v[size_t(fs.off_det + det)] = 1.0;
    }
    v[size_t(fs.off_len + length_bucket(sp.end - sp.start + 1))] = 1.0;

    // group b
    const auto& cats = fvocab::categories();
    if (parent) {
        v[size_t(fs.off_parent_cat + fvocab::index_or_oov(cats, parent->category))] = 1.0;
        if (parent->category == "PP") {
            v[size_t(fs.off_parent_pp)] = 1.0;
            const TreeNode* prep = detail::first_preposition_leaf(*parent);
            int pi = prep ? fvocab::index_or_oov(fvocab::prepositions(), lower(prep->leaf->form))
                          : int(fvocab::prepositions().size());
            v[size_t(fs.off_prep + pi)] = 1.0;
        } else {
            v[size_t(fs.off_prep + int(fvocab::prepositions().size()) + 1)] = 1.0;  // NONE
        }
    } else {
        v[size_t(fs.off_parent_cat + int(cats.size()) + 1)] = 1.0;  // NONE sentinel
        v[size_t(fs.off_prep + int(fvocab::prepositions().size()) + 1)] = 1.0;
    }
    if (node && !node->is_leaf()) {
        int np_children = 0;
        for (const auto& c : node->children) {
            if (c.category == "NP") ++np_children;
            if (c.is_empty_category()) v[size_t(fs.off_none_child)] = 1.0;
            if (c.is_leaf() && c.leaf->pos == "CC") v[size_t(fs.off_cc_child)] = 1.0;
            if (c.is_leaf() && (c.leaf->pos == "POS" || c.leaf->pos == "PRP$"))
                v[size_t(fs.off_possessive)] = 1.0;
        }
        v[size_t(fs.off_np_children)] = double(np_children);
    }
    if (node && parent && node->category == "NP" && !cand.node_path.empty()) {
        int my_index = cand.node_path.back();
        if (parent->category == "S" || parent->category == "SINV" || parent->category == "SQ") {
            for (int i = my_index + 1; i < int(parent->children.size()); ++i)
                if (parent->children[size_t(i)].category == "VP")
                    v[size_t(fs.off_role_subj)] = 1.0;
        }
        if (parent->category == "VP") {
            for (int i = 0; i < my_index; ++i) {
                const TreeNode& sib = parent->children[size_t(i)];
                if (sib.is_leaf() && detail::pos_is_verb(sib.leaf->pos))
                    v[size_t(fs.off_role_obj)] = 1.0;
            }
        }
    }

    // group c
    int containing = 0, contained = 0, position = 0;
    for (int i = 0; i < int(all_cands.size()); ++i) {
        const Candidate& o = all_cands[size_t(i)];
        if (o.span == sp && o.source == cand.source) position = i;
        if (o.span == sp) continue;
        bool o_contains = o.span.start <= sp.start && sp.end <= o.span.end;
        bool o_inside = sp.start <= o.span.start && o.span.end <= sp.end;
        if (o_contains) ++containing;
        if (o_inside) ++contained;
    }
    v[size_t(fs.off_containing)] = double(containing);
    v[size_t(fs.off_contained)] = double(contained);
    v[size_t(fs.off_depth_rank)] = double(containing + 1);
    v[size_t(fs.off_largest)] = containing == 0 ? 1.0 : 0.0;
    v[size_t(fs.off_smallest)] = contained == 0 ? 1.0 : 0.0;
    v[size_t(fs.off_position)] = double(position);
    return v;
}

struct FeatureMatrix {
    std::vector<FeatureVector> rows;
    std::vector<int> labels;  // -1 when the candidate is unlabeled
};

// Rows for one document: candidates grouped per sentence, document order kept.
inline void featurize_document(const std::vector<ParsedSentence>& trees,
                               const std::vector<Candidate>& candidates, FeatureMatrix& out) {
    std::vector<std::vector<Candidate>> by_sentence(trees.size());
    for (const auto& c : candidates) {
        if (c.span.sentence < 0 || c.span.sentence >= int(trees.size()))
            throw error("candidate sentence index out of range");
        by_sentence[size_t(c.span.sentence)].push_back(c);
    }
    for (const auto& c : candidates) {
        out.rows.push_back(
            featurize(c, trees[size_t(c.span.sentence)], by_sentence[size_t(c.span.sentence)]));
        out.labels.push_back(c.label ? (*c.label ? 1 : 0) : -1);
    }
}

// Docs: any range whose elements expose .trees and .candidates.
template <typename Docs>
FeatureMatrix featurize_corpus(const Docs& docs) {
    FeatureMatrix m;
    for (const auto& d : docs) featurize_document(d.trees, d.candidates, m);
    return m;
}

inline std::string feature_matrix_csv(const FeatureMatrix& m) {
    const FeatureSchema& fs = FeatureSchema::standard();
    std::vector<std::string> header;
    for (const auto& s : fs.slots) header.push_back(s.name);
    header.push_back("label");
    std::string out = join(header, ",") + "\n";
    for (std::size_t r = 0; r < m.rows.size(); ++r) {
        std::vector<std::string> cells;
        for (double x : m.rows[r]) cells.push_back(strf("%g", x));
        cells.push_back(std::to_string(m.labels[r]));
        out += join(cells, ",") + "\n";
    }
    return out;
}

}  // namespace coref
