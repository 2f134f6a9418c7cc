#pragma once

// Penn-Treebank-style bracketed constituency trees: parsing, canonical
// serialization, and overt-token span bookkeeping. Function tags, numeric
// coindices, gap indices ("NP=2") and empty categories (-NONE-) are kept.

#include <cctype>
#include <optional>
#include <string>
#include <vector>

#include "coref/util.hpp"

namespace coref {

struct Token {
    std::string form;
    std::string pos;
    bool operator==(const Token&) const = default;
};

struct TreeNode {
    std::string category;                    // "NP" from "NP-SBJ-1"; escapes ("-NONE-", "-LRB-") verbatim
    std::vector<std::string> function_tags;  // "SBJ", "CLR", ...
    std::optional<int> coindex;              // trailing "-1"
    std::optional<int> gap_index;            // "=2"
    std::vector<TreeNode> children;
    std::optional<Token> leaf;               // set iff preterminal; leaf->pos == category

    // Half-open interval over the sentence's overt tokens; zero-width for
    // nodes dominating only empty categories. Filled by parse/compute_spans.
    int span_begin = 0;
    int span_end = 0;

    bool is_leaf() const { return leaf.has_value(); }
    bool is_empty_category() const { return is_leaf() && category == "-NONE-"; }
    int span_size() const { return span_end - span_begin; }

    // Structural equality; derived spans are not compared.
    bool operator==(const TreeNode& o) const {
        return category == o.category && function_tags == o.function_tags &&
               coindex == o.coindex && gap_index == o.gap_index && leaf == o.leaf &&
               children == o.children;
    }
};

struct ParsedSentence {
    TreeNode root;
    std::vector<Token> tokens;  // overt tokens only, left to right

    bool operator==(const ParsedSentence& o) const {
        return root == o.root && tokens == o.tokens;
    }
};

// Path from the root: child indices. Empty path addresses the root.
using NodePath = std::vector<int>;

namespace detail {

inline void decompose_label(const std::string& label, TreeNode& node, std::size_t offset) {
    if (label.empty()) {
        node.category = "TOP";  // PTB .mrg files wrap trees in an unlabeled pair
        return;
    }
    if (label[0] == '-') {
        // -NONE-, -LRB-, -RRB-, ... taken verbatim
        node.category = label;
        return;
    }
    std::vector<std::string> segs = split(label, '-');
    for (std::size_t i = 0; i < segs.size(); ++i) {
        std::string seg = segs[i];
        std::optional<int> gap;
        std::size_t eq = seg.find('=');
        if (eq != std::string::npos) {
            std::string gap_str = seg.substr(eq + 1);
            if (!all_digits(gap_str))
                throw parse_error("bad gap index in label '" + label + "'", offset);
            gap = std::stoi(gap_str);
            seg = seg.substr(0, eq);
        }
        if (i == 0) {
            if (seg.empty()) throw parse_error("empty category in label '" + label + "'", offset);
            node.category = seg;
        } else if (all_digits(seg)) {
            node.coindex = std::stoi(seg);
        } else if (!seg.empty()) {
            node.function_tags.push_back(seg);
        }
        if (gap) node.gap_index = gap;
    }
}

inline std::string assemble_label(const TreeNode& n) {
    std::string out = n.category;
    for (const auto& t : n.function_tags) out += "-" + t;
    if (n.gap_index) out += "=" + std::to_string(*n.gap_index);
    if (n.coindex) out += "-" + std::to_string(*n.coindex);
    return out;
}

struct Cursor {
    const std::string& text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace((unsigned char)text[pos])) ++pos;
    }
    bool done() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() const { return pos < text.size() ? text[pos] : '\0'; }
    std::string read_atom() {
        std::size_t start = pos;
        while (pos < text.size() && !std::isspace((unsigned char)text[pos]) &&
               text[pos] != '(' && text[pos] != ')')
            ++pos;
        return text.substr(start, pos - start);
    }
};

inline TreeNode parse_node(Cursor& c) {
    c.skip_ws();
    if (c.peek() != '(') throw parse_error("expected '('", c.pos);
    std::size_t open_at = c.pos;
    ++c.pos;
    c.skip_ws();
    TreeNode node;
    std::size_t label_at = c.pos;
    std::string label = c.read_atom();
    decompose_label(label, node, label_at);
    c.skip_ws();
    if (c.peek() == '(') {
        while (true) {
            c.skip_ws();
            if (c.peek() == ')') break;
            if (c.peek() == '(') {
                node.children.push_back(parse_node(c));
            } else if (c.peek() == '\0') {
                throw parse_error("unbalanced brackets: unclosed '('", open_at);
            } else {
                throw parse_error("unexpected token inside internal node", c.pos);
            }
        }
        ++c.pos;  // ')'
        if (node.children.empty())
            throw parse_error("node '" + label + "' has no children and no token", open_at);
    } else {
        std::string form = c.read_atom();
        if (form.empty()) {
            if (c.peek() == ')')
                throw parse_error("node '" + label + "' has no children and no token", open_at);
            throw parse_error("unbalanced brackets: unclosed '('", open_at);
        }
        node.leaf = Token{form, node.category};
        c.skip_ws();
        if (c.peek() != ')')
            throw parse_error("expected ')' after leaf token", c.pos);
        ++c.pos;
    }
    return node;
}

inline void fill_spans(TreeNode& node, std::vector<Token>& tokens) {
    if (node.is_leaf()) {
        int at = int(tokens.size());
        if (node.is_empty_category()) {
            node.span_begin = node.span_end = at;  // zero-width, anchored in place
        } else {
            tokens.push_back(*node.leaf);
            node.span_begin = at;
            node.span_end = at + 1;
        }
        return;
    }
    for (auto& child : node.children) fill_spans(child, tokens);
    node.span_begin = node.children.front().span_begin;
    node.span_end = node.children.back().span_end;
}

inline void serialize_node(const TreeNode& n, std::string& out) {
    out += '(';
    out += assemble_label(n);
    if (n.is_leaf()) {
        out += ' ';
        out += n.leaf->form;
    } else {
        for (const auto& c : n.children) {
            out += ' ';
            serialize_node(c, out);
        }
    }
    out += ')';
}

}  // namespace detail

// Recompute overt-token spans and the token list for a (possibly hand-built) tree.
inline std::vector<Token> compute_spans(TreeNode& root) {
    std::vector<Token> tokens;
    detail::fill_spans(root, tokens);
    return tokens;
}

// Parse a single bracketed tree. The whole input must be consumed.
inline ParsedSentence parse_tree(const std::string& text) {
    detail::Cursor c{text};
    if (c.done()) throw parse_error("empty input", 0);
    ParsedSentence s;
    s.root = detail::parse_node(c);
    if (!c.done()) throw parse_error("unbalanced brackets: trailing text after tree", c.pos);
    s.tokens = compute_spans(s.root);
    return s;
}

// Parse a whitespace-separated sequence of trees (.mrg file contents).
inline std::vector<ParsedSentence> parse_trees(const std::string& text) {
    std::vector<ParsedSentence> out;
    detail::Cursor c{text};
    while (!c.done()) {
        ParsedSentence s;
        s.root = detail::parse_node(c);
        s.tokens = compute_spans(s.root);
        out.push_back(std::move(s));
    }
    return out;
}

// Canonical form: single line, one space between elements.
inline std::string serialize_tree(const ParsedSentence& s) {
    std::string out;
    detail::serialize_node(s.root, out);
    return out;
}

inline std::vector<ParsedSentence> read_treebank_file(const std::string& path) {
    return parse_trees(read_file(path));
}

inline void write_treebank_file(const std::string& path, const std::vector<ParsedSentence>& trees) {
    std::string out;
    for (const auto& t : trees) {
        out += serialize_tree(t);
        out += '\n';
    }
    write_file(path, out);
}

// Preorder traversal carrying the node path. Fn: (const TreeNode&, const NodePath&).
template <typename Fn>
void visit_nodes(const TreeNode& root, Fn fn) {
    NodePath path;
    auto walk = [&](auto&& self, const TreeNode& node) -> void {
        fn(node, path);
        for (int i = 0; i < int(node.children.size()); ++i) {
            path.push_back(i);
            self(self, node.children[i]);
            path.pop_back();
        }
    };
    walk(walk, root);
}

inline const TreeNode* node_at(const TreeNode& root, const NodePath& path) {
    const TreeNode* n = &root;
    for (int i : path) {
        if (i < 0 || i >= int(n->children.size())) return nullptr;
        n = &n->children[size_t(i)];
    }
    return n;
}

inline std::string sentence_text(const ParsedSentence& s) {
    std::vector<std::string> forms;
    forms.reserve(s.tokens.size());
    for (const auto& t : s.tokens) forms.push_back(t.form);
    return join(forms, " ");
}

}  // namespace coref
