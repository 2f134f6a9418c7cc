#pragma once

// Gradient-boosted decision trees for binary classification with logistic
// loss. Second-order boosting: per round the tree is grown by exact greedy
// splits on gain
//     1/2 [ GL^2/(HL+lambda) + GR^2/(HR+lambda) - G^2/(H+lambda) ] - gamma
// and leaves take the Newton step -G/(H+lambda). No subsampling, no
// histogram approximation; training is bit-deterministic. Ties in gain are
// broken toward the lowest feature index, then the lowest threshold.

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "coref/util.hpp"

namespace coref {

struct GbtConfig {
    double learning_rate = 0.1;
    int rounds = 200;
    int max_depth = 6;
    double lambda_l2 = 1.0;
    double gamma_min_gain = 0.0;
    double min_child_hessian = 1.0;
    double base_score = 0.5;
    std::uint64_t seed = 0;  // reserved for optional subsampling
};

struct GbtNode {
    int feature = -1;  // -1: leaf
    double threshold = 0.0;  // x[feature] < threshold goes left
    int left = -1;
    int right = -1;
    double weight = 0.0;  // leaf value, already scaled by the learning rate
};

struct GbtTree {
    std::vector<GbtNode> nodes;

    double value(const std::vector<double>& x) const {
        int at = 0;
        while (nodes[size_t(at)].feature >= 0) {
            const GbtNode& n = nodes[size_t(at)];
            at = x[size_t(n.feature)] < n.threshold ? n.left : n.right;
        }
        return nodes[size_t(at)].weight;
    }
};

struct GbtModel {
    std::string schema_fingerprint;  // fingerprint of the feature schema used at fit time
    int width = 0;
    double base_score = 0.5;
    GbtConfig config;
    std::vector<GbtTree> trees;
    std::vector<double> round_logloss;  // mean training log-loss after each round

    double margin(const std::vector<double>& x) const {
        if (int(x.size()) != width)
            throw version_error(strf("feature width mismatch: model fit on %d, got %zu", width,
                                     x.size()));
        double m = std::log(base_score / (1.0 - base_score));
        for (const auto& t : trees) m += t.value(x);
        return m;
    }
};

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline double predict_proba(const GbtModel& model, const std::vector<double>& x) {
    return sigmoid(model.margin(x));
}

namespace detail {

struct SplitChoice {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

// Exact greedy scan over all (feature, midpoint-threshold) pairs.
inline SplitChoice best_split(const std::vector<std::vector<double>>& X,
                              const std::vector<double>& g, const std::vector<double>& h,
                              const std::vector<int>& items, const GbtConfig& cfg) {
    SplitChoice best;
    double G = 0.0, H = 0.0;
    for (int i : items) {
        G += g[size_t(i)];
        H += h[size_t(i)];
    }
    const double lam = cfg.lambda_l2;
    const double parent_term = G * G / (H + lam);
    const int n_features = int(X[0].size());

    std::vector<std::pair<double, int>> order(items.size());
    for (int f = 0; f < n_features; ++f) {
        for (std::size_t k = 0; k < items.size(); ++k)
            order[k] = {X[size_t(items[k])][size_t(f)], items[k]};
        std::sort(order.begin(), order.end());
        double GL = 0.0, HL = 0.0;
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            GL += g[size_t(order[k].second)];
            HL += h[size_t(order[k].second)];
            if (order[k].first == order[k + 1].first) continue;  // not a cut point
            double HR = H - HL;
            if (HL < cfg.min_child_hessian || HR < cfg.min_child_hessian) continue;
            double GR = G - GL;
            double gain = 0.5 * (GL * GL / (HL + lam) + GR * GR / (HR + lam) - parent_term) -
                          cfg.gamma_min_gain;
            if (gain > best.gain + 1e-12 || !best.found) {
                if (gain <= 0.0) continue;
                best.found = true;
                best.feature = f;
                best.threshold = 0.5 * (order[k].first + order[k + 1].first);
                best.gain = gain;
            }
        }
    }
    return best;
}

inline int grow_node(GbtTree& tree, const std::vector<std::vector<double>>& X,
                     const std::vector<double>& g, const std::vector<double>& h,
                     const std::vector<int>& items, int depth, const GbtConfig& cfg) {
    double G = 0.0, H = 0.0;
    for (int i : items) {
        G += g[size_t(i)];
        H += h[size_t(i)];
    }
    SplitChoice split;
    if (depth < cfg.max_depth && items.size() >= 2) split = best_split(X, g, h, items, cfg);

    int at = int(tree.nodes.size());
    tree.nodes.emplace_back();
    if (!split.found) {
        tree.nodes[size_t(at)].weight = cfg.learning_rate * (-G / (H + cfg.lambda_l2));
        return at;
    }
    std::vector<int> left, right;
    for (int i : items) {
        if (X[size_t(i)][size_t(split.feature)] < split.threshold)
            left.push_back(i);
        else
            right.push_back(i);
    }
    tree.nodes[size_t(at)].feature = split.feature;
    tree.nodes[size_t(at)].threshold = split.threshold;
    tree.nodes[size_t(at)].left = grow_node(tree, X, g, h, left, depth + 1, cfg);
    tree.nodes[size_t(at)].right = grow_node(tree, X, g, h, right, depth + 1, cfg);
    return at;
}

}  // namespace detail

inline double mean_logloss(const std::vector<double>& margins, const std::vector<int>& y) {
    double loss = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) {
        double p = sigmoid(margins[i]);
        p = std::min(1.0 - 1e-15, std::max(1e-15, p));
        loss += y[i] ? -std::log(p) : -std::log(1.0 - p);
    }
    return loss / double(y.size());
}

inline GbtModel train_gbt(const std::vector<std::vector<double>>& X, const std::vector<int>& y,
                          const GbtConfig& cfg, const std::string& schema_fingerprint = "") {
    if (X.empty() || X.size() != y.size()) throw error("train_gbt: |X| must equal |y| >= 1");
    if (X[0].empty()) throw error("train_gbt: need at least one feature column");
    if (cfg.learning_rate <= 0 || cfg.rounds < 1 || cfg.max_depth < 1)
        throw error("train_gbt: invalid config");
    const std::size_t n = X.size();
    const std::size_t width = X[0].size();
    for (std::size_t i = 0; i < n; ++i) {
        if (X[i].size() != width) throw error("train_gbt: ragged feature matrix");
        for (double v : X[i])
            if (!std::isfinite(v)) throw error(strf("train_gbt: non-finite value in row %zu", i));
        if (y[i] != 0 && y[i] != 1) throw error("train_gbt: labels must be 0/1");
    }

    GbtModel model;
    model.schema_fingerprint = schema_fingerprint;
    model.width = int(width);
    model.base_score = cfg.base_score;
    model.config = cfg;

    const double base_margin = std::log(cfg.base_score / (1.0 - cfg.base_score));
    std::vector<double> margins(n, base_margin);
    std::vector<double> g(n), h(n);
    std::vector<int> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = int(i);

    for (int round = 0; round < cfg.rounds; ++round) {
        for (std::size_t i = 0; i < n; ++i) {
            double p = sigmoid(margins[i]);
            g[i] = p - double(y[i]);
            h[i] = p * (1.0 - p);
        }
        GbtTree tree;
        detail::grow_node(tree, X, g, h, all, 0, cfg);
        for (std::size_t i = 0; i < n; ++i) margins[i] += tree.value(X[i]);
        model.trees.push_back(std::move(tree));
        model.round_logloss.push_back(mean_logloss(margins, y));
    }
    return model;
}

// ---------------------------------------------------------------------------
// Evaluation report (per-class P/R/F1 plus micro average)
// ---------------------------------------------------------------------------

struct ClassifierReport {
    // index 0: class 0, index 1: class 1
    double precision[2] = {0, 0};
    double recall[2] = {0, 0};
    double f1[2] = {0, 0};
    long support[2] = {0, 0};
    double micro_p = 0, micro_r = 0, micro_f1 = 0;
    long total = 0;
};

inline ClassifierReport evaluate_classifier(const GbtModel& model,
                                            const std::vector<std::vector<double>>& X,
                                            const std::vector<int>& y,
                                            double threshold = 0.5) {
    long tp[2] = {0, 0}, pred[2] = {0, 0}, gold[2] = {0, 0};
    for (std::size_t i = 0; i < X.size(); ++i) {
        int p = predict_proba(model, X[i]) >= threshold ? 1 : 0;
        ++pred[p];
        ++gold[y[i]];
        if (p == y[i]) ++tp[p];
    }
    ClassifierReport r;
    long tp_sum = 0;
    for (int c = 0; c < 2; ++c) {
        r.precision[c] = pred[c] ? double(tp[c]) / double(pred[c]) : 0.0;
        r.recall[c] = gold[c] ? double(tp[c]) / double(gold[c]) : 0.0;
        double pr = r.precision[c] + r.recall[c];
        r.f1[c] = pr > 0 ? 2.0 * r.precision[c] * r.recall[c] / pr : 0.0;
        r.support[c] = gold[c];
        tp_sum += tp[c];
    }
    r.total = long(X.size());
    r.micro_p = r.total ? double(tp_sum) / double(r.total) : 0.0;
    r.micro_r = r.micro_p;  // every instance carries one prediction and one label
    r.micro_f1 = r.micro_p;
    return r;
}

inline std::string thousands(long v) {
    std::string digits = std::to_string(v);
    std::string out;
    int cnt = 0;
    for (int i = int(digits.size()) - 1; i >= 0; --i) {
        out += digits[size_t(i)];
        if (++cnt % 3 == 0 && i > 0) out += ',';
    }
    std::reverse(out.begin(), out.end());
    return out;
}

inline std::string format_classifier_report(const ClassifierReport& r) {
    std::string out = "Category    P     R     F1    Num.\n";
    for (int c = 0; c < 2; ++c)
        out += strf("%-9d %.2f  %.2f  %.2f  %s\n", c, r.precision[c], r.recall[c], r.f1[c],
                    thousands(r.support[c]).c_str());
    out += strf("Micro Avg %.2f  %.2f  %.2f  %s\n", r.micro_p, r.micro_r, r.micro_f1,
                thousands(r.total).c_str());
    return out;
}

// ---------------------------------------------------------------------------
// Versioned text serialization (exact round-trip)
// ---------------------------------------------------------------------------

inline std::string serialize_gbt(const GbtModel& m) {
    std::string out = "corefkit gbt model v1\n";
    out += "schema " + (m.schema_fingerprint.empty() ? "-" : m.schema_fingerprint) + "\n";
    out += "width " + std::to_string(m.width) + "\n";
    out += "base_score " + fmt_double(m.base_score) + "\n";
    out += strf("config learning_rate %s rounds %d max_depth %d lambda %s gamma %s "
                "min_child_hessian %s\n",
                fmt_double(m.config.learning_rate).c_str(), m.config.rounds, m.config.max_depth,
                fmt_double(m.config.lambda_l2).c_str(), fmt_double(m.config.gamma_min_gain).c_str(),
                fmt_double(m.config.min_child_hessian).c_str());
    out += "trees " + std::to_string(m.trees.size()) + "\n";
    for (const auto& t : m.trees) {
        out += "tree " + std::to_string(t.nodes.size()) + "\n";
        for (const auto& n : t.nodes) {
            if (n.feature < 0)
                out += "l " + fmt_double(n.weight) + "\n";
            else
                out += strf("s %d %s %d %d\n", n.feature, fmt_double(n.threshold).c_str(), n.left,
                            n.right);
        }
    }
    return out;
}

inline GbtModel parse_gbt(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    auto next = [&]() -> std::string {
        if (!std::getline(in, line)) throw format_error("gbt model: truncated file");
        return line;
    };
    if (next() != "corefkit gbt model v1")
        throw version_error("gbt model: unknown file version");
    GbtModel m;
    std::vector<std::string> f = split_ws(next());
    if (f.size() != 2 || f[0] != "schema") throw format_error("gbt model: bad schema line");
    m.schema_fingerprint = f[1] == "-" ? "" : f[1];
    f = split_ws(next());
    if (f.size() != 2 || f[0] != "width") throw format_error("gbt model: bad width line");
    m.width = to_int(f[1], "width");
    f = split_ws(next());
    if (f.size() != 2 || f[0] != "base_score") throw format_error("gbt model: bad base_score");
    m.base_score = to_double(f[1], "base_score");
    f = split_ws(next());
    if (f.size() != 13 || f[0] != "config") throw format_error("gbt model: bad config line");
    m.config.learning_rate = to_double(f[2], "learning_rate");
    m.config.rounds = to_int(f[4], "rounds");
    m.config.max_depth = to_int(f[6], "max_depth");
    m.config.lambda_l2 = to_double(f[8], "lambda");
    m.config.gamma_min_gain = to_double(f[10], "gamma");
    m.config.min_child_hessian = to_double(f[12], "min_child_hessian");
    f = split_ws(next());
    if (f.size() != 2 || f[0] != "trees") throw format_error("gbt model: bad trees line");
    int n_trees = to_int(f[1], "tree count");
    for (int t = 0; t < n_trees; ++t) {
        f = split_ws(next());
        if (f.size() != 2 || f[0] != "tree") throw format_error("gbt model: bad tree header");
        int n_nodes = to_int(f[1], "node count");
        GbtTree tree;
        for (int k = 0; k < n_nodes; ++k) {
            f = split_ws(next());
            GbtNode node;
            if (f.size() == 2 && f[0] == "l") {
                node.weight = to_double(f[1], "leaf weight");
            } else if (f.size() == 5 && f[0] == "s") {
                node.feature = to_int(f[1], "feature");
                node.threshold = to_double(f[2], "threshold");
                node.left = to_int(f[3], "left");
                node.right = to_int(f[4], "right");
            } else {
                throw format_error("gbt model: bad node line '" + line + "'");
            }
            tree.nodes.push_back(node);
        }
        m.trees.push_back(std::move(tree));
    }
    return m;
}

inline void save_gbt(const std::string& path, const GbtModel& m) {
    write_file(path, serialize_gbt(m));
}

inline GbtModel load_gbt(const std::string& path) { return parse_gbt(read_file(path)); }

}  // namespace coref
