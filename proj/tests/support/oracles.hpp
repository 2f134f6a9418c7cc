#pragma once

// Independent brute-force oracles used by tests. These deliberately avoid the
// library's own search strategies: assignment by permutation enumeration,
// split search by direct (feature, midpoint) scanning.

#include <algorithm>
#include <vector>

#include "coref/gbt.hpp"

namespace oracles {

// exhaustive max-weight matching; handles rectangles by transposing
inline double brute_force_assignment(const std::vector<std::vector<double>>& w) {
    std::size_t rows = w.size(), cols = w.empty() ? 0 : w[0].size();
    if (rows == 0 || cols == 0) return 0.0;
    bool transpose = rows > cols;
    std::vector<std::vector<double>> m;
    if (transpose) {
        m.assign(cols, std::vector<double>(rows));
        for (std::size_t i = 0; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j) m[j][i] = w[i][j];
        std::swap(rows, cols);
    } else {
        m = w;
    }
    std::vector<int> perm(cols);
    for (std::size_t j = 0; j < cols; ++j) perm[j] = int(j);
    double best = -1e300;
    do {
        double total = 0;
        for (std::size_t i = 0; i < rows; ++i) total += m[i][size_t(perm[i])];
        best = std::max(best, total);
    } while (std::next_permutation(perm.begin(), perm.end()));
    return best;
}

struct BruteSplit {
    bool found = false;
    int feature = -1;
    double threshold = 0.0;
    double gain = 0.0;
};

// every feature, every midpoint between adjacent distinct values, direct
// summation; the strict-improvement epsilon mirrors the trainer so ties
// resolve to the same (lowest feature, lowest threshold) choice
inline BruteSplit brute_best_split(const std::vector<std::vector<double>>& X,
                                   const std::vector<double>& g, const std::vector<double>& h,
                                   const coref::GbtConfig& cfg) {
    BruteSplit best;
    const int n = int(X.size());
    const int width = int(X[0].size());
    for (int f = 0; f < width; ++f) {
        std::vector<double> values;
        for (int i = 0; i < n; ++i) values.push_back(X[size_t(i)][size_t(f)]);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t k = 0; k + 1 < values.size(); ++k) {
            double thr = 0.5 * (values[k] + values[k + 1]);
            double GL = 0, HL = 0, GR = 0, HR = 0;
            for (int i = 0; i < n; ++i) {
                if (X[size_t(i)][size_t(f)] < thr) {
                    GL += g[size_t(i)];
                    HL += h[size_t(i)];
                } else {
                    GR += g[size_t(i)];
                    HR += h[size_t(i)];
                }
            }
            if (HL < cfg.min_child_hessian || HR < cfg.min_child_hessian) continue;
            double G = GL + GR, H = HL + HR;
            double gain = 0.5 * (GL * GL / (HL + cfg.lambda_l2) + GR * GR / (HR + cfg.lambda_l2) -
                                 G * G / (H + cfg.lambda_l2)) -
                          cfg.gamma_min_gain;
            if (gain <= 0.0) continue;
            if (!best.found || gain > best.gain + 1e-12) {
                best.found = true;
                best.feature = f;
                best.threshold = thr;
                best.gain = gain;
            }
        }
    }
    return best;
}

}  // namespace oracles
