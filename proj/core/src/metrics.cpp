#include "kinemb/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace kinemb {

namespace {

void check_labels(const std::vector<double>& scores, const std::vector<int>& labels) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("scores and labels differ in length");
    if (scores.empty()) throw std::invalid_argument("no labeled scores");
    for (double s : scores)
        if (!std::isfinite(s)) throw std::invalid_argument("non-finite score");
    for (int l : labels)
        if (l != 1 && l != -1) throw std::invalid_argument("labels must be +1 or -1");
}

}  // namespace

double auroc(const std::vector<double>& scores, const std::vector<int>& labels) {
    check_labels(scores, labels);
    const auto n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

    // Midranks: every member of a tie group gets the group's average rank.
    std::vector<double> rank(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
        for (std::size_t k = i; k <= j; ++k) rank[order[k]] = mid;
        i = j + 1;
    }

    double pos_rank_sum = 0.0;
    std::size_t n_pos = 0;
    for (std::size_t k = 0; k < n; ++k) {
        if (labels[k] > 0) {
            pos_rank_sum += rank[k];
            ++n_pos;
        }
    }
    const std::size_t n_neg = n - n_pos;
    if (n_pos == 0 || n_neg == 0)
        throw std::invalid_argument("need both classes for AUROC (have " + std::to_string(n_pos) +
                                    " positives, " + std::to_string(n_neg) + " negatives)");
    const double u = pos_rank_sum - static_cast<double>(n_pos) *
                                        (static_cast<double>(n_pos) + 1.0) / 2.0;
    return u / (static_cast<double>(n_pos) * static_cast<double>(n_neg));
}

double auprc(const std::vector<double>& scores, const std::vector<int>& labels) {
    check_labels(scores, labels);
    const auto n = scores.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

    const auto total_pos = static_cast<double>(
        std::count_if(labels.begin(), labels.end(), [](int l) { return l > 0; }));
    if (total_pos == 0.0) throw std::invalid_argument("need at least one positive for AUPRC");

    double ap = 0.0;
    double tp = 0.0, fp = 0.0;
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && scores[order[j + 1]] == scores[order[i]]) ++j;
        double group_tp = 0.0, group_fp = 0.0;
        for (std::size_t k = i; k <= j; ++k) {
            if (labels[order[k]] > 0)
                group_tp += 1.0;
            else
                group_fp += 1.0;
        }
        tp += group_tp;
        fp += group_fp;
        if (group_tp > 0.0) {
            const double precision = tp / (tp + fp);
            const double delta_recall = group_tp / total_pos;
            ap += delta_recall * precision;
        }
        i = j + 1;
    }
    return ap;
}

double auroc(const std::vector<ScoredPair>& scored) {
    std::vector<double> scores;
    std::vector<int> labels;
    scores.reserve(scored.size());
    labels.reserve(scored.size());
    for (const auto& sp : scored) {
        scores.push_back(sp.score);
        labels.push_back(sp.label);
    }
    return auroc(scores, labels);
}

double auprc(const std::vector<ScoredPair>& scored) {
    std::vector<double> scores;
    std::vector<int> labels;
    scores.reserve(scored.size());
    labels.reserve(scored.size());
    for (const auto& sp : scored) {
        scores.push_back(sp.score);
        labels.push_back(sp.label);
    }
    return auprc(scores, labels);
}

}  // namespace kinemb
