#pragma once

#include <vector>

#include "kinemb/scoring.hpp"

namespace kinemb {

/// Probability that a random positive outscores a random negative, ties
/// counted half — computed exactly via midranks, no curve interpolation.
/// Labels are +1/-1; both classes must be present.
double auroc(const std::vector<double>& scores, const std::vector<int>& labels);
double auroc(const std::vector<ScoredPair>& scored);

/// Average precision by descending-score step integration; pairs with equal
/// scores enter as one step. Needs at least one positive.
double auprc(const std::vector<double>& scores, const std::vector<int>& labels);
double auprc(const std::vector<ScoredPair>& scored);

}  // namespace kinemb
