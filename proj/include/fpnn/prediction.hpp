#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fpnn {

/// Outcome of classifying one query. `scores` are classifier-specific
/// (log-posteriors up to a shared constant for the density classifiers,
/// votes for k-NN, negated distances for nearest centroid); `class_index`
/// is always one of their maxima. Ties go to the smallest index unless the
/// classifier documents its own tie-break.
struct Prediction {
  std::size_t class_index = 0;
  std::vector<double> scores;
};

/// Index of the largest score; the first one wins ties.
inline std::size_t argmax(std::span<const double> scores) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < scores.size(); ++c)
    if (scores[c] > scores[best]) best = c;
  return best;
}

inline Prediction make_prediction(std::vector<double> scores) {
  const auto best = argmax(scores);
  return {best, std::move(scores)};
}

}  // namespace fpnn
