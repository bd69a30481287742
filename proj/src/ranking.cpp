#include "cazsl/ranking.hpp"

#include <algorithm>
#include <numeric>

#include "cazsl/errors.hpp"

namespace cazsl {

Ranking make_ranking(const std::vector<std::string>& candidates, const Eigen::VectorXd& scores) {
  if (candidates.empty()) throw EmptyCandidates("cannot rank an empty candidate set");
  if (static_cast<Eigen::Index>(candidates.size()) != scores.size())
    throw DimensionMismatch("score vector does not match candidate count");
  std::vector<int> order(candidates.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return scores[a] > scores[b]; });
  Ranking r;
  r.ranked.reserve(candidates.size());
  for (int idx : order) r.ranked.push_back({candidates[idx], scores[idx]});
  r.degenerate_tie = scores.size() > 1 && scores.minCoeff() == scores.maxCoeff();
  return r;
}

}  // namespace cazsl
