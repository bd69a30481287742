#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace cazsl {

struct ScoredClass {
  std::string class_name;
  double score = 0.0;
};

// Candidates ordered by descending score.  Ties keep the original candidate
// order, so the winner under a full tie is the first candidate listed.
struct Ranking {
  std::vector<ScoredClass> ranked;
  bool degenerate_tie = false;  // every candidate scored identically

  const std::string& predicted() const { return ranked.front().class_name; }
};

Ranking make_ranking(const std::vector<std::string>& candidates, const Eigen::VectorXd& scores);

}  // namespace cazsl
