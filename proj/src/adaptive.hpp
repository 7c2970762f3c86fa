#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "optimize.hpp"
#include "personick.hpp"
#include "prior.hpp"
#include "states.hpp"

namespace bqpe {

enum class ExpandPolicy { AllBranches, LeftmostPath };

struct AdaptiveOptions {
  int grid_nodes = Prior::kDefaultGridNodes;
  OptimizeOptions optimize;
  bool reoptimize = true;
  int max_all_branch_depth = 12;
};

// One node of the measurement tree: the prior entering step `step`, the
// probe used there, its estimator solution, and the two outcome branches.
// Outcome indices are 1-based and ordered by descending estimate.
struct AdaptiveNode {
  int step = 1;
  std::vector<int> outcome_path;
  Prior prior = Prior::flat();
  FockSuperposition state;
  PersonickSolution solution;
  std::array<double, 2> outcome_probabilities{0.0, 0.0};
  std::array<bool, 2> unreachable{false, false};
  std::array<std::unique_ptr<AdaptiveNode>, 2> children;
};

struct AdaptiveTree {
  std::unique_ptr<AdaptiveNode> root;
  int depth = 0;
  ExpandPolicy policy = ExpandPolicy::AllBranches;
  // AllBranches: smallest node mmse per step; LeftmostPath: the path values.
  std::vector<double> step_best_mmse;
};

// phi -> |<projector|state(phi)>|^2 for single-photon states.
std::function<double(double)> born_likelihood(const FockSuperposition& state,
                                              const Eigen::Vector2cd& projector);

// Creates both outcome branches of a node: Bayes posterior, re-optimized
// probe (or the parent probe when reoptimize is off), estimator solution.
// Zero-probability outcomes are marked unreachable instead of expanded.
void expand(AdaptiveNode& node, const AdaptiveOptions& options);

AdaptiveTree run_tree(const Prior& initial_prior, int depth, ExpandPolicy policy,
                      const AdaptiveOptions& options = {});

struct ComparisonRow {
  int step = 0;
  double adaptive_mmse = 0.0;
  double single_shot_mmse = 0.0;
};

// Adaptive column from the tree's per-step values; single-shot column from
// one optimized n = step probe against the unchanged initial prior.
std::vector<ComparisonRow> compare_single_shot(const AdaptiveTree& tree,
                                               const Prior& initial_prior,
                                               const OptimizeOptions& options = {});
std::vector<ComparisonRow> compare_single_shot(const Prior& initial_prior,
                                               int max_steps,
                                               const AdaptiveOptions& options = {});

// Error of a single-photon probe against two spikes of width spike_width
// separated by pi; tends to pi^2/4 as the width shrinks.
double delta_infinity_check(double spike_width = 1e-3);

// Nodes keyed by comma-joined outcome path ("" for the root); priors are
// downsampled to at most 256 nodes.
std::string tree_to_json(const AdaptiveTree& tree);

}  // namespace bqpe
