#include "adaptive.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "errors.hpp"

namespace bqpe {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::complex<double> kI{0.0, 1.0};

FockSuperposition node_state(const Prior& prior, const AdaptiveOptions& options,
                             const FockSuperposition* parent_state) {
  if (parent_state && !options.reoptimize) return *parent_state;
  return optimize_coefficients(1, prior, /*allow_phases=*/true, options.optimize)
      .state;
}

std::unique_ptr<AdaptiveNode> make_node(int step, std::vector<int> path, Prior prior,
                                        const AdaptiveOptions& options,
                                        const FockSuperposition* parent_state) {
  auto node = std::make_unique<AdaptiveNode>();
  node->step = step;
  node->outcome_path = std::move(path);
  node->prior = std::move(prior);
  node->state = node_state(node->prior, options, parent_state);
  node->solution = solve(node->state, node->prior);
  return node;
}

std::string path_key(const std::vector<int>& path) {
  std::string key;
  for (size_t i = 0; i < path.size(); ++i) {
    if (i) key += ',';
    key += std::to_string(path[i]);
  }
  return key;
}

}  // namespace

std::function<double(double)> born_likelihood(const FockSuperposition& state,
                                              const Eigen::Vector2cd& projector) {
  if (state.n != 1)
    throw UnsupportedError("born_likelihood: only single-photon probes");
  if (std::abs(projector.norm() - 1.0) > 1e-9)
    throw std::invalid_argument("born_likelihood: projector is not normalized");
  const std::complex<double> c0 = std::conj(projector(0)) * state.coeffs[0];
  const std::complex<double> c1 = std::conj(projector(1)) * state.coeffs[1];
  return [c0, c1](double phi) {
    const double p = std::norm(c0 * std::exp(-kI * phi) + c1 * std::exp(kI * phi));
    return std::clamp(p, 0.0, 1.0);
  };
}

void expand(AdaptiveNode& node, const AdaptiveOptions& options) {
  for (int j = 0; j < 2; ++j) {
    const Eigen::Vector2cd projector = node.solution.measurement.projectors.col(j);
    const auto likelihood = born_likelihood(node.state, projector);
    try {
      PriorUpdate update = node.prior.bayes_update(likelihood, options.grid_nodes);
      node.outcome_probabilities[j] = update.evidence;
      std::vector<int> path = node.outcome_path;
      path.push_back(j + 1);
      node.children[j] = make_node(node.step + 1, std::move(path),
                                   std::move(update.posterior), options, &node.state);
    } catch (const DegeneratePosteriorError&) {
      node.outcome_probabilities[j] = 0.0;
      node.unreachable[j] = true;
    }
  }
}

AdaptiveTree run_tree(const Prior& initial_prior, int depth, ExpandPolicy policy,
                      const AdaptiveOptions& options) {
  if (depth < 1) throw std::domain_error("run_tree: depth must be >= 1");
  if (policy == ExpandPolicy::AllBranches && depth > options.max_all_branch_depth)
    throw UnsupportedError("run_tree: depth cap exceeded for all-branches expansion");

  AdaptiveTree tree;
  tree.depth = depth;
  tree.policy = policy;
  tree.root = make_node(1, {}, initial_prior, options, nullptr);
  tree.step_best_mmse.assign(depth, std::numeric_limits<double>::quiet_NaN());

  std::deque<AdaptiveNode*> frontier{tree.root.get()};
  for (int step = 1; step <= depth; ++step) {
    double best = std::numeric_limits<double>::infinity();
    for (AdaptiveNode* n : frontier) best = std::min(best, n->solution.mmse);
    tree.step_best_mmse[step - 1] = (policy == ExpandPolicy::AllBranches)
                                        ? best
                                        : frontier.front()->solution.mmse;
    if (step == depth) break;

    std::deque<AdaptiveNode*> next;
    for (AdaptiveNode* n : frontier) {
      expand(*n, options);
      if (policy == ExpandPolicy::LeftmostPath) {
        if (n->children[0]) next.push_back(n->children[0].get());
        break;  // only the leftmost node of the level expands
      }
      for (int j = 0; j < 2; ++j)
        if (n->children[j]) next.push_back(n->children[j].get());
    }
    if (next.empty())
      throw DegeneratePosteriorError("run_tree: every branch became unreachable");
    frontier = std::move(next);
  }
  return tree;
}

std::vector<ComparisonRow> compare_single_shot(const AdaptiveTree& tree,
                                               const Prior& initial_prior,
                                               const OptimizeOptions& options) {
  if (tree.depth > 10)
    throw std::domain_error(
        "compare_single_shot: single-probe column is capped at 10 photons");
  std::vector<ComparisonRow> rows(tree.depth);
  for (int s = 1; s <= tree.depth; ++s) {
    rows[s - 1].step = s;
    rows[s - 1].adaptive_mmse = tree.step_best_mmse[s - 1];
    rows[s - 1].single_shot_mmse =
        optimize_coefficients(s, initial_prior, /*allow_phases=*/false, options).mmse;
  }
  return rows;
}

std::vector<ComparisonRow> compare_single_shot(const Prior& initial_prior,
                                               int max_steps,
                                               const AdaptiveOptions& options) {
  if (max_steps < 1 || max_steps > 10)
    throw std::domain_error("compare_single_shot: max_steps must be 1..10");
  const ExpandPolicy policy =
      max_steps <= 5 ? ExpandPolicy::AllBranches : ExpandPolicy::LeftmostPath;
  const AdaptiveTree tree = run_tree(initial_prior, max_steps, policy, options);
  return compare_single_shot(tree, initial_prior, options.optimize);
}

double delta_infinity_check(double spike_width) {
  if (!(spike_width > 0.0 && spike_width < 0.5))
    throw std::domain_error("delta_infinity_check: width outside (0, 0.5)");
  const double target = kTwoPi / (spike_width / 16.0);
  const int nodes = std::clamp(int(target) + 1, 4097, 4'000'000);
  std::vector<double> phi(nodes), dens(nodes);
  const double h = kTwoPi / (nodes - 1);
  const double c1 = std::numbers::pi / 2.0, c2 = 3.0 * std::numbers::pi / 2.0;
  const double peak = 1.0 / (2.0 * spike_width);
  for (int i = 0; i < nodes; ++i) {
    phi[i] = h * i;
    const double d1 = std::abs(phi[i] - c1), d2 = std::abs(phi[i] - c2);
    dens[i] = peak * (std::max(0.0, 1.0 - d1 / spike_width) +
                      std::max(0.0, 1.0 - d2 / spike_width));
  }
  const Prior prior = Prior::grid(std::move(phi), std::move(dens));
  return solve(noon(1), prior).mmse;
}

std::string tree_to_json(const AdaptiveTree& tree) {
  using nlohmann::json;
  json nodes = json::object();

  const std::function<void(const AdaptiveNode&)> emit = [&](const AdaptiveNode& n) {
    json entry;
    entry["step"] = n.step;
    entry["mmse"] = n.solution.mmse;
    json coeffs = json::array();
    for (const auto& c : n.state.coeffs) coeffs.push_back({c.real(), c.imag()});
    entry["coefficients"] = coeffs;
    json b = json::array();
    for (Eigen::Index r = 0; r < n.solution.b_op.rows(); ++r) {
      json row = json::array();
      for (Eigen::Index c = 0; c < n.solution.b_op.cols(); ++c)
        row.push_back({n.solution.b_op(r, c).real(), n.solution.b_op(r, c).imag()});
      b.push_back(row);
    }
    entry["b"] = b;
    entry["estimates"] = n.solution.measurement.estimates;
    entry["probabilities"] = n.outcome_probabilities;
    entry["unreachable"] = n.unreachable;

    constexpr int kExportNodes = 256;
    json grid_phi = json::array(), grid_density = json::array();
    const double lo = n.prior.support_lo(), hi = n.prior.support_hi();
    for (int i = 0; i < kExportNodes; ++i) {
      const double x = lo + (hi - lo) * i / double(kExportNodes - 1);
      grid_phi.push_back(x);
      grid_density.push_back(n.prior.density(x));
    }
    entry["prior"] = {{"phi", grid_phi}, {"density", grid_density}};

    nodes[path_key(n.outcome_path)] = std::move(entry);
    for (const auto& child : n.children)
      if (child) emit(*child);
  };
  emit(*tree.root);

  json doc;
  doc["depth"] = tree.depth;
  doc["policy"] =
      tree.policy == ExpandPolicy::AllBranches ? "all-branches" : "leftmost-path";
  doc["step_best_mmse"] = tree.step_best_mmse;
  doc["nodes"] = std::move(nodes);
  return doc.dump(2);
}

}  // namespace bqpe
