// bqpe command-line front end. Talks to the library exclusively through the
// C interface in bqpe/bqpe.h.

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bqpe/bqpe.h"

namespace {

using nlohmann::json;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct PriorDeleter {
  void operator()(bqpe_prior* p) const { bqpe_prior_free(p); }
};
struct StateDeleter {
  void operator()(bqpe_state* s) const { bqpe_state_free(s); }
};
struct SolutionDeleter {
  void operator()(bqpe_solution* s) const { bqpe_solution_free(s); }
};
struct OptDeleter {
  void operator()(bqpe_opt_result* r) const { bqpe_opt_result_free(r); }
};
struct TreeDeleter {
  void operator()(bqpe_tree* t) const { bqpe_tree_free(t); }
};
using PriorPtr = std::unique_ptr<bqpe_prior, PriorDeleter>;
using StatePtr = std::unique_ptr<bqpe_state, StateDeleter>;
using SolutionPtr = std::unique_ptr<bqpe_solution, SolutionDeleter>;
using OptPtr = std::unique_ptr<bqpe_opt_result, OptDeleter>;
using TreePtr = std::unique_ptr<bqpe_tree, TreeDeleter>;

// Raised on non-OK library status; carries the mapped process exit code.
struct CommandError : std::runtime_error {
  CommandError(int code, const std::string& what)
      : std::runtime_error(what), exit_code(code) {}
  int exit_code;
};

void check(bqpe_status status) {
  if (status == BQPE_OK) return;
  const int code = status == BQPE_ERR_PARSE ? kExitUsage : kExitNumeric;
  throw CommandError(code, bqpe_last_error());
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

std::string fmt_complex(double re, double im) {
  if (std::abs(im) < 1e-12) return fmt(re);
  return fmt(re) + (im < 0 ? "-" : "+") + fmt(std::abs(im)) + "i";
}

// Tabular results rendered as CSV (default) or a JSON array of objects.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  std::string render(const std::string& format) const {
    std::ostringstream out;
    if (format == "json") {
      json arr = json::array();
      for (const auto& row : rows) {
        json obj = json::object();
        for (size_t c = 0; c < header.size(); ++c)
          obj[header[c]] = c < row.size() ? row[c] : "";
        arr.push_back(std::move(obj));
      }
      out << arr.dump(2) << '\n';
      return out.str();
    }
    for (size_t c = 0; c < header.size(); ++c)
      out << (c ? "," : "") << header[c];
    out << '\n';
    for (const auto& row : rows) {
      for (size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << row[c];
      out << '\n';
    }
    return out.str();
  }
};

void write_output(const std::string& text, const std::string& path) {
  if (path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw CommandError(kExitNumeric, "cannot open output file: " + path);
  out << text;
}

std::vector<double> parse_double_list(const std::string& csv) {
  std::vector<double> values;
  std::istringstream in(csv);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      values.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw CommandError(kExitUsage, "cannot parse list entry: '" + item + "'");
    }
  }
  if (values.empty()) throw CommandError(kExitUsage, "empty list: '" + csv + "'");
  return values;
}

std::vector<int> parse_int_list(const std::string& csv) {
  std::vector<int> values;
  for (double v : parse_double_list(csv)) values.push_back(int(v));
  return values;
}

// Shared flags; JSON config files mirror the long option names and
// command-line flags override file values.
struct CommonOpts {
  std::string config_path;
  std::string out_path;
  std::string format = "csv";
  uint64_t seed = 1;
  int restarts = 16;
  int grid_nodes = 4096;

  json config;

  void add_to(CLI::App* cmd, bool with_grid = true) {
    cmd->add_option("--config", config_path, "JSON config file mirroring the flags");
    cmd->add_option("--out", out_path, "output path (default: stdout)");
    cmd->add_option("--format", format, "csv|json")
        ->check(CLI::IsMember({"csv", "json", "text"}));
    cmd->add_option("--seed", seed, "optimizer seed");
    cmd->add_option("--restarts", restarts, "optimizer restarts");
    if (with_grid) cmd->add_option("--grid", grid_nodes, "posterior grid nodes");
  }

  void load_config(CLI::App* cmd) {
    if (config_path.empty()) return;
    std::ifstream in(config_path);
    if (!in) throw CommandError(kExitUsage, "cannot open config: " + config_path);
    try {
      in >> config;
    } catch (const std::exception& e) {
      throw CommandError(kExitUsage, std::string("bad config JSON: ") + e.what());
    }
    apply(cmd, "--out", out_path);
    apply(cmd, "--format", format);
    apply(cmd, "--seed", seed);
    apply(cmd, "--restarts", restarts);
    apply(cmd, "--grid", grid_nodes);
  }

  template <typename T>
  void apply(CLI::App* cmd, const std::string& flag, T& target) const {
    const CLI::Option* opt = cmd->get_option_no_throw(flag);
    const std::string key = flag.substr(2);
    if (!config.contains(key)) return;
    if (opt && opt->count() > 0) return;  // explicit flag wins
    try {
      target = config.at(key).get<T>();
    } catch (const std::exception& e) {
      throw CommandError(kExitUsage, "bad config value for '" + key + "': " + e.what());
    }
  }
};

PriorPtr make_prior(const std::string& spec) {
  bqpe_prior* p = nullptr;
  check(bqpe_prior_parse(spec.c_str(), &p));
  return PriorPtr(p);
}

StatePtr make_state(const std::string& spec) {
  bqpe_state* s = nullptr;
  check(bqpe_state_parse(spec.c_str(), &s));
  return StatePtr(s);
}

/* ---- mmse --------------------------------------------------------------- */

int cmd_mmse(const std::string& prior_spec, const std::string& state_spec,
             CommonOpts& opts) {
  const PriorPtr prior = make_prior(prior_spec);
  const StatePtr state = make_state(state_spec);
  bqpe_solution* raw = nullptr;
  check(bqpe_solve(state.get(), prior.get(), &raw));
  const SolutionPtr sol(raw);

  const int dim = bqpe_solution_dim(sol.get());
  const double mmse = bqpe_solution_mmse(sol.get());

  if (opts.format == "json") {
    json doc;
    doc["mmse"] = mmse;
    json b = json::array(), est = json::array(), proj = json::array();
    for (int r = 0; r < dim; ++r) {
      json row = json::array();
      for (int c = 0; c < dim; ++c) {
        double re = 0, im = 0;
        check(bqpe_solution_b_entry(sol.get(), r, c, &re, &im));
        row.push_back({re, im});
      }
      b.push_back(std::move(row));
    }
    for (int k = 0; k < dim; ++k) {
      double e = 0;
      check(bqpe_solution_estimate(sol.get(), k, &e));
      est.push_back(e);
      json column = json::array();
      for (int r = 0; r < dim; ++r) {
        double re = 0, im = 0;
        check(bqpe_solution_projector(sol.get(), k, r, &re, &im));
        column.push_back({re, im});
      }
      proj.push_back(std::move(column));
    }
    doc["b"] = std::move(b);
    doc["estimates"] = std::move(est);
    doc["projectors"] = std::move(proj);
    write_output(doc.dump(2) + "\n", opts.out_path);
    return kExitOk;
  }

  std::ostringstream out;
  out << "mmse = " << fmt(mmse) << "\n";
  out << "estimates:";
  for (int k = 0; k < dim; ++k) {
    double e = 0;
    check(bqpe_solution_estimate(sol.get(), k, &e));
    out << ' ' << fmt(e);
  }
  out << "\nB =\n";
  for (int r = 0; r < dim; ++r) {
    out << "  ";
    for (int c = 0; c < dim; ++c) {
      double re = 0, im = 0;
      check(bqpe_solution_b_entry(sol.get(), r, c, &re, &im));
      out << fmt_complex(re, im) << (c + 1 < dim ? "  " : "");
    }
    out << '\n';
  }
  out << "projectors (columns):\n";
  for (int r = 0; r < dim; ++r) {
    out << "  ";
    for (int k = 0; k < dim; ++k) {
      double re = 0, im = 0;
      check(bqpe_solution_projector(sol.get(), k, r, &re, &im));
      out << fmt_complex(re, im) << (k + 1 < dim ? "  " : "");
    }
    out << '\n';
  }
  write_output(out.str(), opts.out_path);
  return kExitOk;
}

/* ---- noon-curve ---------------------------------------------------------- */

int cmd_noon_curve(const std::vector<double>& m_list, int n_max, CommonOpts& opts) {
  Table table;
  table.header = {"m", "n", "delta_trunc", "pipeline_delta"};
  for (double m : m_list) {
    PriorPtr prior;
    {
      bqpe_prior* p = nullptr;
      check(bqpe_prior_truncated(0.0, m, &p));
      prior.reset(p);
    }
    for (int n = 1; n <= n_max; ++n) {
      double closed = 0;
      check(bqpe_mmse_noon_truncated(n, m, &closed));
      bqpe_state* s = nullptr;
      check(bqpe_state_noon(n, &s));
      const StatePtr state(s);
      bqpe_solution* raw = nullptr;
      check(bqpe_solve(state.get(), prior.get(), &raw));
      const SolutionPtr sol(raw);
      table.rows.push_back(
          {fmt(m), std::to_string(n), fmt(closed), fmt(bqpe_solution_mmse(sol.get()))});
    }
  }
  write_output(table.render(opts.format), opts.out_path);
  return kExitOk;
}

/* ---- optimize ------------------------------------------------------------ */

int cmd_optimize(const std::string& prior_spec, int n_from, int n_to, bool allow_phases,
                 CommonOpts& opts) {
  if (n_from < 1 || n_to < n_from || n_to > 30)
    throw CommandError(kExitUsage, "photon range must satisfy 1 <= from <= to <= 30");
  const PriorPtr prior = make_prior(prior_spec);

  Table table;
  table.header = {"n", "delta"};
  for (int l = 0; l <= n_to; ++l) table.header.push_back("a_" + std::to_string(l));
  for (int n = n_from; n <= n_to; ++n) {
    bqpe_opt_result* raw = nullptr;
    check(bqpe_optimize_coefficients(n, prior.get(), allow_phases ? 1 : 0,
                                     opts.restarts, opts.seed, &raw));
    const OptPtr result(raw);
    std::vector<std::string> row{std::to_string(n),
                                 fmt(bqpe_opt_result_mmse(result.get()))};
    for (int l = 0; l <= n; ++l) {
      double re = 0, im = 0;
      check(bqpe_opt_result_coeff(result.get(), l, &re, &im));
      row.push_back(fmt_complex(re, im));
    }
    table.rows.push_back(std::move(row));
  }
  write_output(table.render(opts.format), opts.out_path);
  return kExitOk;
}

/* ---- bs-optimize ---------------------------------------------------------- */

int cmd_bs_optimize(const std::vector<int>& n_list, CommonOpts& opts) {
  Table table;
  table.header = {"n", "tau_opt", "mmse"};
  for (int n : n_list) {
    double tau = 0, mmse = 0;
    check(bqpe_optimize_bs_transmissivity(n, &tau, &mmse));
    table.rows.push_back({std::to_string(n), fmt(tau), fmt(mmse)});
  }
  write_output(table.render(opts.format), opts.out_path);
  return kExitOk;
}

/* ---- adaptive ------------------------------------------------------------ */

int cmd_adaptive(const std::string& prior_spec, int depth, const std::string& policy,
                 bool reoptimize, bool compare, const std::string& tree_path,
                 CommonOpts& opts) {
  const PriorPtr prior = make_prior(prior_spec);
  const bqpe_policy pol =
      policy == "leftmost" ? BQPE_POLICY_LEFTMOST : BQPE_POLICY_ALL_BRANCHES;

  bqpe_tree* raw = nullptr;
  check(bqpe_adaptive_run(prior.get(), depth, pol, reoptimize ? 1 : 0, opts.grid_nodes,
                          opts.restarts, opts.seed, &raw));
  const TreePtr tree(raw);

  if (!tree_path.empty()) {
    char* text = nullptr;
    check(bqpe_tree_json(tree.get(), &text));
    const std::string json_text(text);
    bqpe_string_free(text);
    write_output(json_text + "\n", tree_path);
  }

  Table table;
  if (compare) {
    std::vector<double> adaptive(depth), single_shot(depth);
    check(bqpe_tree_compare_single_shot(tree.get(), prior.get(), opts.restarts,
                                        opts.seed, adaptive.data(),
                                        single_shot.data()));
    table.header = {"s", "adaptive_mmse", "single_shot_mmse"};
    for (int s = 1; s <= depth; ++s)
      table.rows.push_back(
          {std::to_string(s), fmt(adaptive[s - 1]), fmt(single_shot[s - 1])});
  } else {
    table.header = {"s", "best_mmse"};
    for (int s = 1; s <= depth; ++s) {
      double v = 0;
      check(bqpe_tree_step_best_mmse(tree.get(), s, &v));
      table.rows.push_back({std::to_string(s), fmt(v)});
    }
  }
  write_output(table.render(opts.format == "text" ? "csv" : opts.format),
               opts.out_path);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian phase-estimation toolkit"};
  app.require_subcommand(1);

  // mmse
  auto* mmse_cmd = app.add_subcommand("mmse", "optimal error for one prior and probe");
  std::string mmse_prior = "flat", mmse_state = "noon:1";
  CommonOpts mmse_opts;
  mmse_cmd->add_option("--prior", mmse_prior, "prior spec");
  mmse_cmd->add_option("--state", mmse_state, "probe state spec");
  mmse_opts.add_to(mmse_cmd, false);

  // noon-curve
  auto* curve_cmd =
      app.add_subcommand("noon-curve", "NOON error vs photon number and prior width");
  std::string curve_m = "0.1,0.3,1,3";
  int curve_n_max = 20;
  CommonOpts curve_opts;
  curve_cmd->add_option("--m-list", curve_m, "comma-separated prior widths");
  curve_cmd->add_option("--n-max", curve_n_max, "largest photon number");
  curve_opts.add_to(curve_cmd, false);

  // optimize
  auto* opt_cmd = app.add_subcommand("optimize", "optimal probe coefficients per n");
  std::string opt_prior = "flat";
  int opt_from = 1, opt_to = 5;
  bool opt_phases = false;
  CommonOpts opt_opts;
  opt_cmd->add_option("--prior", opt_prior, "prior spec");
  opt_cmd->add_option("--n-from", opt_from, "first photon number");
  opt_cmd->add_option("--n-to", opt_to, "last photon number");
  opt_cmd->add_flag("--allow-phases", opt_phases, "search relative phases too");
  opt_opts.add_to(opt_cmd, false);

  // bs-optimize
  auto* bs_cmd =
      app.add_subcommand("bs-optimize", "optimal beam-splitter transmissivity per n");
  std::string bs_n = "1,2,5,10,50,100";
  CommonOpts bs_opts;
  bs_cmd->add_option("--n-list", bs_n, "comma-separated photon numbers");
  bs_opts.add_to(bs_cmd, false);

  // adaptive
  auto* ad_cmd = app.add_subcommand("adaptive", "sequential single-photon protocol");
  std::string ad_prior = "flat", ad_policy = "all-branches", ad_tree_path;
  int ad_depth = 5;
  bool ad_compare = false, ad_no_reopt = false;
  CommonOpts ad_opts;
  ad_cmd->add_option("--prior", ad_prior, "initial prior spec");
  ad_cmd->add_option("--depth", ad_depth, "number of steps");
  ad_cmd->add_option("--policy", ad_policy, "all-branches|leftmost")
      ->check(CLI::IsMember({"all-branches", "leftmost"}));
  ad_cmd->add_flag("--compare", ad_compare, "add the single-probe column");
  ad_cmd->add_flag("--no-reoptimize", ad_no_reopt, "reuse the parent probe per branch");
  ad_cmd->add_option("--out-tree", ad_tree_path, "write the expanded tree as JSON");
  ad_opts.add_to(ad_cmd, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (mmse_cmd->parsed()) {
      mmse_opts.load_config(mmse_cmd);
      mmse_opts.apply(mmse_cmd, "--prior", mmse_prior);
      mmse_opts.apply(mmse_cmd, "--state", mmse_state);
      return cmd_mmse(mmse_prior, mmse_state, mmse_opts);
    }
    if (curve_cmd->parsed()) {
      curve_opts.load_config(curve_cmd);
      curve_opts.apply(curve_cmd, "--m-list", curve_m);
      curve_opts.apply(curve_cmd, "--n-max", curve_n_max);
      return cmd_noon_curve(parse_double_list(curve_m), curve_n_max, curve_opts);
    }
    if (opt_cmd->parsed()) {
      opt_opts.load_config(opt_cmd);
      opt_opts.apply(opt_cmd, "--prior", opt_prior);
      opt_opts.apply(opt_cmd, "--n-from", opt_from);
      opt_opts.apply(opt_cmd, "--n-to", opt_to);
      return cmd_optimize(opt_prior, opt_from, opt_to, opt_phases, opt_opts);
    }
    if (bs_cmd->parsed()) {
      bs_opts.load_config(bs_cmd);
      bs_opts.apply(bs_cmd, "--n-list", bs_n);
      return cmd_bs_optimize(parse_int_list(bs_n), bs_opts);
    }
    if (ad_cmd->parsed()) {
      ad_opts.load_config(ad_cmd);
      ad_opts.apply(ad_cmd, "--prior", ad_prior);
      ad_opts.apply(ad_cmd, "--depth", ad_depth);
      ad_opts.apply(ad_cmd, "--policy", ad_policy);
      ad_opts.apply(ad_cmd, "--out-tree", ad_tree_path);
      return cmd_adaptive(ad_prior, ad_depth, ad_policy, !ad_no_reopt, ad_compare,
                          ad_tree_path, ad_opts);
    }
  } catch (const CommandError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNumeric;
  }
  return kExitUsage;
}
