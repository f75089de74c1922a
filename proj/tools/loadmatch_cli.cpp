// Command-line driver. Every output file carries the format version, the
// root seed and the effective configuration, so identical invocations give
// byte-identical files.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "loadmatch/balance.hpp"
#include "loadmatch/corrmodel.hpp"
#include "loadmatch/error.hpp"
#include "loadmatch/intersect.hpp"
#include "loadmatch/limitdist.hpp"
#include "loadmatch/oracles.hpp"
#include "loadmatch/recovery.hpp"
#include "loadmatch/rng.hpp"
#include "loadmatch/verify.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;
using namespace loadmatch;

namespace {

constexpr const char* kFormatVersion = "1";

enum Exit { kOk = 0, kValidation = 1, kIo = 2, kInternal = 3 };

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kOverflow:
    case ErrorCode::kIllConditioned:
    case ErrorCode::kNonConvergence:
    case ErrorCode::kInternal:
      return kInternal;
    default:
      return kValidation;
  }
}

struct Globals {
  std::uint64_t seed = 1;
  std::string out = ".";
  unsigned threads = 1;
  std::string config;
};

// Effective parameters of the running command, echoed into every output.
json g_config = json::object();

json meta(const std::string& command, const Globals& g) {
  return json{{"format_version", kFormatVersion}, {"command", command}, {"seed", g.seed}, {"config", g_config}};
}

fs::path output_path(const Globals& g, const std::string& name) {
  const fs::path dir(g.out);
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("output directory '" + g.out + "' does not exist");
  return dir / name;
}

void write_file(const Globals& g, const std::string& name, const std::string& body) {
  const fs::path p = output_path(g, name);
  std::ofstream f(p, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open '" + p.string() + "' for writing");
  f << body;
  if (!f.flush()) throw IoError("write to '" + p.string() + "' failed");
}

// Reads a text file with leading '#' metadata lines removed.
std::string read_data_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open '" + path + "'");
  std::ostringstream body;
  std::string line;
  while (std::getline(f, line)) {
    if (!line.empty() && line[0] == '#') continue;
    body << line << '\n';
  }
  if (f.bad()) throw IoError("read from '" + path + "' failed");
  return body.str();
}

std::string comment_line(const json& m) { return "# " + m.dump() + "\n"; }

std::string fmt_key(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  return buf;
}

json set_json(const VertexSet& s) { return json(s.members()); }

json null_if_nan(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

// ----- model parameters shared by the pair-based commands -----

struct ModelOpts {
  std::size_t n = 7;
  double alpha = 0.7;
  double lambda = 1.5;
  double rho_hat = 1.0;
  std::optional<double> s;  // forces s with p = n^-alpha

  void add(CLI::App* sub, std::size_t default_n) {
    n = default_n;
    sub->add_option("--n", n, "vertex count")->capture_default_str();
    sub->add_option("--alpha", alpha, "p = n^-alpha")->capture_default_str();
    sub->add_option("--lambda", lambda, "n p s^2")->capture_default_str();
    sub->add_option("--rho-hat", rho_hat, "density estimate behind the constant A")->capture_default_str();
    sub->add_option("--s", s, "force the subsampling probability (p stays n^-alpha)");
  }

  ModelParams params() const {
    if (s) {
      if (!(alpha > 0 && alpha <= 1)) throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1]");
      return forced_params(n, std::pow(static_cast<double>(n), -alpha), *s, rho_hat);
    }
    return derive_params(n, alpha, lambda, rho_hat);
  }

  void echo() const {
    g_config["n"] = n;
    g_config["alpha"] = alpha;
    g_config["lambda"] = lambda;
    g_config["rho_hat"] = rho_hat;
    g_config["s"] = s ? json(*s) : json(nullptr);
  }
};

json params_json(const ModelParams& m) {
  return json{{"n", m.n},         {"p", m.p},         {"s", m.s},
              {"P", null_if_nan(m.P)}, {"Q", null_if_nan(m.Q)}, {"R", null_if_nan(m.R)},
              {"gamma", m.gamma}, {"A", m.A}};
}

std::uint64_t trial_seed(std::uint64_t root, std::uint64_t stream, std::uint64_t trial) {
  return keyed_bits(root, stream, trial);
}

// ----- mu-lambda -----

struct MuLambdaOpts {
  std::size_t n = 100'000;
  double lambda = 2.0;
  std::size_t trials = 3;
  std::vector<double> x = {0.0, 0.5, 1.0, 1.5, 2.0};
  std::size_t exact_cutoff = 20'000;
};

int run_mu_lambda(const Globals& g, const MuLambdaOpts& o) {
  g_config = json{{"n", o.n}, {"lambda", o.lambda}, {"trials", o.trials}, {"x", o.x}, {"exact_cutoff", o.exact_cutoff}};
  output_path(g, "mu_lambda.json");
  LimitOptions lo;
  lo.exact_cutoff = o.exact_cutoff;
  lo.threads = g.threads;
  std::vector<LoadValue> maxima;
  const LoadECDF e = empirical_load_distribution(o.n, o.lambda, o.trials, g.seed, lo, &maxima);
  const json m = meta("mu-lambda", g);

  std::ostringstream csv;
  csv << comment_line(m);
  write_ecdf_csv(csv, e);
  write_file(g, "mu_lambda.csv", csv.str());

  json f_at = json::object();
  for (const double x : o.x) f_at[fmt_key(x)] = f_lambda(e, x);
  json maxes = json::array();
  for (const LoadValue& v : maxima) maxes.push_back(v.exact ? json(v.exact->to_string()) : json(v.value));
  json summary = m;
  summary["lambda"] = o.lambda;
  summary["n"] = o.n;
  summary["trials"] = o.trials;
  summary["F_at"] = f_at;
  summary["rho_estimate"] = median_load(maxima);
  summary["max_load_per_trial"] = maxes;
  summary["mass_below_1"] = e.mass_below(1.0);
  summary["mass_above_1"] = e.mass_above(1.0);
  summary["mass_at_0"] = e.mass_at(Rational(0));
  summary["giant_oracle"] = giant_fraction(o.lambda);
  summary["two_core_oracle"] = two_core_fraction(o.lambda);
  write_file(g, "mu_lambda.json", summary.dump(2) + "\n");
  std::cout << "mass_below_1 " << e.mass_below(1.0) << " mass_above_1 " << e.mass_above(1.0) << "\n";
  return kOk;
}

// ----- recover -----

struct RecoverOpts {
  ModelOpts model;
  double epsilon = 0.1;
  double eta = 0.25;
  std::size_t trials = 100;
  std::size_t n_max = 8;
};

int run_recover(const Globals& g, const RecoverOpts& o) {
  o.model.echo();
  g_config["epsilon"] = o.epsilon;
  g_config["eta"] = o.eta;
  g_config["trials"] = o.trials;
  g_config["n_max"] = o.n_max;
  output_path(g, "recover.jsonl");
  const ModelParams params = o.model.params();
  const AlgoConfig cfg = AlgoConfig::make(o.model.alpha, o.epsilon, o.eta, params.A, o.n_max);
  if (params.n > cfg.n_max) throw Error(ErrorCode::kTooLarge, "n exceeds n_max");

  json head = meta("recover", g);
  head["record"] = "meta";
  head["params"] = params_json(params);
  head["rounds"] = cfg.N + 1;
  std::ostringstream out;
  out << head.dump() << '\n';

  double ratio_sum = 0;
  std::size_t ratio_count = 0;
  std::size_t un_total = 0;
  std::size_t cor_total = 0;
  bool containment = true;
  for (std::size_t t = 0; t < o.trials; ++t) {
    const std::uint64_t s = trial_seed(g.seed, 1, t);
    const CorrelatedPair pair = sample_correlated_pair(params, s);
    const RecoveryResult r = iterative_matching(pair.g1, pair.g2, cfg);
    const VertexSet cor = correct_set(r, pair.pi_star);
    const auto [heavy, light] = heavy_light_sets(pair.pi_star, pair.g1, pair.g2, o.model.alpha, o.epsilon);
    const Rational gap =
        near_maximizer_gap(pair.pi_star, pair.g1, pair.g2, cor, heavy, alpha_eps_rational(o.model.alpha, o.epsilon));
    json bayes = nullptr;
    try {
      bayes = bayes_optimal_estimate(pair.g1, pair.g2, params).expected_overlap;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kDegenerateS) throw;  // P undefined at s = 1
    }
    const bool inside = is_subset(cor, r.u_n);
    containment = containment && inside;
    un_total += r.u_n.size();
    cor_total += cor.size();
    if (!r.u_n.empty()) {
      ratio_sum += static_cast<double>(cor.size()) / static_cast<double>(r.u_n.size());
      ++ratio_count;
    }
    json rec{{"record", "trial"},
             {"trial", t},
             {"seed", s},
             {"u_n_size", r.u_n.size()},
             {"u_cor_size", cor.size()},
             {"u_cor_within_u_n", inside},
             {"overlap_with_truth", cor.size()},
             {"heavy_size", heavy.size()},
             {"light_size", light.size()},
             {"near_maximizer_gap", gap.to_string()},
             {"bayes_expected_overlap", bayes},
             {"u_n", set_json(r.u_n)},
             {"intersection_edges_true", intersection_graph(pair.g1, pair.g2, pair.pi_star).num_edges()}};
    out << rec.dump() << '\n';
  }
  write_file(g, "recover.jsonl", out.str());

  json summary = meta("recover", g);
  summary["trials"] = o.trials;
  summary["mean_u_n_size"] = o.trials ? static_cast<double>(un_total) / static_cast<double>(o.trials) : 0.0;
  summary["mean_u_cor_size"] = o.trials ? static_cast<double>(cor_total) / static_cast<double>(o.trials) : 0.0;
  summary["mean_cor_fraction"] = ratio_count ? json(ratio_sum / static_cast<double>(ratio_count)) : json(nullptr);
  summary["trials_with_nonempty_u_n"] = ratio_count;
  summary["u_cor_within_u_n_always"] = containment;
  write_file(g, "recover_summary.json", summary.dump(2) + "\n");
  std::cout << "trials " << o.trials << " mean |U_N| " << summary["mean_u_n_size"].get<double>() << "\n";
  return containment ? kOk : kInternal;
}

// ----- posterior -----

struct PosteriorOpts {
  ModelOpts model;
  std::string pair;
};

int run_posterior(const Globals& g, const PosteriorOpts& o) {
  o.model.echo();
  g_config["pair"] = o.pair;
  output_path(g, "posterior.json");
  CorrelatedPair pair;
  ModelParams params;
  if (!o.pair.empty()) {
    std::istringstream in(read_data_file(o.pair));
    pair = read_pair(in);
    ModelOpts sized = o.model;
    sized.n = pair.g1.num_vertices();
    params = sized.params();
  } else {
    params = o.model.params();
    pair = sample_correlated_pair(params, trial_seed(g.seed, 2, 0));
  }
  const PosteriorTable tab = posterior_exact(pair.g1, pair.g2, params);
  std::size_t best = 0;
  for (std::size_t k = 1; k < tab.count(); ++k) {
    if (tab.log_weight(k) > tab.log_weight(best)) best = k;
  }
  const BayesEstimate bayes = bayes_optimal_estimate(pair.g1, pair.g2, params);
  json out = meta("posterior", g);
  out["params"] = params_json(params);
  out["permutations"] = tab.count();
  out["log_normalizer"] = tab.log_normalizer();
  out["marginals"] = tab.marginals();
  out["map_permutation"] = tab.permutation(best).image();
  out["map_weight"] = tab.weight(best);
  out["bayes_estimate"] = bayes.pi_hat.image();
  out["bayes_expected_overlap"] = bayes.expected_overlap;
  out["pi_star"] = pair.pi_star.image();
  out["bayes_overlap_with_truth"] = overlap(bayes.pi_hat, pair.pi_star);
  write_file(g, "posterior.json", out.dump(2) + "\n");
  std::cout << "expected overlap " << bayes.expected_overlap << "\n";
  return kOk;
}

// ----- sample -----

struct SampleOpts {
  ModelOpts model;
  std::string kind = "pair";
};

json graph_stats(const Graph& h) {
  const LoadProfile prof = balanced_loads(h);
  return json{{"vertices", h.num_vertices()},
              {"edges", h.num_edges()},
              {"max_load", prof.max_load().to_string()},
              {"tree_vertices", tree_components(h).size()},
              {"two_core_vertices", two_cores_of_nonsimple_components(h).size()}};
}

int run_sample(const Globals& g, const SampleOpts& o) {
  o.model.echo();
  g_config["model"] = o.kind;
  output_path(g, "sample.json");
  json summary = meta("sample", g);
  if (o.kind == "gnp") {
    const Graph h = sample_gnp(o.model.n, o.model.lambda, g.seed, 0);
    std::ostringstream body;
    body << comment_line(meta("sample", g));
    write_edge_list(body, h);
    write_file(g, "graph.txt", body.str());
    summary["graph"] = graph_stats(h);
  } else if (o.kind == "pair") {
    const ModelParams params = o.model.params();
    const CorrelatedPair pair = sample_correlated_pair(params, trial_seed(g.seed, 3, 0));
    std::ostringstream body;
    body << comment_line(meta("sample", g));
    write_pair(body, pair);
    write_file(g, "pair.txt", body.str());
    summary["params"] = params_json(params);
    summary["g1_edges"] = pair.g1.num_edges();
    summary["g2_edges"] = pair.g2.num_edges();
    summary["intersection_true"] = graph_stats(intersection_graph(pair.g1, pair.g2, pair.pi_star));
  } else {
    throw UsageError("--model must be 'pair' or 'gnp'");
  }
  write_file(g, "sample.json", summary.dump(2) + "\n");
  return kOk;
}

// ----- verify -----

struct VerifyOpts {
  std::string suite;
  bool mutate = false;
};

int run_verify(const Globals& g, const VerifyOpts& o) {
  g_config = json{{"suite", o.suite}, {"mutate", o.mutate}};
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), o.suite) == names.end()) {
    throw UsageError("UnknownSuite: '" + o.suite + "'");
  }
  const std::string file = "verify_" + o.suite + ".jsonl";
  output_path(g, file);
  json head = meta("verify", g);
  head["record"] = "meta";
  std::ostringstream out;
  out << head.dump() << '\n';
  bool all = true;
  for (const PropertyResult& r : run_suite(o.suite, g.seed, o.mutate)) {
    json rec{{"name", r.name}, {"status", r.pass ? "pass" : "fail"}, {"cases", r.cases}};
    if (!r.pass) rec["witness"] = r.witness;
    all = all && r.pass;
    out << rec.dump() << '\n';
    std::cout << rec.dump() << '\n';
  }
  write_file(g, file, out.str());
  return all ? kOk : kInternal;
}

// ----- admissible-check / event-d -----

struct GraphSource {
  ModelOpts model;
  std::string graph;

  void add(CLI::App* sub) {
    model.add(sub, 200);
    sub->add_option("--graph", graph, "edge-list file; default: the true intersection graph of a sampled pair");
  }

  // The given graph, or H_{pi*} of a pair drawn from the root seed.
  Graph load(const Globals& g, std::uint64_t stream) const {
    model.echo();
    g_config["graph"] = graph;
    if (!graph.empty()) {
      std::istringstream in(read_data_file(graph));
      return read_edge_list(in);
    }
    const CorrelatedPair pair = sample_correlated_pair(model.params(), trial_seed(g.seed, stream, 0));
    return intersection_graph(pair.g1, pair.g2, pair.pi_star);
  }
};

struct AdmissibleOpts {
  GraphSource src;
  double epsilon = 0.1;
  std::optional<double> max_degree_cap;
  std::optional<double> d_n;
  std::optional<int> radius;
  std::optional<int> small_subgraph_cap;
  std::optional<double> cycle_count_base;
  int cycle_length_cap = 8;
  std::uint64_t node_budget = 50'000'000;
  bool exclude_center = false;
};

int run_admissible(const Globals& g, const AdmissibleOpts& o) {
  const Graph h = o.src.load(g, 4);
  AdmissibilityParams p = AdmissibilityParams::defaults(h.num_vertices(), o.src.model.alpha, o.epsilon);
  if (o.max_degree_cap) p.max_degree_cap = *o.max_degree_cap;
  if (o.d_n) p.d_n = *o.d_n;
  if (o.radius) p.neighborhood_radius = *o.radius;
  if (o.small_subgraph_cap) p.small_subgraph_cap = *o.small_subgraph_cap;
  if (o.cycle_count_base) p.cycle_count_base = *o.cycle_count_base;
  p.cycle_length_cap = o.cycle_length_cap;
  p.node_budget = o.node_budget;
  p.exclude_center = o.exclude_center;
  g_config["epsilon"] = o.epsilon;
  g_config["cycle_length_cap"] = o.cycle_length_cap;
  g_config["node_budget"] = o.node_budget;
  g_config["exclude_center"] = o.exclude_center;
  output_path(g, "admissible.json");
  json out = meta("admissible-check", g);
  out["thresholds"] = json{{"max_degree_cap", p.max_degree_cap},         {"d_n", p.d_n},
                           {"neighborhood_radius", p.neighborhood_radius}, {"small_subgraph_cap", p.small_subgraph_cap},
                           {"cycle_count_base", p.cycle_count_base},       {"cycle_length_cap", p.cycle_length_cap},
                           {"c_param", p.c_param}};
  out["graph"] = json{{"vertices", h.num_vertices()}, {"edges", h.num_edges()}};
  try {
    const AdmissibilityResult r = admissibility_check(h, p);
    out["status"] = r.ok ? "ok" : "violation";
    out["first_violation"] = r.first_violation;
    out["detail"] = r.detail;
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kCycleEnumerationBudget) throw;
    out["status"] = "inconclusive";
    out["detail"] = e.what();
  }
  write_file(g, "admissible.json", out.dump(2) + "\n");
  std::cout << out["status"].get<std::string>() << "\n";
  return kOk;
}

struct EventDOpts {
  GraphSource src;
  double d = 2.0;
  double delta = 0.1;
  std::size_t samples = 100'000;
};

int run_event_d(const Globals& g, const EventDOpts& o) {
  const Graph h = o.src.load(g, 5);
  g_config["D"] = o.d;
  g_config["delta"] = o.delta;
  g_config["samples"] = o.samples;
  output_path(g, "event_d.json");
  const EventDResult r = event_d_check(h, o.d, o.delta, trial_seed(g.seed, 6, 0), o.samples);
  json out = meta("event-d", g);
  out["graph"] = json{{"vertices", h.num_vertices()}, {"edges", h.num_edges()}};
  out["holds"] = r.holds;
  out["sampled"] = r.sampled;
  out["witness"] = r.witness;
  write_file(g, "event_d.json", out.dump(2) + "\n");
  std::cout << (r.holds ? "holds" : "fails") << (r.sampled ? " (sampled)" : "") << "\n";
  return kOk;
}

// ----- config -----

// Applies a flat JSON object to options that were not given on the command
// line. Keys name long options without dashes ('_' and '-' both accepted).
void apply_config(const std::string& path, CLI::App& app, CLI::App* sub) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config '" + path + "'");
  json cfg;
  try {
    cfg = json::parse(f);
  } catch (const json::parse_error& e) {
    throw UsageError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!cfg.is_object()) throw UsageError("config must be a flat JSON object");
  for (const auto& [key, value] : cfg.items()) {
    std::string name = key;
    std::replace(name.begin(), name.end(), '_', '-');
    if (name == "config") throw UsageError("config key 'config' is not allowed");
    CLI::Option* opt = sub->get_option_no_throw("--" + name);
    if (opt == nullptr) opt = app.get_option_no_throw("--" + name);
    if (opt == nullptr) throw UsageError("unknown config key '" + key + "'");
    if (opt->count() > 0) continue;  // command line wins
    std::vector<std::string> tokens;
    const auto token = [&](const json& v) {
      if (v.is_string()) return v.get<std::string>();
      if (v.is_boolean()) return std::string(v.get<bool>() ? "true" : "false");
      if (v.is_number() || v.is_null()) return v.dump();
      throw UsageError("config key '" + key + "' must be flat");
    };
    if (value.is_array()) {
      for (const auto& v : value) tokens.push_back(token(v));
    } else {
      tokens.push_back(token(value));
    }
    try {
      opt->add_result(tokens);
      opt->run_callback();
    } catch (const CLI::Error& e) {
      throw UsageError("config key '" + key + "': " + e.what());
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Balanced loads, correlated graph matching and limiting load distributions"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--seed", g.seed, "root seed")->capture_default_str();
  app.add_option("--out", g.out, "existing output directory")->capture_default_str();
  app.add_option("--threads", g.threads, "worker threads for trial loops")->capture_default_str();
  app.add_option("--config", g.config, "flat JSON file of option values");

  MuLambdaOpts mu;
  auto* mu_cmd = app.add_subcommand("mu-lambda", "empirical load distribution of G(n, lambda/n)");
  mu_cmd->add_option("--n", mu.n)->capture_default_str();
  mu_cmd->add_option("--lambda", mu.lambda)->capture_default_str();
  mu_cmd->add_option("--trials", mu.trials)->capture_default_str();
  mu_cmd->add_option("--x", mu.x, "points at which F is reported")->capture_default_str();
  mu_cmd->add_option("--exact-cutoff", mu.exact_cutoff, "largest n solved exactly")->capture_default_str();

  RecoverOpts rec;
  auto* rec_cmd = app.add_subcommand("recover", "run the iterative matching algorithm on sampled pairs");
  rec.model.add(rec_cmd, 7);
  rec_cmd->add_option("--epsilon", rec.epsilon)->capture_default_str();
  rec_cmd->add_option("--eta", rec.eta)->capture_default_str();
  rec_cmd->add_option("--trials", rec.trials)->capture_default_str();
  rec_cmd->add_option("--n-max", rec.n_max)->capture_default_str();

  PosteriorOpts post;
  auto* post_cmd = app.add_subcommand("posterior", "exact posterior over all permutations (n <= 10)");
  post.model.add(post_cmd, 6);
  post_cmd->add_option("--pair", post.pair, "pair file written by 'sample'; default: sample one");

  SampleOpts samp;
  auto* samp_cmd = app.add_subcommand("sample", "draw a correlated pair or a G(n, lambda/n) graph");
  samp.model.add(samp_cmd, 50);
  samp_cmd->add_option("--model", samp.kind, "pair or gnp")->capture_default_str();

  VerifyOpts ver;
  auto* ver_cmd = app.add_subcommand("verify", "run an invariant suite");
  ver_cmd->add_option("--suite", ver.suite, "balance, orbits, model, recovery or limit")->required();
  ver_cmd->add_flag("--mutate", ver.mutate, "corrupt the component under test");

  AdmissibleOpts adm;
  auto* adm_cmd = app.add_subcommand("admissible-check", "admissibility conditions (i)-(iv)");
  adm.src.add(adm_cmd);
  adm_cmd->add_option("--epsilon", adm.epsilon)->capture_default_str();
  adm_cmd->add_option("--max-degree-cap", adm.max_degree_cap);
  adm_cmd->add_option("--d-n", adm.d_n);
  adm_cmd->add_option("--radius", adm.radius);
  adm_cmd->add_option("--small-subgraph-cap", adm.small_subgraph_cap);
  adm_cmd->add_option("--cycle-count-base", adm.cycle_count_base);
  adm_cmd->add_option("--cycle-length-cap", adm.cycle_length_cap)->capture_default_str();
  adm_cmd->add_option("--node-budget", adm.node_budget)->capture_default_str();
  adm_cmd->add_flag("--exclude-center", adm.exclude_center);

  EventDOpts evd;
  auto* evd_cmd = app.add_subcommand("event-d", "edge-expansion event check");
  evd.src.add(evd_cmd);
  evd_cmd->add_option("--D", evd.d)->capture_default_str();
  evd_cmd->add_option("--delta", evd.delta)->capture_default_str();
  evd_cmd->add_option("--samples", evd.samples)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    CLI::App* sub = app.get_subcommands().front();
    if (!g.config.empty()) apply_config(g.config, app, sub);
    if (g.threads == 0) throw UsageError("--threads must be positive");
    if (sub == mu_cmd) return run_mu_lambda(g, mu);
    if (sub == rec_cmd) return run_recover(g, rec);
    if (sub == post_cmd) return run_posterior(g, post);
    if (sub == samp_cmd) return run_sample(g, samp);
    if (sub == ver_cmd) return run_verify(g, ver);
    if (sub == adm_cmd) return run_admissible(g, adm);
    if (sub == evd_cmd) return run_event_d(g, evd);
    throw UsageError("no command");
  } catch (const IoError& e) {
    std::cerr << "io error: " << e.what() << "\n";
    return kIo;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternal;
  }
}
