#include "loadmatch/corrmodel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "loadmatch/error.hpp"
#include "loadmatch/rng.hpp"

namespace loadmatch {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void fill_constants(ModelParams& m) {
  const double p = m.p;
  const double s = m.s;
  m.gamma = std::min(m.alpha, 0.5);
  m.A = m.rho_hat + 2.0 + 1.0 / m.gamma;
  if (s < 1.0) {
    const double top = 1.0 - 2.0 * p * s + p * s * s;
    m.P = top / (p * (1.0 - s) * (1.0 - s));
    m.Q = (1.0 - s) * (1.0 - p * s) / top;
    m.R = top / ((1.0 - p * s) * (1.0 - p * s));
  } else {
    m.P = m.Q = m.R = kNaN;
  }
}

}  // namespace

ModelParams derive_params(std::size_t n, double alpha, double lambda, double rho_hat) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "n must be at least 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw Error(ErrorCode::kInvalidArgument, "alpha must lie in (0, 1]");
  if (!(lambda > 0.0)) throw Error(ErrorCode::kInvalidArgument, "lambda must be positive");
  ModelParams m;
  m.n = n;
  m.alpha = alpha;
  m.lambda = lambda;
  m.rho_hat = rho_hat;
  m.p = std::pow(static_cast<double>(n), -alpha);
  const double s2 = lambda / (static_cast<double>(n) * m.p);
  if (s2 > 1.0) throw Error(ErrorCode::kSOutOfRange, "s = sqrt(lambda / (n p)) exceeds 1");
  if (s2 == 1.0) throw Error(ErrorCode::kDegenerateS, "s = 1 leaves P undefined");
  m.s = std::sqrt(s2);
  fill_constants(m);
  return m;
}

ModelParams forced_params(std::size_t n, double p, double s, double rho_hat) {
  if (!(p > 0.0 && p <= 1.0) || !(s > 0.0 && s <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "forced p and s must lie in (0, 1]");
  }
  ModelParams m;
  m.n = n;
  m.p = p;
  m.s = s;
  m.rho_hat = rho_hat;
  m.alpha = n > 1 ? std::clamp(-std::log(p) / std::log(static_cast<double>(n)), 1e-9, 1.0) : 1.0;
  m.lambda = static_cast<double>(n) * p * s * s;
  fill_constants(m);
  return m;
}

std::uint64_t pair_index(Vertex i, Vertex j, std::size_t n) {
  if (i > j) std::swap(i, j);
  return static_cast<std::uint64_t>(i) * n + j;
}

IndicatorSource::IndicatorSource(const ModelParams& params, std::uint64_t seed)
    : p_(params.p),
      s_(params.s),
      key_i_(splitmix64(seed ^ splitmix64(0x11))),
      key_j1_(splitmix64(seed ^ splitmix64(0x22))),
      key_j2_(splitmix64(seed ^ splitmix64(0x33))) {}

bool IndicatorSource::I(std::uint64_t pair) const { return bits_to_unit(splitmix64(key_i_ + pair)) < p_; }
bool IndicatorSource::J1(std::uint64_t pair) const { return bits_to_unit(splitmix64(key_j1_ + pair)) < s_; }
bool IndicatorSource::J2(std::uint64_t pair) const { return bits_to_unit(splitmix64(key_j2_ + pair)) < s_; }

Matching sample_permutation(std::size_t n, std::uint64_t seed) {
  std::vector<Vertex> image(n);
  for (Vertex i = 0; i < n; ++i) image[i] = i;
  Rng rng(seed, 0);
  rng.shuffle(image);
  return Matching(std::move(image));
}

CorrelatedPair sample_correlated_pair(const ModelParams& params, std::uint64_t seed) {
  const std::size_t n = params.n;
  CorrelatedPair out;
  out.pi_star = sample_permutation(n, seed);
  const IndicatorSource src(params, seed);
  std::vector<Edge> e1;
  std::vector<Edge> e2;
  for (Vertex i = 0; i < n; ++i) {
    for (Vertex j = i + 1; j < n; ++j) {
      const auto idx = pair_index(i, j, n);
      if (!src.I(idx)) continue;
      if (src.J1(idx)) e1.push_back({i, j});
      const Vertex a = out.pi_star(i);
      const Vertex b = out.pi_star(j);
      if (src.J2(pair_index(a, b, n))) e2.push_back(make_edge(a, b));
    }
  }
  out.g1 = graph_from_canonical_edges(n, std::move(e1));
  out.g2 = graph_from_canonical_edges(n, std::move(e2));
  return out;
}

Matching PosteriorTable::permutation(std::size_t k) const {
  std::vector<Vertex> image(n_);
  for (std::size_t i = 0; i < n_; ++i) image[i] = images_[k * n_ + i];
  return Matching(std::move(image));
}

double PosteriorTable::log_weight(std::size_t k) const { return static_cast<double>(edges_[k]) * log_p_ - log_z_; }

double PosteriorTable::weight(std::size_t k) const { return std::exp(log_weight(k)); }

std::vector<std::vector<double>> PosteriorTable::marginals() const {
  std::vector<std::vector<double>> m(n_, std::vector<double>(n_, 0.0));
  for (std::size_t k = 0; k < count(); ++k) {
    const double w = weight(k);
    for (std::size_t i = 0; i < n_; ++i) m[i][images_[k * n_ + i]] += w;
  }
  return m;
}

PosteriorTable posterior_exact(const Graph& g1, const Graph& g2, const ModelParams& params) {
  const std::size_t n = g1.num_vertices();
  if (n > 10) throw Error(ErrorCode::kTooLarge, "exact posterior limited to n <= 10");
  if (g2.num_vertices() != n) throw Error(ErrorCode::kSizeMismatch, "graphs differ in vertex count");
  std::vector<std::uint16_t> adj2(n, 0);
  for (const Edge& e : g2.edges()) {
    adj2[e.u] |= static_cast<std::uint16_t>(1U << e.v);
    adj2[e.v] |= static_cast<std::uint16_t>(1U << e.u);
  }
  PosteriorTable t;
  t.n_ = n;
  std::vector<std::uint8_t> perm(n);
  for (std::size_t i = 0; i < n; ++i) perm[i] = static_cast<std::uint8_t>(i);
  do {
    std::uint16_t c = 0;
    for (const Edge& e : g1.edges()) c += (adj2[perm[e.u]] >> perm[e.v]) & 1U;
    t.edges_.push_back(c);
    t.images_.insert(t.images_.end(), perm.begin(), perm.end());
  } while (std::next_permutation(perm.begin(), perm.end()));

  const auto [lo, hi] = std::minmax_element(t.edges_.begin(), t.edges_.end());
  if (*lo == *hi) {
    t.log_p_ = 0.0;  // every permutation has the same weight; P is irrelevant
  } else {
    if (!(params.P > 0.0) || !std::isfinite(params.P)) throw Error(ErrorCode::kDegenerateS, "P is undefined");
    t.log_p_ = std::log(params.P);
  }
  // log Z by log-sum-exp, anchored at the largest exponent.
  const double top = static_cast<double>(*hi) * t.log_p_;
  const double anchor = t.log_p_ >= 0 ? top : static_cast<double>(*lo) * t.log_p_;
  double acc = 0.0;
  for (const auto c : t.edges_) acc += std::exp(static_cast<double>(c) * t.log_p_ - anchor);
  t.log_z_ = anchor + std::log(acc);
  return t;
}

std::pair<double, double> pair_ratio_identity(bool a, bool b, const ModelParams& params) {
  const double p = params.p;
  const double s = params.s;
  if (!(s < 1.0) || !(p * s < 1.0)) throw Error(ErrorCode::kDegenerateS, "identity needs s < 1 and ps < 1");
  const int ab = a && b ? 1 : 0;
  const int sum = (a ? 1 : 0) + (b ? 1 : 0);
  const double lhs = std::pow(params.P, ab) * std::pow(params.Q, sum) * params.R;
  double rhs = 0;
  if (a && b) {
    rhs = 1.0 / p;
  } else if (a || b) {
    rhs = (1.0 - s) / (1.0 - p * s);
  } else {
    rhs = (1.0 - 2.0 * p * s + p * s * s) / ((1.0 - p * s) * (1.0 - p * s));
  }
  return {lhs, rhs};
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

void write_params(std::ostream& out, const ModelParams& m) {
  out << "n=" << m.n << '\n';
  out << "alpha=" << fmt(m.alpha) << '\n';
  out << "lambda=" << fmt(m.lambda) << '\n';
  out << "p=" << fmt(m.p) << '\n';
  out << "s=" << fmt(m.s) << '\n';
  out << "P=" << fmt(m.P) << '\n';
  out << "Q=" << fmt(m.Q) << '\n';
  out << "R=" << fmt(m.R) << '\n';
  out << "gamma=" << fmt(m.gamma) << '\n';
  out << "rho_hat=" << fmt(m.rho_hat) << '\n';
  out << "A=" << fmt(m.A) << '\n';
}

ModelParams read_params(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::kParse, "expected key=value, got '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  const auto get = [&](const char* key) {
    const auto it = kv.find(key);
    if (it == kv.end()) throw Error(ErrorCode::kParse, std::string("missing key ") + key);
    return std::strtod(it->second.c_str(), nullptr);
  };
  if (kv.size() != 11) throw Error(ErrorCode::kParse, "unexpected key count in params block");
  ModelParams m;
  m.n = static_cast<std::size_t>(get("n"));
  m.alpha = get("alpha");
  m.lambda = get("lambda");
  m.p = get("p");
  m.s = get("s");
  m.P = get("P");
  m.Q = get("Q");
  m.R = get("R");
  m.gamma = get("gamma");
  m.rho_hat = get("rho_hat");
  m.A = get("A");
  return m;
}

void write_pair(std::ostream& out, const CorrelatedPair& pair) {
  out << "pi_star:";
  for (const Vertex v : pair.pi_star.image()) out << ' ' << v;
  out << "\ng1\n";
  write_edge_list(out, pair.g1);
  out << "g2\n";
  write_edge_list(out, pair.g2);
}

CorrelatedPair read_pair(std::istream& in) {
  CorrelatedPair pair;
  std::string line;
  if (!std::getline(in, line) || line.rfind("pi_star:", 0) != 0) throw Error(ErrorCode::kParse, "missing pi_star line");
  std::istringstream row(line.substr(8));
  std::vector<Vertex> image;
  Vertex v = 0;
  while (row >> v) image.push_back(v);
  pair.pi_star = Matching(std::move(image));
  std::string tag;
  if (!(in >> tag) || tag != "g1") throw Error(ErrorCode::kParse, "missing g1 section");
  pair.g1 = read_edge_list(in);
  if (!(in >> tag) || tag != "g2") throw Error(ErrorCode::kParse, "missing g2 section");
  pair.g2 = read_edge_list(in);
  return pair;
}

}  // namespace loadmatch
