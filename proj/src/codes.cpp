#include "agc/codes.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <utility>
#include <vector>

#include "agc/errors.hpp"

namespace agc {
namespace {

// Stream ids under a generator seed. gen_rbgc reuses the BGC entry stream, so
// its unregularized columns equal those of gen_bgc.
constexpr std::uint64_t kEntryStream = 1;
constexpr std::uint64_t kPruneStream = 2;
constexpr std::uint64_t kPairingStream = 3;

std::string describe(const CodeParams& p) {
  return "k=" + std::to_string(p.k) + " n=" + std::to_string(p.n) + " s=" + std::to_string(p.s);
}

Mat bernoulli_matrix(const CodeParams& p, std::uint64_t seed) {
  CounterRng rng = CounterRng(seed).split(kEntryStream);
  const double prob = static_cast<double>(p.s) / static_cast<double>(p.k);
  Mat g(p.k, p.n);
  // Column-major draw order, one worker at a time.
  for (std::size_t j = 0; j < p.n; ++j)
    for (std::size_t i = 0; i < p.k; ++i) g(i, j) = rng.bernoulli(prob) ? 1.0 : 0.0;
  return g;
}

using Edge = std::pair<std::size_t, std::size_t>;

// One attempt at completing a pairing. Returns false if the leftover stubs
// admit no valid edge.
bool try_pairing(std::size_t k, std::size_t s, CounterRng& rng, std::set<Edge>& edges) {
  edges.clear();
  std::vector<std::size_t> stubs;
  stubs.reserve(k * s);
  for (std::size_t v = 0; v < k; ++v) stubs.insert(stubs.end(), s, v);

  while (!stubs.empty()) {
    rng.shuffle(std::span<std::size_t>(stubs));
    std::map<std::size_t, std::size_t> leftover;
    for (std::size_t i = 0; i + 1 < stubs.size(); i += 2) {
      auto [u, v] = std::minmax(stubs[i], stubs[i + 1]);
      if (u != v && !edges.contains({u, v})) {
        edges.insert({u, v});
      } else {
        ++leftover[u];
        ++leftover[v];
      }
    }
    if (leftover.empty()) return true;
    bool suitable = false;
    for (auto it = leftover.begin(); it != leftover.end() && !suitable; ++it)
      for (auto jt = std::next(it); jt != leftover.end(); ++jt)
        if (!edges.contains({it->first, jt->first})) {
          suitable = true;
          break;
        }
    if (!suitable) return false;
    stubs.clear();
    for (const auto& [v, count] : leftover) stubs.insert(stubs.end(), count, v);
  }
  return true;
}

}  // namespace

std::string_view to_string(Scheme scheme) {
  switch (scheme) {
    case Scheme::Frc: return "frc";
    case Scheme::Bgc: return "bgc";
    case Scheme::Rbgc: return "rbgc";
    case Scheme::SRegular: return "sregular";
  }
  return "?";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "frc" || name == "FRC") return Scheme::Frc;
  if (name == "bgc" || name == "BGC") return Scheme::Bgc;
  if (name == "rbgc" || name == "RBGC") return Scheme::Rbgc;
  if (name == "sregular" || name == "SREGULAR" || name == "s-regular") return Scheme::SRegular;
  throw std::invalid_argument("unknown scheme '" + std::string(name) + "'");
}

void check_params(Scheme scheme, const CodeParams& p) {
  if (p.k == 0 || p.n == 0 || p.s == 0) throw InfeasibleError("k, n and s must be positive (" + describe(p) + ")");
  if (p.s > p.k) throw InfeasibleError("s must not exceed k (" + describe(p) + ")");
  switch (scheme) {
    case Scheme::Frc:
      if (p.n != p.k) throw InfeasibleError("FRC requires n == k (" + describe(p) + ")");
      if (p.k % p.s != 0) throw InfeasibleError("FRC requires s to divide k (" + describe(p) + ")");
      break;
    case Scheme::SRegular:
      if (p.n != p.k) throw InfeasibleError("s-regular code requires n == k (" + describe(p) + ")");
      if (p.s >= p.k) throw InfeasibleError("s-regular code requires s < k (" + describe(p) + ")");
      if ((p.s * p.k) % 2 != 0) throw InfeasibleError("s-regular code requires s*k even (" + describe(p) + ")");
      break;
    case Scheme::Bgc:
    case Scheme::Rbgc:
      break;
  }
}

AssignmentMatrix gen_frc(const CodeParams& params) {
  check_params(Scheme::Frc, params);
  Mat g(params.k, params.n);
  for (std::size_t i = 0; i < params.k; ++i) {
    const std::size_t block = i / params.s;
    for (std::size_t j = block * params.s; j < (block + 1) * params.s; ++j) g(i, j) = 1.0;
  }
  return {Scheme::Frc, params, std::move(g), std::nullopt};
}

AssignmentMatrix gen_bgc(const CodeParams& params, std::uint64_t seed) {
  check_params(Scheme::Bgc, params);
  return {Scheme::Bgc, params, bernoulli_matrix(params, seed), seed};
}

void regularize_columns(Mat& g, std::size_t s, CounterRng& rng) {
  std::vector<std::size_t> support;
  for (std::size_t j = 0; j < g.cols(); ++j) {
    support.clear();
    for (std::size_t i = 0; i < g.rows(); ++i)
      if (g(i, j) != 0.0) support.push_back(i);
    if (support.size() <= 2 * s) continue;
    // Partial Fisher-Yates: the first d − s positions become the removed set.
    const std::size_t remove = support.size() - s;
    for (std::size_t m = 0; m < remove; ++m) {
      const auto pick = m + static_cast<std::size_t>(rng.uniform_index(support.size() - m));
      std::swap(support[m], support[pick]);
      g(support[m], j) = 0.0;
    }
  }
}

AssignmentMatrix gen_rbgc(const CodeParams& params, std::uint64_t seed) {
  check_params(Scheme::Rbgc, params);
  Mat g = bernoulli_matrix(params, seed);
  CounterRng prune = CounterRng(seed).split(kPruneStream);
  regularize_columns(g, params.s, prune);
  return {Scheme::Rbgc, params, std::move(g), seed};
}

AssignmentMatrix gen_sregular(const CodeParams& params, std::uint64_t seed, int max_attempts) {
  check_params(Scheme::SRegular, params);
  CounterRng rng = CounterRng(seed).split(kPairingStream);
  std::set<Edge> edges;
  for (int attempt = 0; attempt < max_attempts; ++attempt) {
    if (!try_pairing(params.k, params.s, rng, edges)) continue;
    Mat g(params.k, params.k);
    for (const auto& [u, v] : edges) {
      g(u, v) = 1.0;
      g(v, u) = 1.0;
    }
    return {Scheme::SRegular, params, std::move(g), seed};
  }
  throw NumericalError("s-regular pairing failed after " + std::to_string(max_attempts) + " attempts (" +
                       describe(params) + ")");
}

AssignmentMatrix generate(Scheme scheme, const CodeParams& params, std::uint64_t seed) {
  switch (scheme) {
    case Scheme::Frc: return gen_frc(params);
    case Scheme::Bgc: return gen_bgc(params, seed);
    case Scheme::Rbgc: return gen_rbgc(params, seed);
    case Scheme::SRegular: return gen_sregular(params, seed);
  }
  throw std::logic_error("unreachable scheme");
}

void validate(const AssignmentMatrix& m) {
  const auto& p = m.params;
  const auto fail = [&](const std::string& why) {
    throw std::logic_error(std::string(to_string(m.scheme)) + " invariant violated: " + why);
  };
  if (m.g.rows() != p.k || m.g.cols() != p.n) fail("shape is not k x n");
  if (!m.g.is_binary()) fail("entries are not 0/1");
  const auto cols = m.g.column_sums();
  const auto rows = m.g.row_sums();
  switch (m.scheme) {
    case Scheme::Frc: {
      if (p.n != p.k || p.s == 0 || p.k % p.s != 0) fail("requires n == k and s | k");
      for (std::size_t i = 0; i < p.k; ++i)
        for (std::size_t j = 0; j < p.n; ++j) {
          const bool on_block = i / p.s == j / p.s;
          if ((m.g(i, j) != 0.0) != on_block) fail("not block diagonal with 1_{s x s} blocks");
        }
      break;
    }
    case Scheme::Rbgc:
      for (const auto c : cols)
        if (c > 2 * p.s) fail("column degree exceeds 2s");
      break;
    case Scheme::SRegular:
      if (p.n != p.k) fail("not square");
      for (std::size_t i = 0; i < p.k; ++i) {
        if (m.g(i, i) != 0.0) fail("non-zero diagonal");
        for (std::size_t j = 0; j < i; ++j)
          if (m.g(i, j) != m.g(j, i)) fail("not symmetric");
      }
      for (std::size_t i = 0; i < p.k; ++i)
        if (rows[i] != p.s || cols[i] != p.s) fail("degree differs from s");
      break;
    case Scheme::Bgc:
      break;
  }
}

std::string serialize(const AssignmentMatrix& m) {
  std::ostringstream out;
  out << m.params.k << ' ' << m.params.n << ' ' << m.params.s << ' ' << to_string(m.scheme) << ' ';
  if (m.seed) out << *m.seed;
  else out << '-';
  out << '\n';
  for (std::size_t i = 0; i < m.g.rows(); ++i) {
    for (std::size_t j = 0; j < m.g.cols(); ++j) {
      if (j) out << ' ';
      out << (m.g(i, j) != 0.0 ? '1' : '0');
    }
    out << '\n';
  }
  return out.str();
}

AssignmentMatrix parse_assignment(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw std::invalid_argument("matrix: missing header line");
  std::istringstream hs(header);
  AssignmentMatrix m;
  std::string scheme, seed, extra;
  if (!(hs >> m.params.k >> m.params.n >> m.params.s >> scheme >> seed) || (hs >> extra))
    throw std::invalid_argument("matrix: header must be 'k n s scheme seed'");
  m.scheme = parse_scheme(scheme);
  if (seed != "-") {
    std::size_t used = 0;
    try {
      m.seed = std::stoull(seed, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != seed.size()) throw std::invalid_argument("matrix: bad seed '" + seed + "'");
  }
  if (m.params.k == 0 || m.params.n == 0) throw std::invalid_argument("matrix: k and n must be positive");
  std::vector<double> entries;
  entries.reserve(m.params.k * m.params.n);
  std::string line;
  for (std::size_t i = 0; i < m.params.k; ++i) {
    if (!std::getline(in, line)) throw std::invalid_argument("matrix: expected " + std::to_string(m.params.k) + " rows");
    std::istringstream ls(line);
    std::string tok;
    std::size_t count = 0;
    while (ls >> tok) {
      if (tok != "0" && tok != "1") throw std::invalid_argument("matrix: entries must be 0 or 1");
      entries.push_back(tok == "1" ? 1.0 : 0.0);
      ++count;
    }
    if (count != m.params.n) throw std::invalid_argument("matrix: row " + std::to_string(i) + " has wrong length");
  }
  m.g = Mat(m.params.k, m.params.n, std::move(entries));
  return m;
}

AssignmentMatrix parse_assignment(std::string_view text) {
  std::istringstream in{std::string(text)};
  return parse_assignment(in);
}

}  // namespace agc
