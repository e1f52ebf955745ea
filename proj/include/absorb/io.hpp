#pragma once

#include <absorb/errors.hpp>
#include <absorb/hypercore.hpp>

#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace absorb::io {

namespace detail {

struct LineReader {
  std::istream& in;
  int line_no = 0;

  // Next non-blank, non-comment line; false at EOF.
  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_no;
      auto hash = line.find('#');
      if (hash != std::string::npos) line.erase(hash);
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("line " + std::to_string(line_no) + ": " + what);
  }
};

inline std::vector<std::string> split(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

inline long long to_int(const std::string& tok, const LineReader& rd) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(tok, &pos);
    if (pos != tok.size()) rd.fail("bad integer '" + tok + "'");
    return v;
  } catch (const std::logic_error&) {
    rd.fail("bad integer '" + tok + "'");
  }
}

inline std::array<long long, 3> header(LineReader& rd, const char* what) {
  std::string line;
  if (!rd.next(line)) rd.fail(std::string("missing ") + what + " header");
  auto toks = split(line);
  if (toks.size() != 3) rd.fail(std::string("malformed ") + what + " header, expected 3 integers");
  std::array<long long, 3> h{};
  for (int i = 0; i < 3; ++i) {
    h[i] = to_int(toks[i], rd);
    if (h[i] < 0) rd.fail("negative header field");
  }
  return h;
}

// Parses `k` ascending ids in [0, n) from toks[0..k).
inline SortedTuple ids(const std::vector<std::string>& toks, std::size_t k, long long n, LineReader& rd) {
  if (k > SortedTuple::kCapacity) rd.fail("tuple too long");
  std::vector<Vertex> vs;
  for (std::size_t i = 0; i < k; ++i) {
    long long v = to_int(toks[i], rd);
    if (v < 0 || v >= n) rd.fail("vertex " + toks[i] + " out of range");
    if (!vs.empty() && static_cast<Vertex>(v) <= vs.back()) rd.fail("ids not strictly ascending");
    vs.push_back(static_cast<Vertex>(v));
  }
  return SortedTuple::from_sorted(vs);
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Hypergraphs

inline void write_graph(std::ostream& os, const Hypergraph& g) {
  os << g.r() << ' ' << g.n() << ' ' << g.size() << '\n';
  for (const Edge& e : g.edges()) os << e.str() << '\n';
}

inline void write_graph(std::ostream& os, const MultiHypergraph& g) {
  os << g.r() << ' ' << g.n() << ' ' << g.support_size() << '\n';
  for (const auto& [e, k] : g.multiplicities()) {
    os << e.str();
    if (k > 1) os << " x " << k;
    os << '\n';
  }
}

inline MultiHypergraph read_multigraph(std::istream& in) {
  detail::LineReader rd{in};
  auto [r, n, m] = detail::header(rd, "graph");
  if (r < 1) rd.fail("uniformity must be at least 1");
  MultiHypergraph g(static_cast<int>(n), static_cast<int>(r));
  std::string line;
  for (long long i = 0; i < m; ++i) {
    if (!rd.next(line)) rd.fail("expected " + std::to_string(m) + " edges, file ended");
    auto toks = detail::split(line);
    std::int64_t k = 1;
    if (toks.size() == static_cast<std::size_t>(r) + 2 && toks[static_cast<std::size_t>(r)] == "x") {
      k = detail::to_int(toks.back(), rd);
      if (k < 1) rd.fail("multiplicity must be positive");
    } else if (toks.size() != static_cast<std::size_t>(r)) {
      rd.fail("edge line has " + std::to_string(toks.size()) + " fields, expected " + std::to_string(r));
    }
    Edge e = detail::ids(toks, static_cast<std::size_t>(r), n, rd);
    if (g.multiplicity(e) > 0) rd.fail("duplicate edge {" + e.str() + "}");
    g.add(e, k);
  }
  if (rd.next(line)) rd.fail("trailing content after " + std::to_string(m) + " edges");
  return g;
}

// Simple mode: multiplicities and duplicates are errors.
inline Hypergraph read_graph(std::istream& in) {
  detail::LineReader rd{in};
  auto [r, n, m] = detail::header(rd, "graph");
  if (r < 1) rd.fail("uniformity must be at least 1");
  std::vector<Edge> es;
  std::unordered_set<Edge> seen;
  std::string line;
  for (long long i = 0; i < m; ++i) {
    if (!rd.next(line)) rd.fail("expected " + std::to_string(m) + " edges, file ended");
    auto toks = detail::split(line);
    if (toks.size() != static_cast<std::size_t>(r))
      rd.fail("edge line has " + std::to_string(toks.size()) + " fields, expected " + std::to_string(r));
    Edge e = detail::ids(toks, static_cast<std::size_t>(r), n, rd);
    if (!seen.insert(e).second) rd.fail("duplicate edge {" + e.str() + "}");
    es.push_back(e);
  }
  if (rd.next(line)) rd.fail("trailing content after " + std::to_string(m) + " edges");
  return Hypergraph(static_cast<int>(n), static_cast<int>(r), std::move(es));
}

// ---------------------------------------------------------------------------
// Packings: header "q n m", m clique lines, optional "host <path>".

struct PackingFile {
  Packing packing;
  std::string host;
};

inline void write_packing(std::ostream& os, const Packing& p, const std::string& host = {}) {
  os << p.q << ' ' << p.n << ' ' << p.cliques.size() << '\n';
  for (const Clique& c : p.cliques) os << c.str() << '\n';
  if (!host.empty()) os << "host " << host << '\n';
}

// r is not stored in the file; callers pass the host uniformity.
inline PackingFile read_packing(std::istream& in, int r = 2) {
  detail::LineReader rd{in};
  auto [q, n, m] = detail::header(rd, "packing");
  if (q <= r) rd.fail("clique size must exceed uniformity");
  PackingFile out;
  out.packing = Packing{static_cast<int>(n), static_cast<int>(q), r, {}};
  std::string line;
  for (long long i = 0; i < m; ++i) {
    if (!rd.next(line)) rd.fail("expected " + std::to_string(m) + " cliques, file ended");
    auto toks = detail::split(line);
    if (toks.size() != static_cast<std::size_t>(q))
      rd.fail("clique line has " + std::to_string(toks.size()) + " fields, expected " + std::to_string(q));
    out.packing.cliques.push_back(detail::ids(toks, static_cast<std::size_t>(q), n, rd));
  }
  if (rd.next(line)) {
    auto toks = detail::split(line);
    if (toks.size() != 2 || toks[0] != "host") rd.fail("expected 'host <path>' or end of file");
    out.host = toks[1];
    if (rd.next(line)) rd.fail("trailing content after host line");
  }
  return out;
}

// ---------------------------------------------------------------------------
// Files

template <class T, class Fn>
T read_file(const std::string& path, Fn&& fn) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  try {
    return fn(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + std::string(e.what()).substr(13));
  }
}

inline Hypergraph load_graph(const std::string& path) {
  return read_file<Hypergraph>(path, [](std::istream& in) { return read_graph(in); });
}

inline MultiHypergraph load_multigraph(const std::string& path) {
  return read_file<MultiHypergraph>(path, [](std::istream& in) { return read_multigraph(in); });
}

inline PackingFile load_packing(const std::string& path, int r = 2) {
  return read_file<PackingFile>(path, [r](std::istream& in) { return read_packing(in, r); });
}

template <class Writer>
void save(const std::string& path, Writer&& w) {
  std::ofstream os(path);
  if (!os) throw ParameterError("cannot write '" + path + "'");
  w(os);
}

}  // namespace absorb::io
