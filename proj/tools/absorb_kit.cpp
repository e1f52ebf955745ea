#include <absorb/absorb.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace absorb;
using nlohmann::json;

namespace {

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::budget:
    case ErrorKind::capacity:
    case ErrorKind::construction:
    case ErrorKind::reliability: return 2;
    default: return 3;
  }
}

// Artifacts go to --out DIR when given, otherwise to stdout. The report
// (key=value lines, or one JSON object with --json) goes to stdout unless an
// artifact already went there, in which case it moves to stderr.
struct Ctx {
  std::uint64_t seed = 0;
  std::string out;
  bool json_mode = false;
  bool stdout_used = false;
  json report = json::object();
  std::vector<std::string> order;

  template <class T>
  void put(const std::string& k, const T& v) {
    if (!report.contains(k)) order.push_back(k);
    report[k] = v;
  }

  template <class Writer>
  void artifact(const std::string& name, Writer&& w) {
    if (out.empty()) {
      stdout_used = true;
      w(std::cout);
      return;
    }
    fs::create_directories(out);
    io::save((fs::path(out) / name).string(), w);
  }

  void flush() const {
    std::ostream& os = stdout_used ? std::cerr : std::cout;
    if (json_mode) {
      os << report.dump(2) << '\n';
      return;
    }
    for (const auto& k : order) {
      const json& v = report[k];
      os << k << '=' << (v.is_string() ? v.get<std::string>() : v.dump()) << '\n';
    }
  }
};

std::vector<Vertex> parse_vertices(const std::string& s) {
  std::vector<Vertex> out;
  std::string t = s;
  std::replace(t.begin(), t.end(), ',', ' ');
  std::istringstream is(t);
  long long v;
  while (is >> v) {
    if (v < 0) throw ParameterError("negative vertex id");
    out.push_back(static_cast<Vertex>(v));
  }
  if (!is.eof()) throw ParameterError("bad vertex list '" + s + "'");
  return out;
}

mpq_class parse_rational(const std::string& s) {
  mpq_class x;
  if (x.set_str(s, 10) != 0) throw ParameterError("bad rational '" + s + "'");
  x.canonicalize();
  return x;
}

void write_graph_to(Ctx& c, const std::string& name, const Hypergraph& g) {
  c.artifact(name, [&](std::ostream& os) { io::write_graph(os, g); });
}

void write_cliques_to(Ctx& c, const std::string& name, int n, int q, int r, const std::vector<Clique>& cl) {
  c.artifact(name, [&](std::ostream& os) { io::write_packing(os, Packing{n, q, r, cl}); });
}

FractionalWeighting load_weighting(const std::string& path, const Hypergraph& host, int q) {
  return io::read_file<FractionalWeighting>(path, [&](std::istream& in) { return read_weighting(in, host, q); });
}

// ---------------------------------------------------------------------------
// omni certificate directories

void save_certificate(Ctx& c, const OmniAbsorberCertificate& cert) {
  if (c.out.empty()) throw ParameterError("omni build needs --out DIR for the certificate directory");
  const int n = std::max(cert.x.n(), cert.a.n());
  Hypergraph x = cert.x, a = cert.a;
  x.resize(n);
  a.resize(n);
  write_graph_to(c, "x.txt", x);
  write_graph_to(c, "a.txt", a);
  write_cliques_to(c, "family.txt", n, cert.q, x.r(), cert.family);
  c.artifact("manifest.txt", [&](std::ostream& os) {
    os << "kind=" << cert.kind << "\nq=" << cert.q << "\nr=" << x.r() << "\nn=" << n << "\nc_bound=" << cert.c_bound
       << "\nx=x.txt\na=a.txt\nfamily=family.txt\n";
  });
}

std::map<std::string, std::string> read_kv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(path + ": expected key=value, got '" + line + "'");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

OmniAbsorberCertificate load_certificate(const std::string& dir) {
  auto kv = read_kv((fs::path(dir) / "manifest.txt").string());
  for (const char* k : {"kind", "q", "r", "c_bound", "x", "a", "family"})
    if (!kv.count(k)) throw ParseError("manifest is missing '" + std::string(k) + "'");
  const int q = std::stoi(kv["q"]);
  const int r = std::stoi(kv["r"]);
  Hypergraph x = io::load_graph((fs::path(dir) / kv["x"]).string());
  Hypergraph a = io::load_graph((fs::path(dir) / kv["a"]).string());
  auto fam = io::load_packing((fs::path(dir) / kv["family"]).string(), r);
  return certificate_from_family(x, a, q, fam.packing.cliques, std::stoll(kv["c_bound"]), kv["kind"]);
}

// ---------------------------------------------------------------------------
// embed manifests: "j <graph>", "gadget <base-graph> <gadget-graph>", "c <bound>"

SupergraphSystem load_system(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  const fs::path base = fs::path(path).parent_path();
  auto rel = [&](const std::string& p) { return fs::path(p).is_absolute() ? p : (base / p).string(); };
  SupergraphSystem s;
  bool have_j = false;
  std::string line;
  int no = 0;
  while (std::getline(in, line)) {
    ++no;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    std::string p1, p2;
    if (tag == "j" && (ls >> p1)) {
      s.j = io::load_multigraph(rel(p1));
      have_j = true;
    } else if (tag == "gadget" && (ls >> p1 >> p2)) {
      Hypergraph h = io::load_graph(rel(p1));
      Hypergraph w = io::load_graph(rel(p2));
      s.w.push_back(RootedGadget{w, h.touched_vertices()});
      s.h.push_back(std::move(h));
    } else if (tag == "c" && (ls >> s.c_bound)) {
    } else {
      throw ParseError(path + ": line " + std::to_string(no) + ": unrecognised entry");
    }
  }
  if (!have_j) throw ParseError(path + ": no 'j' line");
  return s;
}

void write_stats(const std::string& path, const json& j) {
  if (path.empty()) return;
  io::save(path, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
}

json pack_stats(const Hypergraph& g, const PackResult& res) {
  const double frac = g.empty() ? 0.0 : static_cast<double>(res.leftover.size()) / static_cast<double>(g.size());
  return json{{"cliques", res.packing.cliques.size()}, {"leftover_edges", res.leftover.size()},
              {"leftover_fraction", frac}, {"rounds", res.rounds}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"absorb-kit: clique decompositions, absorbers and triple systems"};
  app.require_subcommand(1);
  app.fallthrough();
  Ctx ctx;
  app.add_option("--seed", ctx.seed, "base seed");
  app.add_option("--out", ctx.out, "directory for artifacts");
  app.add_flag("--json", ctx.json_mode, "print the report as JSON");
  app.set_config("--config", "", "key=value configuration file");

  std::function<int()> run;
  auto bind = [&](CLI::App* sub, std::function<int()> f) { sub->callback([&run, f] { run = f; }); };

  // divide ------------------------------------------------------------------
  auto* divide = app.add_subcommand("divide", "divisibility")->require_subcommand(1);
  std::string graph_path;
  int q = 3;
  bool multi = false;
  std::vector<std::int64_t> params;
  {
    auto* check = divide->add_subcommand("check", "K_q divisibility of a graph or of design parameters");
    check->add_option("graph", graph_path, "graph file");
    check->add_option("--q", q, "clique size");
    check->add_flag("--multi", multi, "read a multigraph");
    check->add_option("--params", params, "n,q,r,lambda")->delimiter(',')->expected(4);
    bind(check, [&] {
      if (!params.empty()) {
        DesignParams p{params[0], params[1], params[2], params[3]};
        auto levels = admissibility_by_level(p);
        bool all = true;
        for (std::size_t i = 0; i < levels.size(); ++i) {
          ctx.put("level_" + std::to_string(i), levels[i] ? "divides" : "fails");
          all = all && levels[i];
        }
        ctx.put("admissible", all);
        ctx.flush();
        return all ? 0 : 1;
      }
      if (graph_path.empty()) throw ParameterError("give a graph file or --params");
      bool ok = multi ? is_divisible(io::load_multigraph(graph_path), q) : is_divisible(io::load_graph(graph_path), q);
      ctx.put("divisible", ok);
      ctx.flush();
      return ok ? 0 : 1;
    });
  }

  // cover -------------------------------------------------------------------
  std::int64_t count_cap = 0, budget = kDefaultNodeBudget;
  {
    auto* cover = app.add_subcommand("cover", "exact decomposition search")->require_subcommand(1);
    auto* solve = cover->add_subcommand("solve", "find (or count) K_q decompositions");
    solve->add_option("graph", graph_path, "graph file")->required();
    solve->add_option("--q", q, "clique size");
    solve->add_option("--count", count_cap, "count decompositions up to this cap");
    solve->add_option("--budget", budget, "search node budget");
    solve->add_flag("--multi", multi, "read a multigraph");
    bind(solve, [&] {
      MultiHypergraph g = multi ? io::load_multigraph(graph_path) : MultiHypergraph::from_simple(io::load_graph(graph_path));
      if (count_cap > 0) {
        auto cr = count_decompositions(g, q, count_cap, nullptr, budget);
        ctx.put("count", cr.count);
        ctx.put("capped", cr.count >= count_cap);
        ctx.flush();
        return cr.count > 0 ? 0 : 1;
      }
      auto d = find_decomposition(g, q, nullptr, budget);
      if (!d) {
        std::cout << "NONE (exhaustive)\n";
        ctx.stdout_used = true;
        ctx.put("decomposable", false);
        ctx.flush();
        return 1;
      }
      ctx.artifact("decomposition.txt", [&](std::ostream& os) { io::write_packing(os, d->packing(), graph_path); });
      ctx.put("decomposable", true);
      ctx.put("cliques", d->size());
      ctx.flush();
      return 0;
    });
  }

  // integral ----------------------------------------------------------------
  bool reduce = false;
  {
    auto* integral = app.add_subcommand("integral", "integral decompositions")->require_subcommand(1);
    auto* solve = integral->add_subcommand("solve", "integer clique weights with edge sums chi_L");
    solve->add_option("graph", graph_path, "graph file")->required();
    solve->add_option("--q", q, "clique size");
    solve->add_flag("--reduce", reduce, "shrink support and L1 by kernel subtraction");
    bind(solve, [&] {
      Hypergraph l = io::load_graph(graph_path);
      auto w = integral_decomposition(l, q, reduce);
      if (!w) {
        ctx.put("solvable", false);
        ctx.flush();
        return 1;
      }
      ctx.artifact("weighting.txt", [&](std::ostream& os) { write_weighting(os, *w); });
      ctx.put("solvable", true);
      ctx.put("verified", verify_integral(l, *w));
      ctx.put("support", w->support());
      ctx.put("l1", w->l1().get_str());
      ctx.flush();
      return 0;
    });
  }

  // gadget ------------------------------------------------------------------
  std::string edge_arg, host_path;
  int r = 2;
  bool lift = false, search_boosters = false;
  std::size_t max_edges = 12;
  auto report_gadget = [&](const RootedGadget& g) {
    write_graph_to(ctx, "gadget.txt", g.w);
    std::string roots;
    for (Vertex v : g.roots) roots += (roots.empty() ? "" : ",") + std::to_string(v);
    ctx.put("roots", roots);
    ctx.put("edges", g.w.size());
    ctx.put("vertices", g.w.touched_vertices().size());
    if (g.w.r() == 2) ctx.put("rooted_degeneracy", rooted_degeneracy(g));
  };
  {
    auto* gadget = app.add_subcommand("gadget", "anti-edges, fake-edges, boosters, absorbers")->require_subcommand(1);

    auto* anti = gadget->add_subcommand("anti", "clique minus an edge");
    anti->add_option("--edge", edge_arg, "edge, e.g. 0,1")->required();
    anti->add_option("--q", q, "clique size");
    bind(anti, [&] {
      Edge e(parse_vertices(edge_arg));
      RootedGadget g = anti_edge(e, q);
      report_gadget(g);
      Hypergraph whole = g.w;
      whole.resize(std::max<int>(whole.n(), static_cast<int>(e.back()) + 1));
      whole.add(e);
      ctx.put("completes_to_clique", find_decomposition(whole, q).has_value() && whole.size() == binom(q, e.size()));
      ctx.flush();
      return 0;
    });

    auto* fake = gadget->add_subcommand("fake", "gadget divisibility-equivalent to an edge");
    fake->add_option("--edge", edge_arg, "edge, e.g. 0,1")->required();
    fake->add_option("--q", q, "clique size");
    fake->add_option("--host", host_path, "check divisibility equivalence against this host");
    bind(fake, [&] {
      Edge e(parse_vertices(edge_arg));
      RootedGadget g = fake_edge(e, q);
      report_gadget(g);
      int rc = 0;
      if (!host_path.empty()) {
        bool eq = is_divisibility_equivalent(io::load_graph(host_path), e, g, q);
        ctx.put("divisibility_equivalent", eq);
        rc = eq ? 0 : 1;
      }
      ctx.flush();
      return rc;
    });

    auto* booster = gadget->add_subcommand("booster", "graph with two clique-disjoint decompositions");
    booster->add_option("--q", q, "clique size");
    booster->add_option("--r", r, "uniformity");
    booster->add_flag("--lift", lift, "lift the trivial 1-uniform booster for clique size q-1");
    bind(booster, [&] {
      Booster b;
      if (lift) b = booster_lift(trivial_booster_1d(q - 1));
      else if (r == 1) b = trivial_booster_1d(q);
      else b = default_booster(q, r);
      write_graph_to(ctx, "booster.txt", b.b);
      write_cliques_to(ctx, "on.txt", b.b.n(), b.q, b.b.r(), b.on);
      write_cliques_to(ctx, "off.txt", b.b.n(), b.q, b.b.r(), b.off);
      ctx.put("edges", b.b.size());
      ctx.put("vertices", b.b.touched_vertices().size());
      ctx.put("on", b.on.size());
      ctx.put("off", b.off.size());
      ctx.put("verified", is_booster(b));
      ctx.flush();
      return 0;
    });

    auto* absorber = gadget->add_subcommand("absorber", "absorber for a divisible graph L");
    absorber->add_option("graph", graph_path, "graph file for L")->required();
    absorber->add_option("--q", q, "clique size");
    absorber->add_option("--max-edges", max_edges, "largest L handled");
    absorber->add_option("--budget", budget, "search node budget");
    absorber->add_flag("--search-boosters", search_boosters, "search for boosters instead of the default ones");
    bind(absorber, [&] {
      Hypergraph l = io::load_graph(graph_path);
      AbsorberOptions opt;
      opt.max_edges = max_edges;
      opt.search_boosters = search_boosters;
      opt.budget = budget;
      AbsorberCertificate c = build_absorber(l, q, opt);
      write_graph_to(ctx, "a.txt", c.a);
      write_cliques_to(ctx, "d1.txt", c.d1.packing().n, q, l.r(), c.d1.cliques());
      write_cliques_to(ctx, "d2.txt", c.d2.packing().n, q, l.r(), c.d2.cliques());
      ctx.put("method", c.method);
      ctx.put("edges", c.a.size());
      ctx.put("vertices", c.a.touched_vertices().size());
      ctx.put("edge_intersecting", is_edge_intersecting(c.gadget(), l));
      ctx.put("verified", verify_absorber(c));
      ctx.flush();
      return 0;
    });
  }

  // omni --------------------------------------------------------------------
  std::string cert_dir, mode = "exhaustive";
  int m = 6;
  std::int64_t trials = 100;
  {
    auto* omni = app.add_subcommand("omni", "omni-absorbers")->require_subcommand(1);
    auto* b1 = omni->add_subcommand("build-1d", "1-uniform omni-absorber on m vertices");
    b1->add_option("--m", m, "number of vertices of X");
    b1->add_option("--q", q, "clique size");
    bind(b1, [&] {
      std::vector<Edge> es;
      for (int v = 0; v < m; ++v) es.push_back(Edge{static_cast<Vertex>(v)});
      auto cert = omni_1d(Hypergraph(m, 1, es), q);
      save_certificate(ctx, cert);
      ctx.put("kind", cert.kind);
      ctx.put("a_edges", cert.a.size());
      ctx.put("family", cert.family.size());
      ctx.put("c_bound", cert.c_bound);
      ctx.flush();
      return 0;
    });

    auto* bs = omni->add_subcommand("build-small", "union of private absorbers over all divisible L of X");
    bs->add_option("graph", graph_path, "graph file for X")->required();
    bs->add_option("--q", q, "clique size");
    bind(bs, [&] {
      OmniSmallStats st;
      auto cert = omni_small(io::load_graph(graph_path), q, &st);
      save_certificate(ctx, cert);
      ctx.put("kind", cert.kind);
      ctx.put("divisible_subgraphs", st.divisible_subgraphs);
      ctx.put("a_edges", cert.a.size());
      ctx.put("family", cert.family.size());
      ctx.put("c_bound", cert.c_bound);
      ctx.flush();
      return 0;
    });

    auto* ver = omni->add_subcommand("verify", "re-check the omni property from a certificate directory");
    ver->add_option("dir", cert_dir, "certificate directory")->required();
    ver->add_option("--mode", mode, "exhaustive or sample")->check(CLI::IsMember({"exhaustive", "sample"}));
    ver->add_option("--trials", trials, "sampled subgraphs");
    bind(ver, [&] {
      auto cert = load_certificate(cert_dir);
      auto rep = verify_omni(cert, mode == "sample" ? OmniMode::sample : OmniMode::exhaustive, trials, ctx.seed);
      ctx.put("tested", rep.tested);
      ctx.put("passed", rep.passed);
      ctx.put("failures", rep.failures.size());
      for (std::size_t i = 0; i < rep.failures.size() && i < 5; ++i) ctx.put("failure_" + std::to_string(i), rep.failures[i]);
      ctx.flush();
      return rep.ok() ? 0 : 1;
    });

    auto* ref = omni->add_subcommand("refinedness", "max family members through one edge of X or A");
    ref->add_option("dir", cert_dir, "certificate directory")->required();
    bind(ref, [&] {
      auto cert = load_certificate(cert_dir);
      auto c = refinedness(cert);
      ctx.put("refinedness", c);
      ctx.put("c_bound", cert.c_bound);
      ctx.put("within_bound", c <= cert.c_bound);
      ctx.flush();
      return c <= cert.c_bound ? 0 : 1;
    });
  }

  // embed -------------------------------------------------------------------
  std::string system_path;
  std::int64_t degree_budget = 0;
  {
    auto* embed = app.add_subcommand("embed", "embed a supergraph system into a host");
    embed->add_option("--system", system_path, "system manifest")->required();
    embed->add_option("--host", host_path, "host graph")->required();
    embed->add_option("--budget", degree_budget, "degree budget on (r-1)-sets (0: automatic)");
    bind(embed, [&] {
      SupergraphSystem s = load_system(system_path);
      Hypergraph g = io::load_graph(host_path);
      EmbedOptions opt;
      opt.degree_budget = degree_budget;
      auto emb = embed_system(s, g, ctx.seed, opt);
      if (!emb) throw BudgetError("no embedding found within the restart budget");
      write_graph_to(ctx, "image.txt", emb->image);
      ctx.artifact("maps.txt", [&](std::ostream& os) {
        for (std::size_t i = 0; i < emb->phi.size(); ++i) {
          std::map<Vertex, Vertex> sorted(emb->phi[i].begin(), emb->phi[i].end());
          os << "gadget " << i;
          for (auto [a, b] : sorted) os << ' ' << a << "->" << b;
          os << '\n';
        }
      });
      ctx.put("gadgets", emb->phi.size());
      ctx.put("image_edges", emb->image.size());
      ctx.put("max_degree", emb->max_degree);
      ctx.put("restarts", emb->restarts);
      ctx.flush();
      return 0;
    });
  }

  // lp ----------------------------------------------------------------------
  std::string cap_arg, weights_path, multiplier_arg, must_arg;
  int s_size = 0;
  double frac = -1;
  {
    auto* lp = app.add_subcommand("lp", "fractional decompositions")->require_subcommand(1);
    auto* solve = lp->add_subcommand("solve", "exact LP feasibility");
    solve->add_option("graph", graph_path, "graph file")->required();
    solve->add_option("--q", q, "clique size");
    solve->add_option("--cap", cap_arg, "low-weight constant C (weights <= C / n^(q-2))");
    bind(solve, [&] {
      Hypergraph g = io::load_graph(graph_path);
      std::optional<mpq_class> cap;
      if (!cap_arg.empty()) {
        mpz_class npow;
        mpz_ui_pow_ui(npow.get_mpz_t(), static_cast<unsigned long>(g.n()), static_cast<unsigned long>(q - 2));
        cap = mpq_class(parse_rational(cap_arg) / mpq_class(npow));
        cap->canonicalize();
      }
      LpResult res = fractional_decomposition(g, q, cap);
      ctx.put("method", res.method);
      ctx.put("pivots", res.pivots);
      if (res.weighting) {
        ctx.artifact("weighting.txt", [&](std::ostream& os) { write_weighting(os, *res.weighting); });
        ctx.put("feasible", true);
        ctx.put("support", res.weighting->weights.size());
        ctx.put("verified", is_fractional_decomposition(*res.weighting));
        ctx.flush();
        return 0;
      }
      ctx.artifact("farkas.txt", [&](std::ostream& os) {
        for (std::size_t i = 0; i < res.rows.size(); ++i)
          if (res.farkas[i] != 0) os << res.farkas[i].get_str() << ' ' << res.rows[i].str() << '\n';
      });
      ctx.put("feasible", false);
      ctx.put("certificate_verified", check_farkas(res, g.r(), cap));
      ctx.flush();
      return 1;
    });

    auto* boost = lp->add_subcommand("boost", "sample a clique family from a fractional decomposition");
    boost->add_option("weights", weights_path, "weighting file")->required();
    boost->add_option("--host", host_path, "host graph")->required();
    boost->add_option("--q", q, "clique size");
    boost->add_option("--multiplier", multiplier_arg, "inclusion multiplier (default binom(n-r,q-r)/2)");
    bind(boost, [&] {
      Hypergraph g = io::load_graph(host_path);
      FractionalWeighting w = load_weighting(weights_path, g, q);
      if (!is_fractional_decomposition(w)) throw PreconditionError("weighting is not a fractional decomposition of the host");
      mpq_class mult = multiplier_arg.empty() ? default_boost_multiplier(g.n(), q, g.r()) : parse_rational(multiplier_arg);
      BoostFamily fam = boost_sample(w, mult, ctx.seed);
      write_cliques_to(ctx, "family.txt", g.n(), q, g.r(), fam.cliques);
      ctx.put("cliques", fam.cliques.size());
      ctx.put("c_hat", fam.c_hat);
      ctx.put("gamma_hat", fam.gamma_hat);
      ctx.put("clamped", fam.clamped);
      ctx.flush();
      return 0;
    });

    auto* inherit = lp->add_subcommand("inherit", "minimum degree of random induced subgraphs");
    inherit->add_option("graph", graph_path, "graph file")->required();
    inherit->add_option("--s", s_size, "subset size")->required();
    inherit->add_option("--trials", trials, "samples");
    inherit->add_option("--must", must_arg, "vertices every subset contains, e.g. 0,1");
    inherit->add_option("--frac", frac, "threshold as a fraction of s-1 (default delta(G)/(n-1) - 0.05)");
    bind(inherit, [&] {
      Hypergraph g = io::load_graph(graph_path);
      std::vector<Vertex> all(static_cast<std::size_t>(g.n()));
      std::iota(all.begin(), all.end(), Vertex{0});
      double f = frac;
      if (f < 0) f = static_cast<double>(min_degree_induced(g, all)) / (g.n() - 1) - 0.05;
      auto st = inheritance_stats(g, s_size, parse_vertices(must_arg), trials, ctx.seed, [f](int s) { return f * (s - 1); });
      ctx.put("threshold_fraction", f);
      ctx.put("trials", st.trials);
      ctx.put("successes", st.successes);
      ctx.put("fraction", st.fraction);
      ctx.put("min_degree_seen", st.min_degree_seen);
      ctx.put("mean_min_degree", st.mean_min_degree);
      ctx.flush();
      return 0;
    });
  }

  // nibble ------------------------------------------------------------------
  std::string stats_path, policy = "fewest", source_path, reserves_path, partial_path, packing_path;
  double bite = 1.0, p = 0.3;
  int n = 0, gmax = 4;
  std::vector<int> sizes{1};
  std::vector<int> config_ij;
  std::int64_t max_count = 10000;
  {
    auto* nib = app.add_subcommand("nibble", "packings, reserves, girth and spread")->require_subcommand(1);
    auto add_stats = [&](CLI::App* a) {
      a->add_option("--json-stats", stats_path, "write statistics as JSON to this path");
      a->add_option("--trials", trials, "repetitions");
    };

    auto* runc = nib->add_subcommand("run", "random greedy clique packing");
    runc->add_option("graph", graph_path, "graph file")->required();
    runc->add_option("--q", q, "clique size");
    runc->add_option("--bite", bite, "bite fraction in (0,1]");
    runc->add_option("--policy", policy, "fewest or greedy")->check(CLI::IsMember({"fewest", "greedy"}));
    runc->add_option("--source", source_path, "packing file restricting the clique source");
    add_stats(runc);
    bind(runc, [&] {
      Hypergraph g = io::load_graph(graph_path);
      std::vector<Clique> src;
      NibbleParams np;
      np.bite = bite;
      np.policy = policy == "greedy" ? NibblePolicy::greedy : NibblePolicy::fewest_options;
      if (!source_path.empty()) {
        src = io::load_packing(source_path, g.r()).packing.cliques;
        np.source = &src;
      }
      json runs = json::array();
      std::vector<double> fr;
      std::optional<PackResult> first;
      for (std::int64_t t = 0; t < std::max<std::int64_t>(trials, 1); ++t) {
        np.seed = t == 0 ? ctx.seed : derive_seed(ctx.seed, static_cast<std::uint64_t>(t));
        PackResult res = random_greedy_pack(g, q, np);
        json st = pack_stats(g, res);
        runs.push_back(st);
        fr.push_back(st["leftover_fraction"].get<double>());
        if (!first) first = std::move(res);
        if (trials <= 1) break;
      }
      ctx.artifact("packing.txt", [&](std::ostream& os) { io::write_packing(os, first->packing, graph_path); });
      std::sort(fr.begin(), fr.end());
      ctx.put("cliques", first->packing.cliques.size());
      ctx.put("leftover_edges", first->leftover.size());
      ctx.put("runs", fr.size());
      ctx.put("median_leftover_fraction", fr[fr.size() / 2]);
      write_stats(stats_path, json{{"runs", runs}, {"median_leftover_fraction", fr[fr.size() / 2]}});
      ctx.flush();
      return 0;
    });

    auto* res = nib->add_subcommand("reserve", "random reserve edges with lemma verdicts");
    res->add_option("--n", n, "vertices")->required();
    res->add_option("--q", q, "clique size");
    res->add_option("--r", r, "uniformity");
    res->add_option("--p", p, "edge probability");
    res->add_option("--host", host_path, "host graph (default complete)");
    add_stats(res);
    bind(res, [&] {
      std::optional<Hypergraph> host;
      if (!host_path.empty()) host = io::load_graph(host_path);
      std::int64_t deg_ok = 0, cnt_ok = 0;
      json runs = json::array();
      std::optional<ReserveSet> first;
      for (std::int64_t t = 0; t < std::max<std::int64_t>(trials, 1); ++t) {
        std::uint64_t sd = t == 0 ? ctx.seed : derive_seed(ctx.seed, static_cast<std::uint64_t>(t));
        ReserveSet rs = generate_reserves(n, q, r, p, sd, host ? &*host : nullptr);
        deg_ok += rs.degree_ok;
        cnt_ok += rs.count_ok;
        runs.push_back({{"edges", rs.x.size()}, {"max_degree", rs.max_degree}, {"min_count", rs.min_count},
                        {"degree_ok", rs.degree_ok}, {"count_ok", rs.count_ok}});
        if (!first) first = std::move(rs);
        if (trials <= 1) break;
      }
      write_graph_to(ctx, "reserves.txt", first->x);
      ctx.put("edges", first->x.size());
      ctx.put("max_degree", first->max_degree);
      ctx.put("degree_bound", first->degree_bound);
      ctx.put("min_count", first->min_count);
      ctx.put("count_bound", first->count_bound);
      ctx.put("runs", runs.size());
      ctx.put("degree_ok_runs", deg_ok);
      ctx.put("count_ok_runs", cnt_ok);
      if (first->high_min_degree_ok) ctx.put("high_min_degree_ok", *first->high_min_degree_ok);
      write_stats(stats_path, json{{"runs", runs}, {"degree_ok_runs", deg_ok}, {"count_ok_runs", cnt_ok}});
      ctx.flush();
      return 0;
    });

    auto* comp = nib->add_subcommand("complete", "cover the leftover of a partial packing through reserve edges");
    comp->add_option("graph", graph_path, "graph G")->required();
    comp->add_option("--reserves", reserves_path, "reserve graph X")->required();
    comp->add_option("--partial", partial_path, "partial packing of G (default empty)");
    comp->add_option("--q", q, "clique size");
    comp->add_option("--budget", budget, "exact cover node budget for the fallback");
    bind(comp, [&] {
      Hypergraph g = io::load_graph(graph_path);
      Hypergraph x = io::load_graph(reserves_path);
      Packing part{g.n(), q, g.r(), {}};
      if (!partial_path.empty()) part = io::load_packing(partial_path, g.r()).packing;
      auto c = complete_with_reserves(g, x, part, q, ctx.seed, -1, budget);
      if (!c) {
        ctx.put("completed", false);
        ctx.flush();
        return 1;
      }
      ctx.artifact("packing.txt", [&](std::ostream& os) { io::write_packing(os, c->packing); });
      ctx.put("completed", true);
      ctx.put("added", c->added.size());
      ctx.put("retries", c->retries);
      ctx.put("fallback", c->fallback);
      ctx.put("max_reserve_load", c->max_reserve_load);
      ctx.flush();
      return 0;
    });

    auto* hg = nib->add_subcommand("highgirth", "random greedy packing avoiding small configurations");
    hg->add_option("graph", graph_path, "graph file")->required();
    hg->add_option("--q", q, "clique size");
    hg->add_option("--g", gmax, "girth target");
    add_stats(hg);
    bind(hg, [&] {
      Hypergraph g = io::load_graph(graph_path);
      NibbleParams np;
      np.seed = ctx.seed;
      PackResult pr = high_girth_pack(g, q, gmax, np);
      auto gi = girth(pr.packing, q, g.r(), gmax);
      ctx.artifact("packing.txt", [&](std::ostream& os) { io::write_packing(os, pr.packing, graph_path); });
      json st = pack_stats(g, pr);
      st["girth_above_target"] = !gi.has_value();
      write_stats(stats_path, st);
      ctx.put("cliques", pr.packing.cliques.size());
      ctx.put("coverage", 1.0 - st["leftover_fraction"].get<double>());
      ctx.put("girth_above_target", !gi.has_value());
      ctx.flush();
      return 0;
    });

    auto* gi = nib->add_subcommand("girth", "girth and configuration counts of a packing");
    gi->add_option("packing", packing_path, "packing file")->required();
    gi->add_option("--r", r, "uniformity");
    gi->add_option("--gmax", gmax, "largest girth examined");
    gi->add_option("--count", config_ij, "i,j: count i-subsets spanning <= j vertices")->delimiter(',')->expected(2);
    bind(gi, [&] {
      Packing pk = io::load_packing(packing_path, r).packing;
      auto g = girth(pk, pk.q, r, gmax);
      ctx.put("girth", g ? std::to_string(*g) : ">" + std::to_string(gmax));
      if (!config_ij.empty()) ctx.put("configurations", configurations(pk, config_ij[0], config_ij[1]).count);
      ctx.flush();
      return 0;
    });

    auto* sp = nib->add_subcommand("spread", "spread of the uniform law on all decompositions");
    sp->add_option("graph", graph_path, "graph file")->required();
    sp->add_option("--q", q, "clique size");
    sp->add_option("--sizes", sizes, "packing sizes")->delimiter(',');
    sp->add_option("--max-count", max_count, "enumeration cap");
    add_stats(sp);
    bind(sp, [&] {
      Hypergraph g = io::load_graph(graph_path);
      ExactSpread ex = spread_exact(g, q, sizes, max_count);
      auto all = all_decompositions(g, q, max_count);
      DecompositionSampler sampler = [&all](std::uint64_t sd) -> std::optional<std::vector<Clique>> {
        if (all.empty()) return std::nullopt;
        Rng rng(sd);
        return all[rng.below(all.size())].cliques();
      };
      SpreadReport mc = spread_estimate(sampler, sizes, trials, ctx.seed);
      json st{{"decompositions", ex.decompositions}, {"trials", mc.trials}, {"failures", mc.failures}};
      ctx.put("decompositions", ex.decompositions);
      for (const auto& [s, sig] : ex.sigma) ctx.put("sigma_exact_" + std::to_string(s), sig);
      for (const auto& e : mc.per_size) {
        ctx.put("sigma_hat_" + std::to_string(e.size), e.sigma_hat);
        st["per_size"].push_back({{"size", e.size}, {"sigma_hat", e.sigma_hat}, {"sigma_lo", e.sigma_lo},
                                  {"sigma_hi", e.sigma_hi}, {"prob_hat", e.prob_hat}});
      }
      write_stats(stats_path, st);
      ctx.flush();
      return 0;
    });
  }

  // pipeline, oracle, verify ------------------------------------------------
  PipelineConfig cfg;
  bool no_fallback = false;
  int lambda = 1;
  {
    auto* pl = app.add_subcommand("pipeline", "Steiner triple system through reserves, absorber, boost and nibble");
    pl->add_option("--n", cfg.n, "vertices");
    pl->add_option("--lambda", cfg.lambda, "index");
    pl->add_option("--p", cfg.p, "reserve probability");
    pl->add_option("--omni", cfg.omni_mode, "omni mode");
    pl->add_option("--reserve-cap", cfg.reserve_cap, "edges kept in X");
    pl->add_option("--budget", cfg.fallback_budget, "exact cover nodes per residual attempt");
    pl->add_flag("--no-fallback", no_fallback, "report failure instead of falling back to exact cover");
    bind(pl, [&] {
      cfg.seed = ctx.seed;
      cfg.out_dir = ctx.out;
      cfg.allow_fallback = !no_fallback;
      PipelineReport rep = pipeline_steiner(cfg);
      json j = report_json(cfg, rep);
      for (auto it = j.begin(); it != j.end(); ++it) ctx.put(it.key(), it.value());
      if (ctx.out.empty() && rep.design) {
        io::write_packing(std::cout, rep.design->packing());
        ctx.stdout_used = true;
      }
      ctx.flush();
      return rep.design ? 0 : 2;
    });

    auto* orc = app.add_subcommand("oracle", "direct Steiner triple system construction");
    orc->add_option("--n", n, "vertices")->required();
    bind(orc, [&] {
      Decomposition d = oracle_steiner(n);
      ctx.artifact("sts.txt", [&](std::ostream& os) { io::write_packing(os, d.packing()); });
      ctx.put("triples", d.size());
      ctx.put("verified", verify_design(d, DesignParams{n, 3, 2, 1}).pass);
      ctx.flush();
      return 0;
    });

    auto* ver = app.add_subcommand("verify", "exact coverage check of a design file");
    ver->add_option("file", packing_path, "design file")->required();
    ver->add_option("--n", n, "points (default from the file)");
    ver->add_option("--r", r, "uniformity");
    ver->add_option("--lambda", lambda, "index");
    bind(ver, [&] {
      Packing pk = io::load_packing(packing_path, r).packing;
      DesignParams dp{n > 0 ? n : pk.n, pk.q, r, lambda};
      DesignReport rep = verify_design(pk.cliques, dp);
      ctx.put("pass", rep.pass);
      ctx.put("blocks", pk.cliques.size());
      ctx.put("malformed", rep.malformed);
      std::string hist;
      for (auto [k, v] : rep.histogram) hist += (hist.empty() ? "" : ",") + std::to_string(k) + ":" + std::to_string(v);
      ctx.put("histogram", hist);
      ctx.flush();
      return rep.pass ? 0 : 1;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 3;
  }
  try {
    return run();
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return exit_code(e.kind());
  } catch (const std::invalid_argument& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
