#pragma once

#include <absorb/divide.hpp>
#include <absorb/embed.hpp>
#include <absorb/exactcover.hpp>
#include <absorb/fraclp.hpp>
#include <absorb/io.hpp>
#include <absorb/nibble.hpp>
#include <absorb/omni.hpp>
#include <absorb/steiner.hpp>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

namespace absorb {

struct PipelineConfig {
  int n = 7;
  int q = 3;
  int r = 2;
  int lambda = 1;
  double p = 0.3;  // reserve probability
  std::uint64_t seed = 0;
  std::string omni_mode = "small";
  std::int64_t reserve_cap = 12;          // e(X) after truncation
  std::int64_t fallback_budget = 200000;  // exact-cover nodes per residual attempt
  bool allow_fallback = true;
  std::string out_dir;  // empty: no artifacts

  void validate() const {
    if (q != 3 || r != 2) throw UnsupportedError("the pipeline orchestrates triangle systems (q = 3, r = 2) only");
    if (lambda < 1) throw ParameterError("lambda must be at least 1");
    DesignParams dp{n, q, r, lambda};
    if (n <= q || !params_admissible(dp))
      throw ParameterError("n = " + std::to_string(n) + " is not admissible for (q, r, lambda) = (3, 2, " +
                           std::to_string(lambda) + ")");
    if (n % 6 != 1 && n % 6 != 3) throw ParameterError("the pipeline unions Steiner triple systems, which need n = 1, 3 mod 6");
    if (omni_mode == "1d") throw UnsupportedError("the 1-uniform omni-absorber is a demo; the pipeline needs omni mode small");
    if (omni_mode != "small") throw ParameterError("unknown omni mode '" + omni_mode + "'");
    if (n > 45) throw CapacityError("omni mode small supports n <= 45");
    if (!(p > 0.0 && p < 1.0)) throw ParameterError("reserve probability must lie in (0, 1)");
    if (reserve_cap < 0 || reserve_cap > 12) throw ParameterError("reserve cap must lie in [0, 12]");
  }
};

struct StageLog {
  std::string stage;
  std::string status;  // ok, failed, skipped
  std::string detail;
};

struct PipelineReport {
  std::optional<Decomposition> design;
  std::vector<StageLog> stages;
  std::string fallback = "none";  // none, residual, rollback, full, oracle
  std::int64_t reserve_sampled = 0;
  std::int64_t reserve_kept = 0;
  std::int64_t divisible_subgraphs = 0;
  std::int64_t absorber_edges = 0;
  std::int64_t lp_support = 0;
  std::int64_t boost_size = 0;
  std::int64_t nibble_size = 0;
  std::int64_t nibble_leftover = 0;
  std::int64_t completion_added = 0;
  std::int64_t absorbed_cliques = 0;
  DesignReport verification;

  bool fallback_used() const { return fallback != "none"; }
};

namespace detail {

inline void log_stage(PipelineReport& rep, std::string stage, std::string status, std::string detail) {
  rep.stages.push_back({std::move(stage), std::move(status), std::move(detail)});
}

inline Clique map_clique(const Clique& c, const std::unordered_map<Vertex, Vertex>& phi) {
  std::vector<Vertex> v;
  for (Vertex x : c) {
    auto it = phi.find(x);
    v.push_back(it == phi.end() ? x : it->second);
  }
  return Clique(v);
}

class Artifacts {
 public:
  explicit Artifacts(std::string dir) : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }
  template <class F>
  void write(const std::string& name, F&& f) const {
    if (dir_.empty()) return;
    std::ofstream os(std::filesystem::path(dir_) / name);
    if (!os) throw ParameterError("cannot write " + name);
    f(os);
  }

 private:
  std::string dir_;
};

}  // namespace detail

/// One (n,3,2)-Steiner system built by the four-step proof structure, with
/// an exact-cover fallback on failure.
inline PipelineReport pipeline_steiner_once(const PipelineConfig& cfg, const detail::Artifacts& out, std::uint64_t seed) {
  using detail::log_stage;
  PipelineReport rep;
  const int n = cfg.n;
  const Hypergraph kn = Hypergraph::complete(n, 2);
  std::vector<Clique> committed;  // nibble packing, kept by the first fallback
  std::vector<Clique> result;
  std::string failed_at;

  // (1) reserves
  Hypergraph x(n, 2);
  try {
    ReserveSet rs = generate_reserves(n, 3, 2, cfg.p, derive_seed(seed, 1));
    rep.reserve_sampled = static_cast<std::int64_t>(rs.x.size());
    std::vector<Edge> xe = rs.x.edges();
    Rng rng(derive_seed(seed, 2));
    rng.shuffle(xe);
    if (static_cast<std::int64_t>(xe.size()) > cfg.reserve_cap) xe.resize(static_cast<std::size_t>(cfg.reserve_cap));
    x = Hypergraph(n, 2, xe);
    rep.reserve_kept = static_cast<std::int64_t>(x.size());
    out.write("1_reserves.txt", [&](std::ostream& os) { io::write_graph(os, x); });
    log_stage(rep, "reserve", "ok",
              "sampled " + std::to_string(rep.reserve_sampled) + " edges, kept " + std::to_string(rep.reserve_kept) +
                  " (omni capacity); max degree " + std::to_string(rs.max_degree) + (rs.degree_ok ? " within" : " above") +
                  " 2pn");
  } catch (const Error& e) {
    failed_at = "reserve";
    log_stage(rep, "reserve", "failed", e.what());
  }

  // (2) omni-absorber on X, embedded into K_n away from X
  Hypergraph a(n, 2);
  std::vector<std::vector<Clique>> d1, d2;  // mapped, per divisible L
  std::map<std::vector<Edge>, std::size_t> part_of;
  if (failed_at.empty()) {
    try {
      OmniSmallStats st;
      AbsorberOptions ao;
      ao.fresh_start = static_cast<Vertex>(n);
      OmniAbsorberCertificate cert = omni_small(x, 3, &st, ao);
      rep.divisible_subgraphs = static_cast<std::int64_t>(st.divisible_subgraphs);
      OmniReport orep = verify_omni(cert);
      ensure(orep.ok(), "omni-absorber failed its exhaustive check");
      SupergraphSystem sys;
      sys.j = MultiHypergraph::from_simple(x);
      std::vector<std::size_t> idx;
      for (std::size_t i = 0; i < cert.parts.size(); ++i) {
        const auto& part = cert.parts[i];
        if (part.a.empty()) continue;
        Hypergraph w = part.a;
        for (const Edge& e : part.l.edges()) w.add(e);
        Hypergraph h = part.l;
        h.resize(w.n());
        sys.h.push_back(h);
        sys.w.push_back({w, part.l.touched_vertices()});
        idx.push_back(i);
      }
      std::optional<Embedding> emb;
      if (!sys.w.empty()) {
        emb = embed_system(sys, kn, derive_seed(seed, 3));
        if (!emb) throw ConstructionError("could not embed the private absorbers into K_n");
      }
      d1.assign(cert.parts.size(), {});
      d2.assign(cert.parts.size(), {});
      std::vector<const std::unordered_map<Vertex, Vertex>*> phis(cert.parts.size(), nullptr);
      for (std::size_t t = 0; t < idx.size(); ++t) phis[idx[t]] = &emb->phi[t];
      static const std::unordered_map<Vertex, Vertex> identity;
      for (std::size_t i = 0; i < cert.parts.size(); ++i) {
        const auto& phi = phis[i] ? *phis[i] : identity;
        for (const Clique& c : cert.parts[i].d1.cliques()) d1[i].push_back(detail::map_clique(c, phi));
        for (const Clique& c : cert.parts[i].d2.cliques()) d2[i].push_back(detail::map_clique(c, phi));
        for (const Edge& e : cert.parts[i].a.edges()) ensure(a.add(detail::map_clique(e, phi)), "absorber images overlap");
        part_of.emplace(cert.parts[i].l.edges(), i);
      }
      rep.absorber_edges = static_cast<std::int64_t>(a.size());
      out.write("2_absorber.txt", [&](std::ostream& os) { io::write_graph(os, a); });
      log_stage(rep, "omni", "ok",
                std::to_string(rep.divisible_subgraphs) + " divisible L, A has " + std::to_string(a.size()) +
                    " edges after embedding, all " + std::to_string(orep.tested) + " L verified");
    } catch (const Error& e) {
      failed_at = "omni";
      log_stage(rep, "omni", "failed", e.what());
    }
  }

  // (3) regularity boost on J = K_n - A - X
  Hypergraph j = difference(difference(kn, a), x);
  BoostFamily boost;
  if (failed_at.empty()) {
    try {
      LpResult lp = fractional_decomposition(j, 3);
      if (!lp.weighting) throw ConstructionError("J has no fractional triangle decomposition");
      rep.lp_support = static_cast<std::int64_t>(lp.weighting->weights.size());
      out.write("3_lp_weights.txt", [&](std::ostream& os) { write_weighting(os, *lp.weighting); });
      boost = boost_sample(*lp.weighting, default_boost_multiplier(n, 3, 2), derive_seed(seed, 4));
      rep.boost_size = static_cast<std::int64_t>(boost.cliques.size());
      out.write("3_boost.txt", [&](std::ostream& os) { io::write_packing(os, Packing{n, 3, 2, boost.cliques}); });
      log_stage(rep, "boost", "ok",
                "LP support " + std::to_string(rep.lp_support) + " (" + lp.method + "), boost family " +
                    std::to_string(boost.cliques.size()) + ", clamped " + std::to_string(boost.clamped));
    } catch (const Error& e) {
      failed_at = "boost";
      log_stage(rep, "boost", "failed", e.what());
    }
  }

  // (4) nibble on J from the boost family, then completion into X, then Q_A
  if (failed_at.empty()) {
    try {
      NibbleParams np;
      np.seed = derive_seed(seed, 5);
      np.source = &boost.cliques;
      // Edges with no reserve triangle are covered first.
      std::vector<Edge> scarce = scarce_reserve_edges(j, x, 3, 0);
      np.priority = &scarce;
      PackResult pk = random_greedy_pack(j, 3, np);
      committed = pk.packing.cliques;
      rep.nibble_size = static_cast<std::int64_t>(committed.size());
      rep.nibble_leftover = static_cast<std::int64_t>(pk.leftover.size());
      out.write("4_nibble.txt", [&](std::ostream& os) { io::write_packing(os, pk.packing); });
      log_stage(rep, "nibble", "ok",
                std::to_string(committed.size()) + " triangles, " + std::to_string(pk.leftover.size()) + " edges left");
      auto comp = complete_with_reserves(j, x, pk.packing, 3, derive_seed(seed, 6));
      if (!comp) throw ConstructionError("leftover edges could not be completed into the reserves");
      rep.completion_added = static_cast<std::int64_t>(comp->added.size());
      out.write("4_completion.txt", [&](std::ostream& os) { io::write_packing(os, Packing{n, 3, 2, comp->added}); });
      log_stage(rep, "complete", "ok",
                std::to_string(comp->added.size()) + " reserve triangles (" + comp->fallback + " fallback)");
      Hypergraph rest = x;
      for (const Clique& c : comp->added)
        for_each_subset(c, 2, [&](const Edge& e) { rest.remove(e); });
      auto it = part_of.find(rest.edges());
      if (it == part_of.end()) throw ConstructionError("unused reserve edges do not form a divisible subgraph of X");
      std::vector<Clique> absorbed = d1[it->second];
      for (std::size_t i = 0; i < d2.size(); ++i)
        if (i != it->second) absorbed.insert(absorbed.end(), d2[i].begin(), d2[i].end());
      rep.absorbed_cliques = static_cast<std::int64_t>(absorbed.size());
      log_stage(rep, "absorb", "ok",
                "Q_A on " + std::to_string(rest.size()) + " unused reserve edges gives " + std::to_string(absorbed.size()) +
                    " triangles");
      result = comp->packing.cliques;
      result.insert(result.end(), absorbed.begin(), absorbed.end());
      if (!decomposes(result, 3, kn)) {
        result.clear();
        throw ConstructionError("assembled triangles do not decompose K_n");
      }
    } catch (const Error& e) {
      failed_at = rep.stages.back().stage == "nibble" ? "complete" : (committed.empty() ? "nibble" : "absorb");
      log_stage(rep, failed_at, "failed", e.what());
    }
  }

  if (result.empty() && !failed_at.empty()) {
    if (!cfg.allow_fallback) {
      log_stage(rep, "fallback", "skipped", "fallback disabled");
      return rep;
    }
    auto try_cover = [&](const std::vector<Clique>& keep, const std::string& kind) -> bool {
      Hypergraph res = kn;
      for (const Clique& c : keep)
        for_each_subset(c, 2, [&](const Edge& e) { res.remove(e); });
      try {
        auto d = find_decomposition(res, 3, nullptr, cfg.fallback_budget);
        if (!d) {
          log_stage(rep, "fallback", "failed", kind + ": residual of " + std::to_string(res.size()) + " edges has no decomposition");
          return false;
        }
        result = keep;
        result.insert(result.end(), d->cliques().begin(), d->cliques().end());
        rep.fallback = kind;
        log_stage(rep, "fallback", "ok", kind + ": exact cover on " + std::to_string(res.size()) + " edges");
        return true;
      } catch (const BudgetError&) {
        log_stage(rep, "fallback", "failed", kind + ": node budget exhausted on " + std::to_string(res.size()) + " edges");
        return false;
      }
    };
    bool done = false;
    if (!committed.empty()) {
      done = try_cover(committed, "residual");
      if (!done) {
        // Roll back packing triangles touching the residual.
        Hypergraph res = kn;
        for (const Clique& c : committed)
          for_each_subset(c, 2, [&](const Edge& e) { res.remove(e); });
        std::set<Vertex> hot;
        for (const Edge& e : res.edges()) hot.insert(e.begin(), e.end());
        std::vector<Clique> keep;
        for (const Clique& c : committed)
          if (std::none_of(c.begin(), c.end(), [&](Vertex v) { return hot.count(v) != 0; })) keep.push_back(c);
        done = try_cover(keep, "rollback");
      }
    }
    if (!done) {
      try {
        auto d = find_decomposition(kn, 3);
        if (d) {
          result = d->cliques();
          rep.fallback = "full";
          log_stage(rep, "fallback", "ok", "full: exact cover of K_n");
          done = true;
        }
      } catch (const BudgetError& e) {
        log_stage(rep, "fallback", "failed", std::string("full: ") + e.what());
      }
    }
    if (!done) {
      result = oracle_steiner(n).cliques();
      rep.fallback = "oracle";
      log_stage(rep, "fallback", "ok", "oracle: direct construction");
    }
  }
  std::sort(result.begin(), result.end());
  rep.design = Decomposition::make(kn, 3, result);
  return rep;
}

inline nlohmann::json report_json(const PipelineConfig& cfg, const PipelineReport& rep) {
  nlohmann::json j;
  j["n"] = cfg.n;
  j["q"] = cfg.q;
  j["r"] = cfg.r;
  j["lambda"] = cfg.lambda;
  j["p"] = cfg.p;
  j["seed"] = cfg.seed;
  j["omni_mode"] = cfg.omni_mode;
  j["reserve_cap"] = cfg.reserve_cap;
  j["note"] = "reserves truncated to the small omni-absorber capacity; the efficient omni-absorber is not used";
  j["fallback"] = rep.fallback;
  j["stats"] = {{"reserve_sampled", rep.reserve_sampled}, {"reserve_kept", rep.reserve_kept},
                {"divisible_subgraphs", rep.divisible_subgraphs}, {"absorber_edges", rep.absorber_edges},
                {"lp_support", rep.lp_support}, {"boost_size", rep.boost_size},
                {"nibble_size", rep.nibble_size}, {"nibble_leftover", rep.nibble_leftover},
                {"completion_added", rep.completion_added}, {"absorbed_cliques", rep.absorbed_cliques}};
  auto& st = j["stages"] = nlohmann::json::array();
  for (const auto& s : rep.stages) st.push_back({{"stage", s.stage}, {"status", s.status}, {"detail", s.detail}});
  j["verified"] = rep.verification.pass;
  nlohmann::json hist = nlohmann::json::object();
  for (const auto& [k, v] : rep.verification.histogram) hist[std::to_string(k)] = v;
  j["coverage_histogram"] = hist;
  j["triples"] = rep.design ? static_cast<std::int64_t>(rep.design->size()) : 0;
  return j;
}

/// Full run: lambda clique-disjoint systems (the first from the pipeline,
/// the rest by exact cover avoiding used triangles), verified, with artifacts.
inline PipelineReport pipeline_steiner(const PipelineConfig& cfg) {
  cfg.validate();
  detail::Artifacts out(cfg.out_dir);
  PipelineReport rep = pipeline_steiner_once(cfg, out, cfg.seed);
  if (!rep.design) return rep;
  std::vector<Clique> all = rep.design->cliques();
  if (cfg.lambda > 1) {
    const Hypergraph kn = Hypergraph::complete(cfg.n, 2);
    std::set<Clique> used(all.begin(), all.end());
    for (int copy = 1; copy < cfg.lambda; ++copy) {
      std::vector<Clique> allowed;
      for (const Clique& c : enumerate_cliques(kn, 3))
        if (!used.count(c)) allowed.push_back(c);
      std::optional<Decomposition> d;
      try {
        d = find_decomposition(kn, 3, &allowed, cfg.fallback_budget * 50);
      } catch (const BudgetError&) {
      }
      if (!d) {
        detail::log_stage(rep, "lambda", "failed", "no clique-disjoint copy " + std::to_string(copy + 1));
        rep.design.reset();
        return rep;
      }
      detail::log_stage(rep, "lambda", "ok", "clique-disjoint copy " + std::to_string(copy + 1) + " by exact cover");
      for (const Clique& c : d->cliques()) used.insert(c);
      all.insert(all.end(), d->cliques().begin(), d->cliques().end());
    }
    std::sort(all.begin(), all.end());
    MultiHypergraph target(cfg.n, 2);
    for (const Edge& e : kn.edges()) target.add(e, cfg.lambda);
    rep.design = Decomposition::make(target, 3, all);
  }
  rep.verification = verify_design(all, DesignParams{cfg.n, 3, 2, cfg.lambda});
  ensure(rep.verification.pass, "pipeline output failed design verification");
  out.write("5_design.txt", [&](std::ostream& os) { io::write_packing(os, rep.design->packing()); });
  out.write("report.json", [&](std::ostream& os) { os << report_json(cfg, rep).dump(2) << '\n'; });
  return rep;
}

}  // namespace absorb
