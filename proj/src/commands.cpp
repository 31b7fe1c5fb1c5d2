#include "compfkg/commands.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <functional>
#include <map>
#include <mutex>
#include <thread>

#include "compfkg/inequalities.hpp"

namespace compfkg {

namespace {

Json base_report(const RunConfig& cfg) {
  Json j;
  j["schema"] = kReportSchema;
  j["command"] = cfg.command;
  j["config"] = config_json(cfg);
  return j;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw SchemaError("cannot write " + path);
}

Json composition_list(const boost::dynamic_bitset<>& classes, const QuotientPoset& q) {
  Json out = Json::array();
  for (auto c = classes.find_first(); c != boost::dynamic_bitset<>::npos; c = classes.find_next(c)) {
    out.push_back(composition_json(q.classes()[c]));
  }
  return out;
}

Json values_json(const CompositionLattice& lat, const std::vector<Rational>& v) {
  Json out = Json::object();
  for (std::size_t i = 0; i < v.size(); ++i) out[composition_key(lat.at(i))] = rational_json(v[i]);
  return out;
}

// Runs fn(i) for i < count on a pool; results stay in index order.
std::vector<Json> parallel_map(std::size_t count, unsigned threads, const std::function<Json(std::size_t)>& fn) {
  std::vector<Json> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex lock;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        out[i] = fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> guard(lock);
        if (!failure) failure = std::current_exception();
        next = count;
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  return out;
}

}  // namespace

Json config_json(const RunConfig& cfg) {
  Json c;
  const auto& cmd = cfg.command;
  if (cmd == "enumerate" || cmd == "verify-fkg") {
    c["n"] = cfg.n;
    c["r"] = cfg.r;
  }
  if (cmd == "verify-fkg") {
    c["mode"] = cfg.mode;
    Json d = Json::array();
    for (const auto& x : cfg.d) d.push_back(rational_json(x));
    c["d"] = d;
  }
  if (cmd == "verify-geometry") {
    c["check"] = cfg.check;
    c["weight"] = cfg.c_path.empty() ? cfg.weight : "file";
    c["kind"] = cfg.kind;
    c["inner_r"] = cfg.inner_r;
    c["r"] = cfg.r;
    c["dim"] = cfg.dim;
    c["allow_rescale"] = cfg.allow_rescale;
    c["exponent"] = cfg.exponent ? Json(*cfg.exponent) : Json(nullptr);
  }
  c["seed"] = cfg.seed;
  c["budget"] = cfg.budget;
  c["caps"] = {{"enumeration", cfg.enumeration_cap}, {"filters", cfg.filter_cap}};
  c["precision_start_bits"] = cfg.precision_start;
  return c;
}

CommandResult run_enumerate(const RunConfig& cfg) {
  auto lat = make_lattice(cfg.n, cfg.r, cfg.enumeration_cap);
  QuotientPoset q(*lat);
  CommandResult res;
  res.report = base_report(cfg);
  Json strata = Json::array();
  for (int s = 0; s < cfg.r; ++s) strata.push_back(lat->stratum_indices(s).size());
  Json out;
  out["size"] = lat->size();
  out["strata"] = strata;
  out["quotient_size"] = q.size();
  out["covers"] = lat->covers().size();
  out["quotient_covers"] = q.covers().size();
  res.report["results"] = out;
  if (!cfg.dot_path.empty()) write_file(cfg.dot_path, to_dot(*lat));
  if (!cfg.quotient_dot_path.empty()) write_file(cfg.quotient_dot_path, to_dot(q));
  if (!cfg.json_path.empty()) write_file(cfg.json_path, dump(lattice_json(*lat)));
  res.summary = "|K_{" + std::to_string(cfg.n) + "," + std::to_string(cfg.r) + "}| = " + std::to_string(lat->size()) +
                "\nstrata " + strata.dump() + "\nquotient size " + std::to_string(q.size());
  return res;
}

CommandResult run_verify_fkg(const RunConfig& cfg) {
  auto lat = make_lattice(cfg.n, cfg.r, cfg.enumeration_cap);
  CommandResult res;
  res.report = base_report(cfg);
  Json out;
  bool violated = false;
  if (cfg.mode == "exhaustive") {
    auto rep = verify_fkg_exhaustive(*lat, cfg.filter_cap, cfg.threads);
    out["lattice_size"] = rep.lattice_size;
    out["quotient_size"] = rep.quotient_size;
    out["filters"] = rep.filters;
    out["pairs_checked"] = rep.pairs_checked;
    out["violations"] = rep.violations;
    out["equality_pairs"] = rep.equality_pairs;
    out["equality_mismatches"] = rep.equality_mismatches;
    out["min_nontrivial_gap"] = rep.min_nontrivial_gap ? Json(*rep.min_nontrivial_gap) : Json(nullptr);
    if (rep.witness) {
      QuotientPoset q(*lat);
      auto filters = enumerate_quotient_filters(q, cfg.filter_cap);
      out["witness"] = {{"X", composition_list(filters[rep.witness->first], q)},
                        {"Y", composition_list(filters[rep.witness->second], q)}};
    }
    violated = rep.violations > 0 || rep.equality_mismatches > 0;
    res.summary = std::to_string(rep.violations) + " violations over " + std::to_string(rep.pairs_checked) +
                  " filter pairs (" + std::to_string(rep.filters) + " filters)";
  } else if (cfg.mode == "random") {
    const std::size_t budget = cfg.budget ? cfg.budget : 1000;
    auto rep = verify_fkg_random(lat, budget, cfg.seed, cfg.threads);
    out["instances"] = rep.instances;
    out["violations"] = rep.violations;
    out["equalities"] = rep.equalities;
    if (rep.witness_instance) {
      out["witness"] = {{"instance", *rep.witness_instance},
                        {"f", values_json(*lat, rep.witness_f)},
                        {"g", values_json(*lat, rep.witness_g)}};
    }
    violated = rep.violations > 0;
    res.summary = std::to_string(rep.violations) + " violations over " + std::to_string(rep.instances) + " random pairs";
  } else if (cfg.mode == "homogeneous") {
    if (static_cast<int>(cfg.d.size()) != cfg.r) throw DomainError("--d needs exactly r values");
    auto rep = verify_homogeneous_instance(lat, cfg.d);
    out["sum_multinomial"] = rational_json(rep.sum_multinomial);
    out["sum_product"] = rational_json(rep.sum_product);
    out["sum_weighted"] = rational_json(rep.sum_weighted);
    out["lattice_size"] = to_string(rep.lattice_size);
    out["lhs"] = rational_json(rep.lhs);
    out["rhs"] = rational_json(rep.rhs);
    out["holds"] = rep.holds;
    out["strict"] = rep.strict;
    out["pushforward"] = fkg_report_json(rep.pushforward);
    violated = !rep.holds || !rep.pushforward.holds;
    res.summary = std::string(rep.holds ? (rep.strict ? "holds strictly" : "holds with equality") : "VIOLATED") +
                  ": lhs " + to_string(rep.lhs) + ", rhs " + to_string(rep.rhs);
  } else {
    throw DomainError("unknown mode '" + cfg.mode + "'");
  }
  out["status"] = violated ? "violation" : "pass";
  res.report["results"] = out;
  res.exit_code = violated ? 2 : 0;
  return res;
}

namespace {

struct Instance {
  std::vector<RationalPolytope> bodies;
  std::vector<NewtonPolyhedron> polyhedra;
  std::optional<MixedVolumeTable> table;
};

Json quadratic_json(const QuadraticReport& q) {
  return {{"mixed", rational_json(q.mixed)},
          {"lhs", rational_json(q.lhs)},
          {"rhs", rational_json(q.rhs)},
          {"holds", q.holds},
          {"equality", q.equality}};
}

Json instance_json(const Instance& in) {
  Json j;
  if (!in.bodies.empty()) {
    j["bodies"] = Json::array();
    for (const auto& b : in.bodies) j["bodies"].push_back(polytope_json(b));
  }
  if (!in.polyhedra.empty()) {
    j["polyhedra"] = Json::array();
    for (const auto& g : in.polyhedra) j["polyhedra"].push_back(newton_json(g));
  }
  return j;
}

class GeometryRunner {
 public:
  explicit GeometryRunner(const RunConfig& cfg) : cfg_(cfg) {}

  Json inputs() {
    Json list = Json::array();
    auto load = [&](const std::string& path) {
      std::uint64_t h = 0;
      auto j = read_json_file(path, &h);
      list.push_back({{"path", path}, {"fnv1a", hex64(h)}});
      return j;
    };
    if (!cfg_.bodies_path.empty()) file_.bodies = bodies_from_json(load(cfg_.bodies_path));
    if (!cfg_.newton_path.empty()) file_.polyhedra = polyhedra_from_json(load(cfg_.newton_path));
    if (!cfg_.table_path.empty()) file_.table = table_from_json(load(cfg_.table_path));
    if (!cfg_.c_path.empty()) c_json_ = load(cfg_.c_path);
    const int sources = !file_.bodies.empty() + !file_.polyhedra.empty() + file_.table.has_value();
    if (sources > 1) throw DomainError("give at most one of --bodies, --newton, --table");
    from_file_ = sources == 1;
    return list;
  }

  bool from_file() const { return from_file_; }

  Json run(std::size_t i) const {
    Instance in = from_file_ ? file_ : random_instance(i);
    Json j = check(in);
    j["instance"] = i;
    if (!from_file_ && cfg_.check != "jensen") j["input"] = instance_json(in);
    return j;
  }

 private:
  bool wants_newton() const {
    const auto& c = cfg_.check;
    return c == "teissier" || c == "corollary1" || c == "durfee" || (c == "corollary2" && cfg_.kind == "covolume");
  }

  Instance random_instance(std::size_t i) const {
    Rng rng = Rng(cfg_.seed).split(i);
    Instance in;
    const auto& c = cfg_.check;
    if (c == "product" || c == "jensen") {
      for (int k = 0; k < 3; ++k) in.bodies.push_back(random_polytope(rng, 3));
      return in;
    }
    int count = cfg_.dim;
    if (c == "durfee") count = cfg_.r > 0 ? cfg_.r : std::max(1, cfg_.dim - 1);
    for (int k = 0; k < count; ++k) {
      if (wants_newton()) {
        in.polyhedra.push_back(random_newton(rng, cfg_.dim));
      } else {
        in.bodies.push_back(random_polytope(rng, cfg_.dim));
      }
    }
    return in;
  }

  LatticeFunction weight(LatticePtr lat) const {
    if (c_json_) return function_from_json(*c_json_, lat);
    const int n = lat->n(), r = lat->r();
    if (cfg_.weight == "constant") return LatticeFunction::constant(lat, 1);
    if (cfg_.weight == "max-part") {
      return LatticeFunction::from(lat, [](const Composition& k) {
        return Rational(*std::max_element(k.parts().begin(), k.parts().end()));
      });
    }
    if (cfg_.weight == "multinomial") {
      return LatticeFunction::from(lat, [&](const Composition& k) {
        std::vector<int> up(k.parts());
        for (int& x : up) ++x;
        return Rational(multinomial(n + r, up));
      });
    }
    throw DomainError("unknown weight '" + cfg_.weight + "'");
  }

  MixFunctionSpec spec(const Instance& in, MixKind kind) const {
    MixFunctionSpec s;
    s.kind = kind;
    if (in.table) {
      s.outer_n = in.table->dim();
      s.outer_r = in.table->bodies();
      s.table = in.table;
    } else if (kind == MixKind::Volume) {
      if (in.bodies.empty()) throw DomainError("this check needs --bodies (or a table)");
      s.outer_n = in.bodies.front().dim();
      s.outer_r = static_cast<int>(in.bodies.size());
      s.bodies = in.bodies;
    } else {
      if (in.polyhedra.empty()) throw DomainError("this check needs --newton (or a table)");
      s.outer_n = in.polyhedra.front().dim();
      s.outer_r = static_cast<int>(in.polyhedra.size());
      s.polyhedra = in.polyhedra;
    }
    s.r = cfg_.inner_r > 0 ? cfg_.inner_r : s.outer_r;
    return s;
  }

  static Json outcome(Json j, bool violated, bool equality) {
    j["outcome"] = violated ? "violation" : (equality ? "equality" : "pass");
    return j;
  }

  Json check(const Instance& in) const {
    const auto& c = cfg_.check;
    if (c == "af") {
      if (in.bodies.empty()) throw DomainError("af needs --bodies");
      auto q = verify_af(in.bodies);
      return outcome(quadratic_json(q), !q.holds, q.equality);
    }
    if (c == "teissier") {
      if (in.polyhedra.empty()) throw DomainError("teissier needs --newton");
      auto q = verify_teissier(in.polyhedra);
      return outcome(quadratic_json(q), !q.holds, q.equality);
    }
    if (c == "product") {
      auto rep = in.table ? verify_product_inequality(*in.table) : verify_product_inequality(in.bodies);
      Json j{{"lhs", rational_json(rep.lhs)},
             {"rhs", rational_json(rep.rhs)},
             {"holds", rep.holds},
             {"equality", rep.equality},
             {"factorization_matches", rep.factorization_matches}};
      j["af"] = Json::array();
      for (const auto& q : rep.af) j["af"].push_back(quadratic_json(q));
      return outcome(j, !rep.holds || !rep.factorization_matches, rep.equality);
    }
    if (c == "jensen") {
      if (in.bodies.size() != 3 && !in.table) throw DomainError("jensen needs three bodies in R^3");
      Rational l, r;
      bool bad = jensen_violated(in.table ? *in.table : mixed_volumes(in.bodies), &l, &r);
      Json j{{"lhs", rational_json(l)}, {"rhs", rational_json(r)}, {"counterexample", bad}};
      if (bad && !in.bodies.empty()) j["bodies"] = instance_json(in)["bodies"];
      // Report only: a counterexample is not a failure.
      j["outcome"] = bad ? "counterexample" : (l == r ? "equality" : "pass");
      return j;
    }
    if (c == "corollary1") {
      auto s = spec(in, MixKind::Covolume);
      auto f = mix_function(s);
      auto rep = verify_corollary_part1(f, weight(f.lattice_ptr()));
      Json j{{"n", s.n()},
             {"r", s.r},
             {"pushforward", fkg_report_json(rep.pushforward)},
             {"theorem_gap", rational_json(rep.theorem_gap)},
             {"paths_agree", rep.paths_agree},
             {"c_direction", rep.c_direction},
             {"f_direction", rep.f_direction},
             {"holds", rep.holds},
             {"equality", rep.equality},
             {"symbolic_equality", rep.symbolic_equality}};
      bool bad = !rep.holds || !rep.paths_agree || rep.equality != rep.symbolic_equality;
      if (!in.table) {
        auto m = verify_symmetrized_monotone(s);
        j["symmetrized_monotone"] = m.monotone;
        j["convexity_violations"] = m.convexity_violations;
        bad = bad || !m.holds();
      }
      return outcome(j, bad, rep.equality);
    }
    if (c == "corollary2") {
      MixKind kind = in.table ? (cfg_.kind == "volume" ? MixKind::Volume : MixKind::Covolume)
                              : (in.bodies.empty() ? MixKind::Covolume : MixKind::Volume);
      auto s = spec(in, kind);
      auto f = mix_function(s);
      const bool exponent = cfg_.exponent.has_value();
      if (exponent && !(kind == MixKind::Volume && s.outer_n == 3 && s.outer_r == 3 && s.r == 3)) {
        throw DomainError("--exponent needs three bodies in R^3 and r = 3");
      }
      auto cw = exponent ? exponent_weight((*cfg_.exponent)[0], (*cfg_.exponent)[1], (*cfg_.exponent)[2])
                         : weight(f.lattice_ptr());
      auto rep = verify_corollary_part2(kind, s.outer_n, f, cw, cfg_.allow_rescale, cfg_.precision_start);
      Json j{{"kind", kind == MixKind::Volume ? "volume" : "covolume"},
             {"n", s.n()},
             {"r", s.r},
             {"rescale", rep.rescale},
             {"expected_sign", rep.expected_sign},
             {"log_gap", certified_sign_json(rep.log_gap)},
             {"status", rep.status},
             {"symbolic_equality", rep.symbolic_equality}};
      bool bad = rep.status == "violated";
      if (exponent) {
        auto e = verify_exponent_inequality(outer_table(s), (*cfg_.exponent)[0], (*cfg_.exponent)[1], (*cfg_.exponent)[2]);
        j["exponent"] = {{"v111", rational_json(e.v111)},
                         {"p3", rational_json(e.p3)},
                         {"p21", rational_json(e.p21)},
                         {"e_mixed", e.e_mixed},
                         {"e_pure", e.e_pure},
                         {"e_pair", e.e_pair},
                         {"holds", e.holds},
                         {"equality", e.equality},
                         {"matches_corollary", e.matches_corollary}};
        bad = bad || !e.holds || !e.matches_corollary;
      }
      Json res = outcome(j, bad, rep.status == "equal");
      if (!bad && rep.status == "indeterminate") res["outcome"] = "indeterminate";
      return res;
    }
    if (c == "durfee") {
      DurfeeReport rep;
      if (in.table) {
        rep = verify_durfee_inequality(in.table->dim() - in.table->bodies(), in.table->bodies(), *in.table);
      } else {
        if (in.polyhedra.empty()) throw DomainError("durfee needs --newton or --table");
        rep = verify_durfee_inequality(in.polyhedra);
      }
      Json j{{"mode", rep.mode},
             {"n", rep.n},
             {"r", rep.r},
             {"sum_c", rational_json(rep.sum_c)},
             {"sum_f", rational_json(rep.sum_f)},
             {"sum_cf", rational_json(rep.sum_cf)},
             {"lattice_size", to_string(rep.lattice_size)},
             {"lhs", rational_json(rep.lhs)},
             {"rhs", rational_json(rep.rhs)},
             {"holds", rep.holds},
             {"equality", rep.equality},
             {"all_equal", rep.all_equal ? Json(*rep.all_equal) : Json(nullptr)},
             {"c_constant", rep.c_constant}};
      bool bad = !rep.holds;
      if (rep.corollary) {
        j["corollary_paths_agree"] = rep.corollary->paths_agree;
        j["corollary_gap"] = rational_json(rep.corollary->pushforward.gap);
        bad = bad || !rep.corollary->paths_agree;
      } else {
        j["corollary_note"] = rep.corollary_note;
      }
      return outcome(j, bad, rep.equality);
    }
    throw DomainError("unknown check '" + c + "'");
  }

  const RunConfig& cfg_;
  Instance file_;
  std::optional<Json> c_json_;
  bool from_file_ = false;
};

}  // namespace

CommandResult run_verify_geometry(const RunConfig& cfg) {
  static const std::vector<std::string> checks{"af", "teissier", "product", "corollary1", "corollary2", "durfee", "jensen"};
  if (std::find(checks.begin(), checks.end(), cfg.check) == checks.end()) {
    throw DomainError("unknown check '" + cfg.check + "'");
  }
  if (cfg.kind != "volume" && cfg.kind != "covolume") throw DomainError("--kind must be volume or covolume");
  GeometryRunner runner(cfg);
  CommandResult res;
  res.report = base_report(cfg);
  res.report["inputs"] = runner.inputs();
  const std::size_t count = runner.from_file() ? 1 : (cfg.budget ? cfg.budget : 100);
  auto results = parallel_map(count, cfg.threads, [&](std::size_t i) { return runner.run(i); });

  std::map<std::string, std::size_t> tally;
  Json first_violation = nullptr;
  for (const auto& r : results) {
    const auto o = r.at("outcome").get<std::string>();
    ++tally[o];
    if (o == "violation" && first_violation.is_null()) first_violation = r;
  }
  Json summary;
  summary["instances"] = count;
  for (const char* key : {"pass", "equality", "indeterminate", "violation", "counterexample"}) summary[key] = tally[key];
  summary["status"] = tally["violation"] ? "violation" : "pass";
  res.report["summary"] = summary;
  if (!first_violation.is_null()) res.report["first_violation"] = first_violation;
  // Whole per-instance detail only for small campaigns.
  if (count <= 20) res.report["results"] = results;
  res.exit_code = tally["violation"] ? 2 : 0;
  res.summary = cfg.check + ": " + std::to_string(count) + " instance(s), " + std::to_string(tally["violation"]) +
                " violation(s), " + std::to_string(tally["equality"]) + " equality";
  if (cfg.check == "jensen") res.summary += ", " + std::to_string(tally["counterexample"]) + " counterexample(s)";
  return res;
}

}  // namespace compfkg
