#include "kinder/commands.hpp"

#include <chrono>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "kinder/altcodes.hpp"
#include "kinder/arith.hpp"
#include "kinder/bimap.hpp"
#include "kinder/criteria.hpp"
#include "kinder/errors.hpp"
#include "kinder/genericity.hpp"
#include "kinder/gf.hpp"
#include "kinder/gf2x.hpp"
#include "kinder/linalg.hpp"
#include "kinder/nursery.hpp"
#include "kinder/parallel.hpp"
#include "kinder/smallgrp.hpp"
#include "kinder/twisted.hpp"

namespace kinder {

using json = nlohmann::ordered_json;

json RunConfig::echo() const {
  json j;
  j["command"] = command;
  j["params"] = params;
  j["seed"] = seed ? json(*seed) : json(nullptr);
  j["trials"] = trials ? json(*trials) : json(nullptr);
  j["caps"] = {{"subgroups", cap_subgroups}, {"iso", cap_iso}};
  j["mode"] = mode;
  j["out"] = out_path;
  return j;
}

namespace {

// Parameter access with typed errors.
class Params {
 public:
  explicit Params(const RunConfig& cfg) : cfg_(cfg), p_(cfg.params) {
    if (!p_.is_object()) throw InvalidArgument("params must be a JSON object");
  }

  bool has(const char* key) const { return p_.contains(key) && !p_.at(key).is_null(); }

  template <class T>
  T get(const char* key) const {
    if (!has(key)) throw InvalidArgument(std::string("missing parameter '") + key + "'");
    try {
      return p_.at(key).get<T>();
    } catch (const nlohmann::json::exception&) {
      throw InvalidArgument(std::string("parameter '") + key + "' has the wrong type");
    }
  }

  template <class T>
  T get(const char* key, T fallback) const {
    return has(key) ? get<T>(key) : fallback;
  }

  std::uint64_t seed() const {
    if (cfg_.seed) return *cfg_.seed;
    if (has("seed")) return get<std::uint64_t>("seed");
    throw InvalidArgument("command '" + cfg_.command + "' is stochastic and needs --seed");
  }

  std::uint64_t trials(std::uint64_t fallback) const {
    if (cfg_.trials) return *cfg_.trials;
    return get<std::uint64_t>("trials", fallback);
  }

  std::string mode(const std::string& fallback) const {
    if (!cfg_.mode.empty()) return cfg_.mode;
    return get<std::string>("mode", fallback);
  }

  const RunConfig& cfg() const { return cfg_; }

 private:
  const RunConfig& cfg_;
  const json& p_;
};

std::uint32_t u32(std::uint64_t v, const char* what) {
  if (v > 0xffffffffu) throw InvalidArgument(std::string(what) + " is out of range");
  return static_cast<std::uint32_t>(v);
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(m.at(i, j));
    rows.push_back(r);
  }
  return rows;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write '" + path + "'");
  out << text;
}

// --------------------------------------------------------------------------

json cmd_field_check(const Params& P) {
  const auto p = u32(P.get<std::uint64_t>("p"), "p");
  const auto e = u32(P.get<std::uint64_t>("e", 1), "e");
  std::optional<Poly> modulus;
  if (P.has("modulus")) modulus = P.get<Poly>("modulus");
  json r;
  r["p"] = p;
  r["e"] = e;
  std::uint64_t q = 1;
  bool small = true;
  for (std::uint32_t i = 0; i < e && small; ++i) {
    q *= p;
    small = q <= Field::kMaxOrder;
  }
  if (!small) {
    if (p != 2) throw InvalidArgument("fields above 2^16 elements are supported only for p = 2");
    const auto F = BinaryField::make(e, modulus);
    r["representation"] = "packed binary";
    r["order"] = "2^" + std::to_string(e);
    r["modulus"] = F->modulus_coeffs();
    std::mt19937_64 rng(P.get<std::uint64_t>("seed", 0));
    std::size_t checks = 0, fails = 0;
    for (int i = 0; i < 64; ++i) {
      const auto a = F->random(rng), b = F->random(rng), c = F->random(rng);
      ++checks;
      if (!(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)))) ++fails;
      if (!a.is_zero() && !(F->mul(a, F->inv(a)) == F->one())) ++fails;
      if (!(F->frobenius(a, e) == a)) ++fails;
    }
    r["random_checks"] = checks;
    r["failures"] = fails;
    r["ok"] = fails == 0;
    return r;
  }
  const FieldPtr F = Field::make(p, e, modulus);
  const Field& f = *F;
  r["representation"] = "table";
  r["order"] = f.order();
  r["modulus"] = f.modulus();
  r["primitive"] = f.primitive();
  r["primitive_order"] = f.multiplicative_order(f.primitive());
  std::size_t fails = 0;
  for (Elem a = 1; a < f.order(); ++a) {
    if (f.mul(a, f.inv(a)) != 1) ++fails;
    if (f.frobenius(a, e) != a) ++fails;
  }
  if (f.multiplicative_order(f.primitive()) != f.order() - 1) ++fails;
  if (f.order() <= 64) {
    for (Elem a = 0; a < f.order(); ++a)
      for (Elem b = 0; b < f.order(); ++b)
        for (Elem c = 0; c < f.order(); ++c)
          if (f.mul(a, f.add(b, c)) != f.add(f.mul(a, b), f.mul(a, c))) ++fails;
    r["distributivity"] = "exhaustive";
  } else {
    r["distributivity"] = "skipped (order > 64)";
  }
  r["failures"] = fails;
  r["ok"] = fails == 0;
  return r;
}

json cmd_hom(const Params& P) {
  const FieldPtr K = Field::of_order(P.get<std::uint64_t>("q"));
  const auto count = P.get<std::size_t>("c", 2);
  const auto s = P.get<std::size_t>("s"), b = P.get<std::size_t>("b");
  const bool end = P.get<bool>("end", false);
  const auto a = end ? s : P.get<std::size_t>("a");
  const auto t = end ? b : P.get<std::size_t>("t");
  const int sign = P.get<int>("sign", 1);
  if (sign != 1 && sign != -1) throw InvalidArgument("sign must be 1 or -1");
  if (!s || !b || !a || !t || !count) throw InvalidArgument("shapes must be positive");
  auto rng = task_rng(P.seed(), 0);
  const MatrixSystem phi = random_system(K, count, s, b, rng);
  const MatrixSystem ups = end ? phi : random_system(K, count, a, t, rng);
  const HomSpace hs = hom_space(phi, ups, sign);
  json r;
  r["field"] = K->describe();
  r["equations"] = count * a * b;
  r["unknowns"] = a * s + b * t;
  r["dim_K"] = hs.dim_K();
  r["dim_Fp"] = hs.dim_Fp();
  json phis = json::array(), upss = json::array();
  for (const auto& m : phi.mats) phis.push_back(matrix_json(m));
  for (const auto& m : ups.mats) upss.push_back(matrix_json(m));
  r["phi"] = phis;
  r["ups"] = upss;
  return r;
}

json cmd_witness(const Params& P) {
  const FieldPtr K = Field::of_order(P.get<std::uint64_t>("q"));
  const auto m = P.get<std::size_t>("m"), n = P.get<std::size_t>("n");
  const MatrixSystem w = witness_system(m, n, K);
  json r;
  r["field"] = K->describe();
  r["count"] = w.size();
  r["dim_K_end"] = end_dimension(w);
  json mats = json::array();
  for (const auto& x : w.mats) mats.push_back(matrix_json(x));
  r["matrices"] = mats;
  return r;
}

json trial_json(const TrialReport& t) {
  json r;
  r["kind"] = to_string(t.kind);
  const auto& p = t.params;
  r["params"] = {{"m", p.m}, {"n", p.n}, {"s", p.s}, {"a", p.a}, {"b", p.b},
                 {"c", p.c}, {"q", p.q}, {"l", p.l}};
  r["exact"] = t.exact;
  r["trials"] = t.trials;
  if (!t.exact) r["seed"] = t.seed;
  r["successes"] = t.successes;
  r["frequency"] = t.frequency;
  if (!t.exact) r["standard_error"] = t.standard_error();
  r["paper_bound"] = t.paper_bound ? json(*t.paper_bound) : json(nullptr);
  if (t.swapped_bound) r["swapped_bound"] = *t.swapped_bound;
  r["observed"] = t.observed;
  json h = json::object();
  for (auto [v, c] : t.histogram) h[std::to_string(v)] = c;
  r["histogram"] = h;
  r["modal"] = t.modal ? json(*t.modal) : json(nullptr);
  if (!t.diag_histogram.empty()) {
    json d = json::object();
    for (auto [v, c] : t.diag_histogram) d[std::to_string(v)] = c;
    r["diagonal_block_histogram"] = d;
  }
  if (!t.note.empty()) r["note"] = t.note;
  return r;
}

json cmd_generic(const Params& P) {
  const ExperimentKind kind = experiment_kind_from_string(P.get<std::string>("kind"));
  ExperimentParams ep;
  ep.m = u32(P.get<std::uint64_t>("m", 0), "m");
  ep.n = u32(P.get<std::uint64_t>("n", 0), "n");
  ep.s = u32(P.get<std::uint64_t>("s", 0), "s");
  ep.a = u32(P.get<std::uint64_t>("a", 0), "a");
  ep.b = u32(P.get<std::uint64_t>("b", 0), "b");
  ep.c = u32(P.get<std::uint64_t>("c", 0), "c");
  ep.l = u32(P.get<std::uint64_t>("l", 0), "l");
  ep.q = P.get<std::uint64_t>("q");
  const std::string mode = P.mode("estimate");
  const unsigned workers = P.cfg().workers;
  if (mode == "exhaustive") {
    return trial_json(exhaustive_mode(kind, ep, P.get<std::uint64_t>("cap", kExhaustiveCap), workers));
  }
  if (mode != "estimate") throw InvalidArgument("mode must be 'estimate' or 'exhaustive'");
  return trial_json(estimate(kind, ep, P.trials(1000), P.seed(), workers));
}

NurseryPtr nursery_from(const Params& P) {
  const std::string fam = P.get<std::string>("family", "matrix");
  if (fam == "matrix") {
    return ModuleNursery::matrix(P.get<std::size_t>("a"), P.get<std::size_t>("c"),
                                 Field::of_order(P.get<std::uint64_t>("q")));
  }
  const auto e = u32(P.get<std::uint64_t>("e"), "e");
  if (fam == "unitary") return ModuleNursery::unitary(u32(P.get<std::uint64_t>("p"), "p"), e);
  if (fam == "b2_odd") return ModuleNursery::b2_odd(u32(P.get<std::uint64_t>("p"), "p"), e);
  if (fam == "ree") return ModuleNursery::ree_small(e);
  throw InvalidArgument("unknown nursery family '" + fam + "'");
}

json cmd_census(const Params& P) {
  const NurseryPtr N = nursery_from(P);
  N->verify();
  CensusCaps caps;
  caps.iso_cap = P.cfg().cap_iso;
  caps.max_kinder = P.get<std::uint64_t>("max_kinder", caps.max_kinder);
  const bool relaxed = P.get<bool>("relaxed", false);
  const auto l = P.get<std::size_t>("l");
  const CensusResult res = census(N, l, caps, relaxed);
  json r;
  r["nursery"] = N->name();
  r["r"] = N->r();
  r["m"] = N->m();
  r["s"] = N->S().size();
  r["t"] = N->T().size();
  r["l"] = l;
  r["relaxed"] = relaxed;
  r["kinder"] = res.kinder;
  r["classes"] = res.classes;
  r["group_order"] = res.group_order;
  r["bound"] = {{"formula", "nursery_count"}, {"raw", res.bound.raw}, {"clamped", res.bound.clamped},
                {"detail", res.bound.detail}};
  r["bound_holds"] = res.bound_holds;
  json table = json::array();
  for (const auto& c : res.table) {
    table.push_back({{"members", c.members},
                     {"fingerprint", c.fingerprint.summary()},
                     {"representative", matrix_json(c.representative.basis())}});
  }
  r["table"] = table;
  return r;
}

json cmd_reconstruct(const Params& P) {
  const NurseryPtr N = nursery_from(P);
  N->verify();
  const auto count = P.get<std::size_t>("count", 10);
  auto rng = task_rng(P.seed(), 0);
  std::vector<Subspace> kinder;
  for (std::size_t l = N->span_S().dim(); l <= N->r(); ++l) {
    for (auto& V : subspaces_containing(N->span_S(), l)) kinder.push_back(std::move(V));
  }
  std::size_t exact = 0;
  json failures = json::array();
  for (std::size_t i = 0; i < count; ++i) {
    const RoundTrip rt = reconstruct_round_trip(N, kinder[rng() % kinder.size()], rng);
    if (rt.exact) {
      ++exact;
    } else {
      failures.push_back(rt.failure);
    }
  }
  json r;
  r["nursery"] = N->name();
  r["kinder_available"] = kinder.size();
  r["round_trips"] = count;
  r["exact"] = exact;
  r["failures"] = failures;
  return r;
}

json cmd_alt_codes(const Params& P) {
  const auto k = P.get<std::size_t>("k");
  const std::string op = P.get<std::string>("op", "classes");
  json r;
  r["k"] = k;
  r["op"] = op;
  if (op == "classes") {
    const auto l = P.get<std::size_t>("l");
    const CodeClassReport rep = code_classes(k, l);
    r["l"] = l;
    r["codes"] = rep.codes;
    r["classes"] = rep.classes;
    r["paper_bound"] = rep.bound;
    r["paper_bound_ceil"] = rep.bound_ceil;
    json gens = json::array();
    for (const auto& c : rep.canonical) gens.push_back(matrix_json(c.basis()));
    r["canonical_generators"] = gens;
    return r;
  }
  if (op == "recover") {
    const GammaK G(k);
    const FieldPtr F2 = Field::make(2, 1);
    std::size_t elems = 0, agree = 0, codes = 0;
    for (std::size_t l = 0; l <= k; ++l) {
      for (const auto& C : enumerate_subspaces(F2, k, l)) {
        ++codes;
        const CodeSubgroup H = subgroup_from_code(G, C);
        for (SmallGroup::Index h = 0; h < H.group.order(); ++h) {
          ++elems;
          agree += hamming_recover(H.group, h) == G.weight(H.labels[h]) ? 1 : 0;
        }
      }
    }
    r["codes"] = codes;
    r["elements"] = elems;
    r["agree"] = agree;
    return r;
  }
  if (op == "subgroup") {
    const auto rows = P.get<std::vector<std::vector<Elem>>>("code");
    const FieldPtr F2 = Field::make(2, 1);
    Matrix g(F2, rows.size(), k);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != k) throw InvalidArgument("code rows must have length k");
      for (std::size_t j = 0; j < k; ++j) {
        if (rows[i][j] > 1) throw InvalidArgument("code entries must be bits");
        g.at(i, j) = rows[i][j];
      }
    }
    const Subspace C(g);
    const GammaK G(k);
    const CodeSubgroup H = subgroup_from_code(G, C);
    r["dim"] = C.dim();
    r["order"] = H.group.order();
    r["fingerprint"] = fingerprint(H.group).summary();
    return r;
  }
  throw InvalidArgument("op must be classes, recover or subgroup");
}

json cmd_suzuki_search(const Params& P) {
  const auto e = u32(P.get<std::uint64_t>("e"), "e");
  SearchOptions so;
  so.candidates = P.get<std::size_t>("candidates", so.candidates);
  so.max_restarts = P.get<std::size_t>("restarts", so.max_restarts);
  so.workers = P.cfg().workers;
  const SearchResult res = suzuki_search(e, P.seed(), so);
  json r;
  r["e"] = e;
  r["degree"] = 2 * e + 1;
  r["size_bound"] = suzuki_size_bound(e);
  r["found"] = res.found;
  r["restarts"] = res.restarts;
  r["best_rank"] = res.best_rank;
  if (res.found) {
    r["set_size"] = res.set_size;
    const std::string text = res.certificate->to_json();
    if (P.has("cert")) {
      write_file(P.get<std::string>("cert"), text + "\n");
      r["cert"] = P.get<std::string>("cert");
    }
    r["certificate"] = json::parse(text);
  } else {
    r["status"] = "inconclusive: budget exhausted (not a proof of nonexistence)";
  }
  return r;
}

json cmd_suzuki_verify(const Params& P) {
  const std::string path = P.get<std::string>("cert");
  const SpanCertificate cert = SpanCertificate::from_json(read_file(path));
  json r;
  r["cert"] = path;
  r["e"] = cert.e;
  r["valid"] = suzuki_verify(cert);
  return r;
}

json cmd_arith(const Params& P) {
  const std::string op = P.get<std::string>("op");
  json r;
  r["op"] = op;
  if (op == "legendre") {
    const auto k = P.get<std::uint64_t>("k"), p = P.get<std::uint64_t>("p");
    if (!is_prime(p)) throw InvalidArgument("p must be prime");
    r["k"] = k;
    r["p"] = p;
    r["valuation"] = legendre_valuation(k, p);
  } else if (op == "factor") {
    const auto n = P.get<std::uint64_t>("n");
    if (n == 0) throw InvalidArgument("n must be positive");
    json f = json::array();
    for (auto [p, e] : factorize(n).factors) f.push_back({p, e});
    r["n"] = n;
    r["factors"] = f;
  } else if (op == "mu") {
    const auto n = P.get<std::uint64_t>("n");
    if (n < 2) throw InvalidArgument("mu needs n >= 2");
    r["n"] = n;
    r["mu"] = mu(n);
    r["wall_log2"] = wall_log_bound(n);
  } else if (op == "nu") {
    const auto n = P.get<std::uint64_t>("n"), p = P.get<std::uint64_t>("p");
    r["valuation"] = nu_p(n, p);
  } else if (op == "gaussian") {
    r["count"] = gaussian_binomial(P.get<std::uint64_t>("n"), P.get<std::uint64_t>("l"), P.get<std::uint64_t>("q")).str();
  } else if (op == "bound") {
    BoundParams bp;
    bp.r = P.get<std::int64_t>("r", 0);
    bp.l = P.get<std::int64_t>("l", 0);
    bp.s = P.get<std::int64_t>("s", 0);
    bp.m = P.get<std::int64_t>("m", 0);
    bp.t = P.get<std::int64_t>("t", 0);
    bp.a = P.get<std::int64_t>("a", 0);
    bp.b = P.get<std::int64_t>("b", 0);
    bp.c = P.get<std::int64_t>("c", 0);
    bp.e = P.get<std::int64_t>("e", 0);
    bp.p = P.get<std::uint64_t>("p", 2);
    const BoundValue v = bound_log(bound_formula_from_string(P.get<std::string>("formula")), bp);
    r["raw"] = v.raw;
    r["clamped"] = v.clamped;
    r["detail"] = v.detail;
  } else if (op == "unitriangular") {
    const auto u = unitriangular_exponents(u32(P.get<std::uint64_t>("d"), "d"), u32(P.get<std::uint64_t>("e"), "e"));
    r["binomial_form"] = u.binomial_form;
    r["quadratic_form"] = u.quadratic_form;
    r["exact"] = u.exact;
  } else {
    throw InvalidArgument("unknown arith op '" + op + "'");
  }
  return r;
}

json cmd_b2_demo(const Params& P) {
  const auto q = P.get<std::uint64_t>("q", 8);
  const auto runs = P.get<std::size_t>("runs", 10);
  const FieldPtr F = Field::of_order(q);
  const B2Group U(F);
  json r;
  r["q"] = q;
  r["order"] = U.order();
  const auto err = U.verify_axioms();
  r["axioms"] = err ? *err : "ok";
  r["center_order"] = U.center().size();
  const Subspace V = Subspace::full(Field::make(2, 1), F->degree());
  const std::uint64_t seed = P.seed();
  std::optional<B2Labels> first;
  std::size_t same = 0;
  for (std::size_t i = 0; i < runs; ++i) {
    auto rng = task_rng(seed, i);
    const B2Labels lab = b2_labels(U, random_b2_input(U, V, rng));
    if (!first) first = lab;
    same += lab.gamma4 == first->gamma4 && lab.quotient_label == first->quotient_label &&
                    lab.gamma4_label == first->gamma4_label
                ? 1
                : 0;
  }
  r["runs"] = runs;
  r["identical_labels"] = same;
  if (first) {
    r["gamma4_order"] = first->gamma4.size();
    r["complement_order"] = first->complement.size();
    r["recovered_subspace"] = first->recovered_subspace;
  }
  return r;
}

json cmd_verify_suite(const Params& P) {
  SuiteOptions opts;
  const std::string tier = P.get<std::string>("tier", "fast");
  if (tier == "fast") {
    opts.tier = Tier::Fast;
  } else if (tier == "full") {
    opts.tier = Tier::Full;
  } else {
    throw InvalidArgument("tier must be fast or full");
  }
  opts.workers = P.cfg().workers;
  if (P.cfg().seed) opts.seed = *P.cfg().seed;
  const auto only = P.get<std::vector<std::string>>("only", {});
  json r;
  r["tier"] = tier;
  json rows = json::array();
  bool all = true;
  json failing = json::array();
  for (const auto& c : run_suite(opts, only)) {
    rows.push_back({{"id", c.id}, {"title", c.title}, {"pass", c.pass}, {"detail", c.detail}});
    all = all && c.pass;
    if (!c.pass) failing.push_back(c.id);
  }
  r["criteria"] = rows;
  r["all_pass"] = all;
  r["failing"] = failing;
  return r;
}

using Handler = std::function<json(const Params&)>;

const std::map<std::string, Handler>& handlers() {
  static const std::map<std::string, Handler> h{
      {"field-check", cmd_field_check},   {"hom", cmd_hom},
      {"witness", cmd_witness},           {"generic", cmd_generic},
      {"nursery-census", cmd_census},     {"reconstruct", cmd_reconstruct},
      {"alt-codes", cmd_alt_codes},       {"suzuki-search", cmd_suzuki_search},
      {"suzuki-verify", cmd_suzuki_verify}, {"arith", cmd_arith},
      {"b2-demo", cmd_b2_demo},           {"verify-suite", cmd_verify_suite},
  };
  return h;
}

}  // namespace

std::vector<std::string> command_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : handlers()) names.push_back(k);
  return names;
}

json run_command(const RunConfig& cfg) {
  auto it = handlers().find(cfg.command);
  if (it == handlers().end()) throw InvalidArgument("unknown command '" + cfg.command + "'");
  const Params P(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  json results = it->second(P);
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  json report;
  report["schema"] = kReportSchema;
  report["version"] = kReportVersion;
  report["config"] = cfg.echo();
  report["results"] = std::move(results);
  report["timing_ms"] = ms;
  return report;
}

int exit_code_for(const std::exception& ex) {
  if (dynamic_cast<const CapExceeded*>(&ex)) return kExitCap;
  if (dynamic_cast<const PropertyViolation*>(&ex)) return kExitProperty;
  if (dynamic_cast<const InvalidArgument*>(&ex) || dynamic_cast<const MalformedInput*>(&ex)) return kExitInvalid;
  return kExitOther;
}

int exit_code_for_report(const json& report) {
  const json& r = report.at("results");
  const std::string cmd = report.at("config").at("command");
  if (cmd == "suzuki-verify" && !r.at("valid").get<bool>()) return kExitFailed;
  if (cmd == "verify-suite" && !r.at("all_pass").get<bool>()) return kExitFailed;
  return kExitOk;
}

}  // namespace kinder
