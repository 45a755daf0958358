#include "kinder/genericity.hpp"

#include <cmath>
#include <vector>

#include "kinder/bimap.hpp"
#include "kinder/errors.hpp"
#include "kinder/parallel.hpp"

namespace kinder {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::Span: return "span";
    case ExperimentKind::EndGeneric: return "end_generic";
    case ExperimentKind::HomPmTranspose: return "hom_pm_transpose";
    case ExperimentKind::LambdaEnd: return "lambda_end";
    case ExperimentKind::Nucleus: return "nucleus";
    case ExperimentKind::DerivedFull: return "derived_full";
  }
  return "unknown";
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  for (auto k : {ExperimentKind::Span, ExperimentKind::EndGeneric, ExperimentKind::HomPmTranspose,
                 ExperimentKind::LambdaEnd, ExperimentKind::Nucleus, ExperimentKind::DerivedFull}) {
    if (to_string(k) == name) return k;
  }
  throw InvalidArgument("unknown experiment kind '" + name + "'");
}

double TrialReport::standard_error() const {
  if (trials == 0) return 0.0;
  return std::sqrt(frequency * (1.0 - frequency) / static_cast<double>(trials));
}

double span_bound(std::uint32_t n, std::uint32_t s, std::uint64_t q) {
  const double Q = static_cast<double>(q);
  return 1.0 - (std::pow(Q, static_cast<double>(n) - s) - std::pow(Q, -static_cast<double>(s))) / (Q - 1.0);
}

namespace {

// Field elements either drawn at random or read off a configuration index.
struct Source {
  std::mt19937_64* rng = nullptr;
  std::uint64_t index = 0;
  Elem q = 2;

  Elem next() {
    if (rng) return static_cast<Elem>((*rng)() % q);
    const Elem d = static_cast<Elem>(index % q);
    index /= q;
    return d;
  }
  Matrix matrix(const FieldPtr& f, std::size_t r, std::size_t c) {
    Matrix m(f, r, c);
    for (std::size_t i = 0; i < r; ++i) {
      for (std::size_t j = 0; j < c; ++j) m.at(i, j) = next();
    }
    return m;
  }
  MatrixSystem system(const FieldPtr& f, std::size_t count, std::size_t r, std::size_t c) {
    MatrixSystem s(f, r, c);
    for (std::size_t i = 0; i < count; ++i) s.mats.push_back(matrix(f, r, c));
    return s;
  }
};

struct Outcome {
  bool success = false;
  long value = 0;
  long diag = 0;  // lambda_end only
};

struct Experiment {
  ExperimentKind kind;
  ExperimentParams p;
  FieldPtr K;
  FieldPtr Fp;
  std::optional<Bimap> bimap;  // nucleus and derived_full

  explicit Experiment(ExperimentKind k, const ExperimentParams& params) : kind(k), p(params) {
    if (p.q < 2) throw InvalidArgument("field order q must be a prime power >= 2");
    K = Field::of_order(p.q);
    Fp = prime_field_of(*K);
    switch (kind) {
      case ExperimentKind::Span:
        if (p.n == 0) throw InvalidArgument("span needs n >= 1");
        break;
      case ExperimentKind::EndGeneric:
      case ExperimentKind::HomPmTranspose:
        if (p.m == 0 || p.n == 0) throw InvalidArgument("matrix shape must be positive");
        break;
      case ExperimentKind::LambdaEnd:
        if (p.a == 0 || p.b == 0) throw InvalidArgument("lambda_end needs a, b >= 1");
        break;
      case ExperimentKind::Nucleus:
      case ExperimentKind::DerivedFull:
        if (p.a == 0 || p.b == 0 || p.c == 0) throw InvalidArgument("a, b, c must be >= 1");
        if (p.l > left_dim()) throw InvalidArgument("l exceeds the dimension a*b*e");
        bimap = matrix_multiplication_bimap(K, p.a, p.b, p.c, true);
        break;
    }
  }

  std::size_t left_dim() const { return std::size_t{p.a} * p.b * K->degree(); }

  // Number of field entries drawn per configuration (matrix kinds).
  std::size_t entries() const {
    switch (kind) {
      case ExperimentKind::Span: return std::size_t{p.n} * p.s;
      case ExperimentKind::EndGeneric:
      case ExperimentKind::HomPmTranspose: return std::size_t{p.m} * p.n * p.s;
      case ExperimentKind::LambdaEnd: return std::size_t{p.a} * p.b * p.c;
      default: return 0;
    }
  }

  bool subspace_kind() const {
    return kind == ExperimentKind::Nucleus || kind == ExperimentKind::DerivedFull;
  }

  std::string observed() const {
    switch (kind) {
      case ExperimentKind::Span: return "rank";
      case ExperimentKind::EndGeneric: return "dim_K End";
      case ExperimentKind::HomPmTranspose: return "dim_K hom(+) + dim_K hom(-)";
      case ExperimentKind::LambdaEnd: return "dim_K End(Lambda)";
      case ExperimentKind::Nucleus: return "dim_Fp nucleus";
      case ExperimentKind::DerivedFull: return "dim_Fp [Q,Q]";
    }
    return "";
  }

  Outcome run_matrix(Source& src) const {
    Outcome o;
    switch (kind) {
      case ExperimentKind::Span: {
        Matrix vecs = src.matrix(K, p.s, p.n);
        o.value = static_cast<long>(rank(vecs));
        o.success = o.value == static_cast<long>(p.n);
        break;
      }
      case ExperimentKind::EndGeneric: {
        const MatrixSystem phi = src.system(K, p.s, p.m, p.n);
        o.value = static_cast<long>(end_dimension(phi));
        o.success = o.value == 1;
        break;
      }
      case ExperimentKind::HomPmTranspose: {
        const MatrixSystem phi = src.system(K, p.s, p.m, p.n);
        const MatrixSystem phit = phi.transposed();
        o.value = static_cast<long>(hom_dimension(phi, phit, 1) + hom_dimension(phi, phit, -1));
        o.success = o.value == 0;
        break;
      }
      case ExperimentKind::LambdaEnd: {
        const MatrixSystem phi = src.system(K, p.c, p.a, p.b);
        o.value = static_cast<long>(end_dimension(lambda_build(phi)));
        // (A11,B22) in End(Phi), (A22,B11) in End(Phi^t); the rest sits off the diagonal blocks.
        o.diag = static_cast<long>(end_dimension(phi) + end_dimension(phi.transposed()));
        break;
      }
      default: break;
    }
    return o;
  }

  Outcome run_subspace(const Subspace& V) const {
    Outcome o;
    if (kind == ExperimentKind::Nucleus) {
      o.value = static_cast<long>(right_nucleus_dimension(*bimap, V));
      o.success = o.value == static_cast<long>(std::size_t{p.c} * p.c * K->degree());
    } else {
      // [Q,Q] = span{x u : x in V, u in M_{b x c}(K)}
      const Bimap& bm = *bimap;
      Matrix prods(Fp, V.dim() * bm.mid_dim(), bm.target_dim());
      std::vector<Elem> unit(bm.mid_dim(), 0);
      std::size_t row = 0;
      for (std::size_t r = 0; r < V.dim(); ++r) {
        for (std::size_t j = 0; j < bm.mid_dim(); ++j) {
          unit.assign(bm.mid_dim(), 0);
          unit[j] = 1;
          const auto v = bm.eval(V.basis().row(r), unit);
          for (std::size_t k = 0; k < v.size(); ++k) prods.at(row, k) = v[k];
          ++row;
        }
      }
      o.value = static_cast<long>(rank(prods));
      o.success = o.value == static_cast<long>(bm.target_dim());
    }
    return o;
  }
};

void finish(TrialReport& r, const Experiment& ex, const std::vector<Outcome>& outcomes) {
  r.observed = ex.observed();
  for (const auto& o : outcomes) ++r.histogram[o.value];
  if (ex.kind == ExperimentKind::LambdaEnd) {
    long best = 0;
    std::uint64_t best_count = 0;
    for (const auto& [v, count] : r.histogram) {
      if (count > best_count) {
        best = v;
        best_count = count;
      }
    }
    r.modal = best;
    r.successes = best_count;
    for (const auto& o : outcomes) ++r.diag_histogram[o.diag];
    if (ex.p.a == ex.p.b) {
      if (best == 2) {
        r.note = "modal dim 2: supports hom(Phi,+-Phi^t)=0 (End(Lambda) = K + K), not End(Lambda) = M_2(K)";
      } else if (best == 4) {
        r.note = "modal dim 4: supports End(Lambda) = M_2(K), not hom(Phi,+-Phi^t)=0";
      } else {
        r.note = "modal dim " + std::to_string(best) + ": matches neither 2 nor 4";
      }
    } else {
      long diag = 0;
      std::uint64_t diag_count = 0;
      for (const auto& [v, count] : r.diag_histogram) {
        if (count > diag_count) {
          diag = v;
          diag_count = count;
        }
      }
      r.note = "modal dim " + std::to_string(best) + " = " + std::to_string(diag) + " (diagonal blocks) + " +
               std::to_string(best - diag) + " (off-diagonal)";
    }
  } else {
    for (const auto& o : outcomes) r.successes += o.success ? 1 : 0;
    long best = 0;
    std::uint64_t best_count = 0;
    for (const auto& [v, count] : r.histogram) {
      if (count > best_count) {
        best = v;
        best_count = count;
      }
    }
    if (!outcomes.empty()) r.modal = best;
  }
  r.frequency = r.trials ? static_cast<double>(r.successes) / static_cast<double>(r.trials) : 0.0;

  const ExperimentParams& p = ex.p;
  const double Q = static_cast<double>(p.q);
  if (ex.kind == ExperimentKind::Span) {
    r.paper_bound = span_bound(p.n, p.s, p.q);
  } else if (ex.kind == ExperimentKind::DerivedFull) {
    r.paper_bound = 1.0 - std::pow(Q, static_cast<double>(p.b) - static_cast<double>(p.a) * p.l);
    r.swapped_bound = 1.0 - std::pow(Q, static_cast<double>(p.a) - static_cast<double>(p.b) * p.l);
    if (ex.K->degree() != 1) r.note = "e > 1: the bound mixes q = |K| with the F_p-dimension l";
  }
}

}  // namespace

TrialReport estimate(ExperimentKind kind, const ExperimentParams& params, std::uint64_t trials,
                     std::uint64_t seed, unsigned workers) {
  if (trials == 0) throw InvalidArgument("trials must be at least 1");
  const Experiment ex(kind, params);
  std::vector<Outcome> outcomes(trials);
  parallel_for(trials, workers, [&](std::uint64_t i) {
    auto rng = task_rng(seed, i);
    if (ex.subspace_kind()) {
      outcomes[i] = ex.run_subspace(random_subspace(ex.Fp, ex.left_dim(), params.l, rng));
    } else {
      Source src{&rng, 0, static_cast<Elem>(params.q)};
      outcomes[i] = ex.run_matrix(src);
    }
  });
  TrialReport r;
  r.kind = kind;
  r.params = params;
  r.trials = trials;
  r.seed = seed;
  finish(r, ex, outcomes);
  return r;
}

TrialReport exhaustive_mode(ExperimentKind kind, const ExperimentParams& params, std::uint64_t cap,
                            unsigned workers) {
  const Experiment ex(kind, params);
  std::vector<Outcome> outcomes;
  if (ex.subspace_kind()) {
    std::vector<Subspace> all = enumerate_subspaces(ex.Fp, ex.left_dim(), params.l, cap);
    outcomes.resize(all.size());
    parallel_for(all.size(), workers, [&](std::uint64_t i) { outcomes[i] = ex.run_subspace(all[i]); });
  } else {
    const double log_count = static_cast<double>(ex.entries()) * std::log2(static_cast<double>(params.q));
    if (log_count > std::log2(static_cast<double>(cap))) {
      throw CapExceeded("exhaustive " + to_string(kind) + " needs q^" + std::to_string(ex.entries()) +
                        " configurations, above the cap " + std::to_string(cap));
    }
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < ex.entries(); ++i) count *= params.q;
    outcomes.resize(count);
    parallel_for(count, workers, [&](std::uint64_t i) {
      Source src{nullptr, i, static_cast<Elem>(params.q)};
      outcomes[i] = ex.run_matrix(src);
    });
  }
  TrialReport r;
  r.kind = kind;
  r.params = params;
  r.trials = outcomes.size();
  r.exact = true;
  finish(r, ex, outcomes);
  return r;
}

}  // namespace kinder
