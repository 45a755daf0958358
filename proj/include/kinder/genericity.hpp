#pragma once

// Seeded Monte Carlo and exhaustive estimates of the probability that random
// linear-algebra data is "generic": spanning sets, scalar endomorphism rings,
// vanishing hom spaces, the Lambda block system, the right nucleus of a
// random restriction of matrix multiplication, and full commutators.

#include <cstdint>
#include <map>
#include <optional>
#include <string>

namespace kinder {

enum class ExperimentKind { Span, EndGeneric, HomPmTranspose, LambdaEnd, Nucleus, DerivedFull };

std::string to_string(ExperimentKind kind);
ExperimentKind experiment_kind_from_string(const std::string& name);

// Only the fields relevant to a kind are read:
//   span: n, s, q            end_generic / hom_pm_transpose: m, n, s, q
//   lambda_end: a, b, c, q   nucleus / derived_full: a, b, c, q, l
struct ExperimentParams {
  std::uint32_t m = 0, n = 0, s = 0;
  std::uint32_t a = 0, b = 0, c = 0;
  std::uint64_t q = 0;
  std::uint32_t l = 0;
};

struct TrialReport {
  ExperimentKind kind = ExperimentKind::Span;
  ExperimentParams params;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  bool exact = false;
  std::uint64_t successes = 0;
  double frequency = 0.0;
  // Closed-form lower bound where one exists. For derived_full this is
  // 1 - q^{b - a l}; swapped_bound is 1 - q^{a - b l}.
  std::optional<double> paper_bound;
  std::optional<double> swapped_bound;
  // What the histogram counts (e.g. "rank", "dim_K End").
  std::string observed;
  std::map<long, std::uint64_t> histogram;
  std::optional<long> modal;
  // lambda_end: dim_K of End(Lambda) restricted to the diagonal blocks.
  std::map<long, std::uint64_t> diag_histogram;
  std::string note;

  double standard_error() const;
};

TrialReport estimate(ExperimentKind kind, const ExperimentParams& params, std::uint64_t trials,
                     std::uint64_t seed, unsigned workers = 0);

constexpr std::uint64_t kExhaustiveCap = std::uint64_t{1} << 24;

TrialReport exhaustive_mode(ExperimentKind kind, const ExperimentParams& params,
                            std::uint64_t cap = kExhaustiveCap, unsigned workers = 0);

double span_bound(std::uint32_t n, std::uint32_t s, std::uint64_t q);

}  // namespace kinder
