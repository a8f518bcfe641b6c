#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "vqi/scenarios.hpp"

namespace vqi {

// A resolved family of protocol inputs: pure-qubit angles for the quantum
// scenarios, mixture weights for the classical ones.
struct InputFamily {
  std::string description;
  std::vector<SampleInput> samples;
  int real_parameters = 0;  // dimension of the underlying continuum

  void validate() const;  // needs at least two samples
};

// theta inclusive over [0, pi], phi exclusive over [0, 2*pi).
InputFamily family_grid(int theta_steps, int phi_steps);
// Bloch-uniform pure qubits from a deterministic seeded generator.
InputFamily family_random(int count, std::uint64_t seed);
// p inclusive over [0, 1].
InputFamily family_p_grid(int steps);
InputFamily family_union(InputFamily a, const InputFamily& b);
// grid(5,8) + random(32, seed 42) for the quantum kinds, p_grid(11) otherwise.
InputFamily default_family(ScenarioKind kind);

// ---------------------------------------------------------------------------
// Condition (i): the window marginals must not depend on the input.

struct GroupingResult {
  std::vector<Label> labels;
  bool evaluated = true;  // false when the systems were discarded in the window
  double max_pairwise_distance = 0.0;
  bool pass = true;
  std::string note;
};

struct ConditionIResult {
  std::vector<GroupingResult> groupings;
  double tolerance = 1e-9;
  std::vector<Rational> probe_times;
  bool pass = true;
};

ConditionIResult check_condition_i(const ScenarioSpec& spec, const InputFamily& family,
                                   std::vector<std::vector<Label>> groupings = {},
                                   std::vector<Rational> probe_times = {});

// ---------------------------------------------------------------------------
// Condition (ii): window correlations must stay below the capacity needed
// to encode the input family.

struct ConditionIIResult {
  Bipartition cut;
  CorrelationProfile worst;  // per-field worst case over the family
  double bound_bits = 0.0;   // log2 of the smaller side of the cut
  std::size_t family_size = 0;
  std::string family_info;
  bool applicable = true;  // false for exploratory scenarios (profile only)
  bool pass = true;
  std::string note;  // set when discarded systems degrade the cut
};

ConditionIIResult check_condition_ii(const ScenarioSpec& spec, const InputFamily& family,
                                     std::optional<Bipartition> cut = std::nullopt,
                                     std::vector<Rational> probe_times = {});

// ---------------------------------------------------------------------------
// Condition (iii): the input must be recoverable once the window closes.

struct ConditionIIIResult {
  std::string retriever;
  std::string metric;  // "fidelity" or "trace_distance"
  double min_fidelity = 1.0;
  double mean_fidelity = 1.0;
  double max_trace_distance = 0.0;
  bool applicable = true;
  bool pass = true;
};

ConditionIIIResult check_condition_iii(const ScenarioSpec& spec, const InputFamily& family);

// ---------------------------------------------------------------------------

struct AuditReport {
  std::string scenario_kind;
  Rational t1;
  Rational t2;
  std::string family_description;
  std::size_t family_size = 0;
  ConditionIResult condition_i;
  ConditionIIResult condition_ii;
  ConditionIIIResult condition_iii;
  bool exploratory = false;
  std::string overall;  // "VOLATILE", "NOT VOLATILE", or "EXPLORATORY"
  bool pass = true;     // drives the audit exit code; exploratory counts as pass
  std::vector<std::string> notes;
};

AuditReport full_audit(const ScenarioSpec& spec, const InputFamily& family);
AuditReport full_audit(const ScenarioSpec& spec);

// Largest deviation of the protocol record distribution from uniform,
// across the family (ensemble mode).
double record_uniformity_max_dev(const ScenarioSpec& spec, const InputFamily& family);

// Worker threads for family fan-out, from VQI_THREADS (0 means sequential).
unsigned audit_thread_budget();

}  // namespace vqi
