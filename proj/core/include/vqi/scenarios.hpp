#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "vqi/engine.hpp"
#include "vqi/measures.hpp"
#include "vqi/states.hpp"

namespace vqi {

enum class ScenarioKind {
  std_teleport,
  classical_teleport,
  multiparty_teleport,
  multiparty_classical,
  misrouted,
  psi_pair_dist,
};

std::string to_string(ScenarioKind kind);
ScenarioKind scenario_kind_from_string(const std::string& name);
std::vector<ScenarioKind> all_scenario_kinds();
std::string scenario_description(ScenarioKind kind);

struct ScenarioTimes {
  Rational t1{1};
  Rational t_send{1};  // in [t1, t2)
  Rational t2{2};
  // Arrival of the classical message; defaults to t2, where the correction
  // fires. Editing it past t2 exercises the engine's causality check.
  std::optional<Rational> t_arrive;

  void validate() const;
  Rational arrive() const { return t_arrive.value_or(t2); }
  Rational window_midpoint() const { return (t1 + t2) / Rational{2}; }
};

struct RelativitySpec {
  bool enabled = false;
  double speed = 1.0;
  std::map<std::string, double> positions;  // party name -> coordinate
};

struct ScenarioVariants {
  bool discard_source = false;               // classical kinds only
  std::optional<double> mixed_input_p;       // std_teleport only
};

struct ScenarioSpec {
  ScenarioKind kind = ScenarioKind::std_teleport;
  PureQubitParams psi{};  // quantum kinds
  double p = 0.5;         // classical kinds
  int n = 2;              // receiver count for multiparty kinds
  ScenarioTimes times;
  RelativitySpec relativity;
  ScenarioVariants variants;

  void validate() const;
};

// One point of an input family; unset fields fall back to the spec values.
struct SampleInput {
  std::optional<PureQubitParams> psi;
  std::optional<double> p;
};

// What condition (iii) compares against after the window closes.
struct RetrievalTask {
  std::string retriever;
  std::vector<Label> labels;
  DensityOp target;
  bool compare_by_trace_distance = false;  // mixed targets use trace distance
};

// A ready-to-execute protocol plus the audit defaults that go with it.
struct BuiltScenario {
  ScenarioKind kind;
  Timeline timeline;
  std::vector<Party> parties;
  RelativitySettings relativity;
  Rational t1;
  Rational t2;
  std::string record;  // classical record produced by the protocol measurement
  std::size_t record_cardinality = 0;
  std::vector<std::vector<Label>> groupings;  // condition (i)
  Bipartition cut;                            // condition (ii)
  std::vector<Label> discord_side;
  std::vector<ComplexMatrix> discord_projectors;
  std::optional<RetrievalTask> retrieval;  // absent for exploratory scenarios
  bool exploratory = false;
  std::vector<std::string> notes;
};

BuiltScenario std_teleport(const ScenarioSpec& spec, const SampleInput& sample = {});
BuiltScenario classical_teleport(const ScenarioSpec& spec, const SampleInput& sample = {});
BuiltScenario multiparty_teleport(const ScenarioSpec& spec, const SampleInput& sample = {});
BuiltScenario multiparty_classical(const ScenarioSpec& spec, const SampleInput& sample = {});
BuiltScenario misrouted(const ScenarioSpec& spec, const SampleInput& sample = {});
BuiltScenario psi_pair_dist(const ScenarioSpec& spec, const SampleInput& sample = {});

BuiltScenario build_scenario(const ScenarioSpec& spec, const SampleInput& sample = {});

}  // namespace vqi
