#include "vqi/scenarios.hpp"

#include <algorithm>
#include <cmath>

namespace vqi {

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::std_teleport: return "std_teleport";
    case ScenarioKind::classical_teleport: return "classical_teleport";
    case ScenarioKind::multiparty_teleport: return "multiparty_teleport";
    case ScenarioKind::multiparty_classical: return "multiparty_classical";
    case ScenarioKind::misrouted: return "misrouted";
    case ScenarioKind::psi_pair_dist: return "psi_pair_dist";
  }
  throw RangeError("unknown scenario kind");
}

ScenarioKind scenario_kind_from_string(const std::string& name) {
  for (ScenarioKind k : all_scenario_kinds())
    if (to_string(k) == name) return k;
  throw ParseError("unknown scenario kind '" + name + "'");
}

std::vector<ScenarioKind> all_scenario_kinds() {
  return {ScenarioKind::std_teleport,      ScenarioKind::classical_teleport,
          ScenarioKind::multiparty_teleport, ScenarioKind::multiparty_classical,
          ScenarioKind::misrouted,          ScenarioKind::psi_pair_dist};
}

std::string scenario_description(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::std_teleport:
      return "Bell-pair teleportation of a pure (or mixed) qubit with a timed 2-bit message";
    case ScenarioKind::classical_teleport:
      return "transport of a diagonal qubit via a classically correlated pair and 1 parity bit";
    case ScenarioKind::multiparty_teleport:
      return "GHZ-assisted teleportation to n receivers who end up sharing the input";
    case ScenarioKind::multiparty_classical:
      return "classical broadcast of a diagonal qubit to n receivers via a shared correlated state";
    case ScenarioKind::misrouted:
      return "teleportation whose 2-bit message is delivered to a third party without the share";
    case ScenarioKind::psi_pair_dist:
      return "distribution of (|psi psi> + |perp perp>)/sqrt(2); exploratory, no verdict";
  }
  throw RangeError("unknown scenario kind");
}

void ScenarioTimes::validate() const {
  if (!(t1 <= t_send && t_send < t2))
    throw RangeError("times must satisfy t1 <= t_send < t2 (message sent inside the window)");
  if (t_arrive && !(t_send < *t_arrive))
    throw RangeError("t_arrive must be later than t_send");
}

void ScenarioSpec::validate() const {
  times.validate();
  psi.validate();
  if (!(p >= 0.0 && p <= 1.0)) throw RangeError("p must lie in [0, 1]");
  const bool multiparty =
      kind == ScenarioKind::multiparty_teleport || kind == ScenarioKind::multiparty_classical;
  if (multiparty && (n < 1 || n > 4)) throw RangeError("n must lie in [1, 4]");
  const bool classical =
      kind == ScenarioKind::classical_teleport || kind == ScenarioKind::multiparty_classical;
  if (variants.discard_source && !classical)
    throw RangeError("discard_source applies only to the classical scenarios");
  if (variants.mixed_input_p) {
    if (kind != ScenarioKind::std_teleport)
      throw RangeError("mixed_input_p applies only to std_teleport");
    if (!(*variants.mixed_input_p >= 0.0 && *variants.mixed_input_p <= 1.0))
      throw RangeError("mixed_input_p must lie in [0, 1]");
  }
  if (relativity.enabled && !(relativity.speed > 0.0))
    throw RangeError("relativity speed must be positive");
}

namespace {

std::optional<double> position_of(const RelativitySpec& rel, const std::string& party) {
  const auto it = rel.positions.find(party);
  if (it == rel.positions.end()) return std::nullopt;
  return it->second;
}

Party make_party(const ScenarioSpec& spec, const std::string& name, std::vector<Label> systems) {
  return Party{name, std::move(systems), position_of(spec.relativity, name)};
}

RelativitySettings engine_relativity(const ScenarioSpec& spec) {
  return RelativitySettings{spec.relativity.enabled, spec.relativity.speed};
}

std::map<int, ComplexMatrix> bell_correction_map() {
  std::map<int, ComplexMatrix> out;
  for (int i = 0; i < 4; ++i) out[i] = bell_correction({i});
  return out;
}

std::vector<ComplexMatrix> computational_projectors(std::size_t dim) {
  std::vector<ComplexMatrix> out;
  out.reserve(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    ComplexMatrix p(dim);
    p(k, k) = 1.0;
    out.push_back(std::move(p));
  }
  return out;
}

void common_fields(BuiltScenario& built, const ScenarioSpec& spec) {
  built.kind = spec.kind;
  built.relativity = engine_relativity(spec);
  built.t1 = spec.times.t1;
  built.t2 = spec.times.t2;
}

}  // namespace

BuiltScenario std_teleport(const ScenarioSpec& spec, const SampleInput& sample) {
  spec.validate();
  const PureQubitParams psi = sample.psi.value_or(spec.psi);
  psi.validate();

  BuiltScenario built;
  common_fields(built, spec);
  built.parties = {make_party(spec, "Alice", {"a", "A"}), make_party(spec, "Bob", {"B"})};

  const Rational prep = spec.times.t1 - Rational{1};
  const DensityOp input = spec.variants.mixed_input_p
                              ? mixed_input(*spec.variants.mixed_input_p, psi, "a")
                              : pure_qubit(psi, "a");
  built.timeline.events = {
      {prep, PrepareEvent{input}},
      {prep, PrepareEvent{bell_state({0}, "A", "B")}},
      {spec.times.t1, MeasureEvent{"Alice", {"a", "A"}, bell_basis(), "m"}},
      {spec.times.t_send,
       SendClassicalEvent{"Alice", "Bob", "m", spec.times.t_send, spec.times.arrive()}},
      {spec.times.t2, ConditionalUnitaryEvent{"Bob", {"B"}, "m", bell_correction_map()}},
  };

  built.record = "m";
  built.record_cardinality = 4;
  built.groupings = {{"a", "A"}, {"B"}};
  built.cut = {{"a", "A"}, {"B"}};
  built.discord_side = {"a", "A"};
  built.discord_projectors = bell_basis();
  RetrievalTask task;
  task.retriever = "Bob";
  task.labels = {"B"};
  if (spec.variants.mixed_input_p) {
    task.target = mixed_input(*spec.variants.mixed_input_p, psi, "B");
    task.compare_by_trace_distance = true;
  } else {
    task.target = pure_qubit(psi, "B");
  }
  built.retrieval = std::move(task);
  built.notes = {
      "the measuring party's own view stays pure per outcome; volatility is judged on the "
      "no-record averaged view",
      "the window state correlates the record with the receiver's conditional states; the "
      "capacity bound on that correlation is what condition (ii) checks"};
  return built;
}

BuiltScenario misrouted(const ScenarioSpec& spec, const SampleInput& sample) {
  spec.validate();
  const PureQubitParams psi = sample.psi.value_or(spec.psi);
  psi.validate();

  BuiltScenario built;
  common_fields(built, spec);
  built.parties = {make_party(spec, "Alice", {"a", "A"}), make_party(spec, "Bob", {"B"}),
                   make_party(spec, "Charu", {"c"})};

  const Rational prep = spec.times.t1 - Rational{1};
  built.timeline.events = {
      {prep, PrepareEvent{pure_qubit(psi, "a")}},
      {prep, PrepareEvent{bell_state({0}, "A", "B")}},
      {prep, PrepareEvent{DensityOp::from_pure({1.0, 0.0}, CompositeDims::single("c", 2))}},
      {spec.times.t1, MeasureEvent{"Alice", {"a", "A"}, bell_basis(), "m"}},
      {spec.times.t_send,
       SendClassicalEvent{"Alice", "Charu", "m", spec.times.t_send, spec.times.arrive()}},
      {spec.times.t2, ConditionalUnitaryEvent{"Charu", {"c"}, "m", bell_correction_map()}},
  };

  built.record = "m";
  built.record_cardinality = 4;
  built.groupings = {{"a", "A"}, {"B"}, {"c"}};
  built.cut = {{"a", "A"}, {"B", "c"}};
  built.discord_side = {"a", "A"};
  built.discord_projectors = bell_basis();
  RetrievalTask task;
  task.retriever = "Charu";
  task.labels = {"c"};
  task.target = pure_qubit(psi, "c");
  built.retrieval = std::move(task);
  built.notes = {
      "the two bits reach a party without the entangled share; her corrected qubit never "
      "interacted with the input",
      "the receiver's qubit stays in its outcome-conditional state forever; no correction is "
      "ever applied to it"};
  return built;
}

BuiltScenario classical_teleport(const ScenarioSpec& spec, const SampleInput& sample) {
  spec.validate();
  const double p = sample.p.value_or(spec.p);
  if (!(p >= 0.0 && p <= 1.0)) throw RangeError("p must lie in [0, 1]");

  BuiltScenario built;
  common_fields(built, spec);
  built.parties = {make_party(spec, "Sender", {"src", "alpha"}),
                   make_party(spec, "Receiver", {"beta"})};

  const Rational prep = spec.times.t1 - Rational{1};
  std::map<int, ComplexMatrix> corrections;
  corrections[0] = qubit_identity();
  corrections[1] = pauli(PauliAxis::x);

  built.timeline.events = {
      {prep, PrepareEvent{classical_mixture(p, "src")}},
      {prep, PrepareEvent{classical_correlated(2, {"alpha", "beta"})}},
      {spec.times.t1, MeasureEvent{"Sender", {"src", "alpha"}, parity_projectors(), "parity"}},
  };
  if (spec.variants.discard_source)
    built.timeline.events.push_back(
        {spec.times.t1, DiscardEvent{"Sender", {"src", "alpha"}}});
  built.timeline.events.push_back(
      {spec.times.t_send,
       SendClassicalEvent{"Sender", "Receiver", "parity", spec.times.t_send, spec.times.arrive()}});
  built.timeline.events.push_back(
      {spec.times.t2, ConditionalUnitaryEvent{"Receiver", {"beta"}, "parity", corrections}});

  built.record = "parity";
  built.record_cardinality = 2;
  built.groupings = {{"src", "alpha"}, {"beta"}, {"src"}};
  built.cut = {{"src", "alpha"}, {"beta"}};
  built.discord_side = {"src", "alpha"};
  built.discord_projectors = computational_projectors(4);
  RetrievalTask task;
  task.retriever = "Receiver";
  task.labels = {"beta"};
  task.target = classical_mixture(p, "beta");
  task.compare_by_trace_distance = true;
  built.retrieval = std::move(task);
  built.notes = {
      "the correlated pair broadcasts rather than transports: without discard_source the source "
      "marginal keeps the weight p through the window"};
  if (spec.variants.discard_source)
    built.notes.push_back(
        "discard_source traces out the sender systems right after the parity measurement");
  return built;
}

BuiltScenario multiparty_teleport(const ScenarioSpec& spec, const SampleInput& sample) {
  spec.validate();
  const PureQubitParams psi = sample.psi.value_or(spec.psi);
  psi.validate();
  const int n = spec.n;

  BuiltScenario built;
  common_fields(built, spec);

  std::vector<Label> ghz_labels = {"G0"};
  std::vector<Label> receiver_labels;
  built.parties.push_back(make_party(spec, "Alice", {"a", "G0"}));
  for (int k = 1; k <= n; ++k) {
    const Label lbl = "B" + std::to_string(k);
    ghz_labels.push_back(lbl);
    receiver_labels.push_back(lbl);
    built.parties.push_back(make_party(spec, "Bob" + std::to_string(k), {lbl}));
  }

  const Rational prep = spec.times.t1 - Rational{1};
  built.timeline.events = {
      {prep, PrepareEvent{pure_qubit(psi, "a")}},
      {prep, PrepareEvent{ghz(n + 1, ghz_labels)}},
      {spec.times.t1, MeasureEvent{"Alice", {"a", "G0"}, bell_basis(), "m"}},
  };
  for (int k = 1; k <= n; ++k)
    built.timeline.events.push_back(
        {spec.times.t_send, SendClassicalEvent{"Alice", "Bob" + std::to_string(k), "m",
                                               spec.times.t_send, spec.times.arrive()}});
  // Outcomes {Psi+, Psi-} flip every receiver; {Phi-, Psi-} add one phase
  // correction by the designated first receiver.
  const ComplexMatrix id = qubit_identity();
  const ComplexMatrix x = pauli(PauliAxis::x);
  const ComplexMatrix zx = pauli(PauliAxis::z) * pauli(PauliAxis::x);
  for (int k = 1; k <= n; ++k) {
    std::map<int, ComplexMatrix> corrections;
    if (k == 1) {
      corrections = {{0, id}, {1, pauli(PauliAxis::z)}, {2, x}, {3, zx}};
    } else {
      corrections = {{0, id}, {1, id}, {2, x}, {3, x}};
    }
    built.timeline.events.push_back(
        {spec.times.t2, ConditionalUnitaryEvent{"Bob" + std::to_string(k),
                                                {"B" + std::to_string(k)},
                                                "m",
                                                std::move(corrections)}});
  }

  built.record = "m";
  built.record_cardinality = 4;
  built.groupings = {{"a", "G0"}, receiver_labels};
  built.cut = {{"a", "G0"}, receiver_labels};
  built.discord_side = {"a", "G0"};
  built.discord_projectors = bell_basis();

  // After completion the receivers jointly hold cos(theta/2)|0..0> +
  // e^{i phi} sin(theta/2)|1..1>.
  Vector target(std::size_t{1} << n);
  target.front() = std::cos(psi.theta / 2.0);
  target.back() = std::exp(Complex{0.0, psi.phi}) * std::sin(psi.theta / 2.0);
  RetrievalTask task;
  task.retriever = n == 1 ? "Bob1" : "receivers (joint)";
  task.labels = receiver_labels;
  task.target = DensityOp::from_pure(std::move(target), CompositeDims::qubits(receiver_labels));
  built.retrieval = std::move(task);
  built.notes = {
      "no single receiver recovers the input; it reappears shared across all receivers"};
  return built;
}

BuiltScenario multiparty_classical(const ScenarioSpec& spec, const SampleInput& sample) {
  spec.validate();
  const double p = sample.p.value_or(spec.p);
  if (!(p >= 0.0 && p <= 1.0)) throw RangeError("p must lie in [0, 1]");
  const int n = spec.n;

  BuiltScenario built;
  common_fields(built, spec);

  std::vector<Label> shared_labels = {"alpha"};
  std::vector<Label> receiver_labels;
  built.parties.push_back(make_party(spec, "Sender", {"src", "alpha"}));
  for (int k = 1; k <= n; ++k) {
    const Label lbl = "beta" + std::to_string(k);
    shared_labels.push_back(lbl);
    receiver_labels.push_back(lbl);
    built.parties.push_back(make_party(spec, "Recv" + std::to_string(k), {lbl}));
  }

  const Rational prep = spec.times.t1 - Rational{1};
  built.timeline.events = {
      {prep, PrepareEvent{classical_mixture(p, "src")}},
      {prep, PrepareEvent{classical_correlated(n + 1, shared_labels)}},
      {spec.times.t1, MeasureEvent{"Sender", {"src", "alpha"}, parity_projectors(), "parity"}},
  };
  if (spec.variants.discard_source)
    built.timeline.events.push_back(
        {spec.times.t1, DiscardEvent{"Sender", {"src", "alpha"}}});
  std::map<int, ComplexMatrix> corrections;
  corrections[0] = qubit_identity();
  corrections[1] = pauli(PauliAxis::x);
  for (int k = 1; k <= n; ++k) {
    built.timeline.events.push_back(
        {spec.times.t_send, SendClassicalEvent{"Sender", "Recv" + std::to_string(k), "parity",
                                               spec.times.t_send, spec.times.arrive()}});
  }
  for (int k = 1; k <= n; ++k)
    built.timeline.events.push_back(
        {spec.times.t2, ConditionalUnitaryEvent{"Recv" + std::to_string(k),
                                                {"beta" + std::to_string(k)},
                                                "parity",
                                                corrections}});

  built.record = "parity";
  built.record_cardinality = 2;
  built.groupings = {{"src", "alpha"}, receiver_labels, {"src"}};
  built.cut = {{"src", "alpha"}, receiver_labels};
  built.discord_side = {"src", "alpha"};
  built.discord_projectors = computational_projectors(4);

  // Broadcast outcome: p|0..0><0..0| + (1-p)|1..1><1..1| over the receivers.
  const std::size_t dim = std::size_t{1} << n;
  ComplexMatrix target(dim);
  target(0, 0) = p;
  target(dim - 1, dim - 1) = 1.0 - p;
  RetrievalTask task;
  task.retriever = n == 1 ? "Recv1" : "receivers (joint)";
  task.labels = receiver_labels;
  task.target = DensityOp(std::move(target), CompositeDims::qubits(receiver_labels));
  task.compare_by_trace_distance = true;
  built.retrieval = std::move(task);
  built.notes = {
      "commuting mixtures broadcast: the receivers end in the correlated broadcast state, not in "
      "n independent copies"};
  return built;
}

BuiltScenario psi_pair_dist(const ScenarioSpec& spec, const SampleInput& sample) {
  spec.validate();
  const PureQubitParams psi = sample.psi.value_or(spec.psi);
  psi.validate();

  BuiltScenario built;
  common_fields(built, spec);
  built.parties = {make_party(spec, "Alice", {"A"}), make_party(spec, "Bob", {"B"})};
  const Rational prep = spec.times.t1 - Rational{1};
  built.timeline.events = {{prep, PrepareEvent{psi_pair(psi, "A", "B")}}};

  built.record.clear();
  built.record_cardinality = 0;
  built.groupings = {{"A"}, {"B"}};
  built.cut = {{"A"}, {"B"}};
  built.discord_side = {"A"};
  built.discord_projectors = computational_projectors(2);
  built.retrieval = std::nullopt;
  built.exploratory = true;
  built.notes = {
      "the shared state is maximally entangled for every input; the preparation angles stay "
      "unknown to both holders",
      "the state depends on the input only through the relative phase of the second angle"};
  return built;
}

BuiltScenario build_scenario(const ScenarioSpec& spec, const SampleInput& sample) {
  switch (spec.kind) {
    case ScenarioKind::std_teleport: return std_teleport(spec, sample);
    case ScenarioKind::classical_teleport: return classical_teleport(spec, sample);
    case ScenarioKind::multiparty_teleport: return multiparty_teleport(spec, sample);
    case ScenarioKind::multiparty_classical: return multiparty_classical(spec, sample);
    case ScenarioKind::misrouted: return misrouted(spec, sample);
    case ScenarioKind::psi_pair_dist: return psi_pair_dist(spec, sample);
  }
  throw RangeError("unknown scenario kind");
}

}  // namespace vqi
