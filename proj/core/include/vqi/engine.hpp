#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "vqi/density.hpp"
#include "vqi/rational.hpp"

namespace vqi {

// A lab. Parties own disjoint sets of system labels; the position feeds the
// optional relativity check on classical messages.
struct Party {
  std::string name;
  std::vector<Label> systems;
  std::optional<double> position;
};

// ---------------------------------------------------------------------------
// Timeline events. Prepare carries no party: shared resources (entangled or
// classically correlated states) are distributed before the protocol acts.

struct PrepareEvent {
  DensityOp state;  // labels come from state.dims()
};

struct ApplyUnitaryEvent {
  std::string party;
  std::vector<Label> labels;
  ComplexMatrix op;
};

struct MeasureEvent {
  std::string party;
  std::vector<Label> labels;
  std::vector<ComplexMatrix> projectors;  // orthogonal, complete; outcome k -> projectors[k]
  std::string record;
};

struct SendClassicalEvent {
  std::string from;
  std::string to;
  std::string record;
  Rational send_time;
  Rational arrive_time;  // must be strictly later than send_time
};

struct ConditionalUnitaryEvent {
  std::string party;
  std::vector<Label> labels;
  std::string record;
  std::map<int, ComplexMatrix> corrections;  // outcome -> unitary
};

struct DiscardEvent {
  std::string party;
  std::vector<Label> labels;
};

struct Event {
  Rational time;
  std::variant<PrepareEvent, ApplyUnitaryEvent, MeasureEvent, SendClassicalEvent,
               ConditionalUnitaryEvent, DiscardEvent>
      body;
};

struct Timeline {
  std::vector<Event> events;
};

// ---------------------------------------------------------------------------
// Validation. Violations are data, not exceptions.

struct RelativitySettings {
  bool enabled = false;
  double speed = 1.0;
};

struct Violation {
  std::string kind;  // "locality" | "relativity" | "measurement" | "structure"
  std::string detail;
};

std::vector<Violation> validate(const Timeline& timeline, const std::vector<Party>& parties,
                                const RelativitySettings& relativity = {});

// ---------------------------------------------------------------------------
// Execution results

struct Branch {
  double probability = 1.0;
  DensityOp state;  // over all live systems
  std::map<std::string, int> records;
};

struct Checkpoint {
  Rational time;
  std::vector<Branch> branches;
  // record -> parties that hold it at this time (sorted by name)
  std::map<std::string, std::vector<std::string>> holders;
};

enum class ExecutionMode { ensemble, sampled };

struct SampledSettings {
  std::uint64_t seed = 42;
  std::size_t shots = 4096;
};

class Trajectory {
 public:
  std::vector<Checkpoint> checkpoints;
  std::vector<Party> parties;
  ExecutionMode mode = ExecutionMode::ensemble;

  // Latest checkpoint at or before `time`; clamps to the first checkpoint
  // for earlier queries, so "before any event" sees the prepared state.
  const Checkpoint& at(const Rational& time) const;
  const Checkpoint& final() const;

  // True when `party` holds `record` at `time`.
  bool holds(const std::string& party, const std::string& record, const Rational& time) const;

  // record -> (party -> time the record becomes known there)
  std::map<std::string, std::map<std::string, Rational>> record_holders;
};

Trajectory execute(const Timeline& timeline, const std::vector<Party>& parties,
                   ExecutionMode mode = ExecutionMode::ensemble,
                   const SampledSettings& sampled = {},
                   const RelativitySettings& relativity = {});

// ---------------------------------------------------------------------------
// Observer-relative views

// Probability-weighted mixture over all branches (the no-record observer).
DensityOp mixture_state(const Checkpoint& checkpoint);
DensityOp averaged_view(const Trajectory& traj, const Rational& time);

// The state conditioned on everything the party knows: one component per
// assignment of the records the party holds at `time`. An observer with no
// records gets a single component equal to the full mixture; the measuring
// party gets one (typically pure) component per outcome.
struct ViewComponent {
  std::map<std::string, int> known_records;
  double probability = 1.0;
  DensityOp state;
};

struct ObserverView {
  std::vector<ViewComponent> components;
};

ObserverView observer_view(const Trajectory& traj, const std::string& party, const Rational& time);

// Distribution of one classical record at a checkpoint.
std::map<int, double> record_distribution(const Checkpoint& checkpoint, const std::string& record);

// Classical-quantum operator pairing a record with the reduced state on
// `labels`: sum_b p_b |record_b><record_b| (x) rho_b|labels, with the record
// embedded as a basis state of a `cardinality`-dimensional register.
ComplexMatrix classical_quantum_joint(const Checkpoint& checkpoint, const std::string& record,
                                      std::size_t cardinality, const std::vector<Label>& labels);

}  // namespace vqi
