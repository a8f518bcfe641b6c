#include "vqi/engine.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <set>

namespace vqi {

namespace {

constexpr double kBranchPruneTol = 1e-12;
constexpr double kUnitaryTol = 1e-10;

const Party* find_party(const std::vector<Party>& parties, const std::string& name) {
  for (const Party& p : parties)
    if (p.name == name) return &p;
  return nullptr;
}

bool owns_all(const Party& party, const std::vector<Label>& labels) {
  for (const Label& l : labels)
    if (std::find(party.systems.begin(), party.systems.end(), l) == party.systems.end())
      return false;
  return true;
}

std::string join(const std::vector<Label>& labels) {
  std::string out;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) out += ",";
    out += labels[i];
  }
  return out;
}

void check_locality(const std::vector<Party>& parties, const std::string& party,
                    const std::vector<Label>& labels, const std::string& what,
                    std::vector<Violation>& out) {
  const Party* p = find_party(parties, party);
  if (p == nullptr) {
    out.push_back({"structure", what + ": unknown party '" + party + "'"});
    return;
  }
  if (!owns_all(*p, labels))
    out.push_back({"locality", what + ": party '" + party + "' acts on foreign systems {" +
                                    join(labels) + "}"});
}

}  // namespace

std::vector<Violation> validate(const Timeline& timeline, const std::vector<Party>& parties,
                                const RelativitySettings& relativity) {
  std::vector<Violation> out;

  // Party system sets must be disjoint.
  for (std::size_t i = 0; i < parties.size(); ++i)
    for (std::size_t j = i + 1; j < parties.size(); ++j)
      for (const Label& l : parties[i].systems)
        if (std::find(parties[j].systems.begin(), parties[j].systems.end(), l) !=
            parties[j].systems.end())
          out.push_back({"structure", "parties '" + parties[i].name + "' and '" + parties[j].name +
                                          "' both claim system '" + l + "'"});

  std::set<std::string> defined_records;
  for (const Event& ev : timeline.events) {
    if (const auto* m = std::get_if<MeasureEvent>(&ev.body)) {
      if (!defined_records.insert(m->record).second)
        out.push_back({"structure", "record '" + m->record + "' is measured more than once"});
    }
  }

  for (const Event& ev : timeline.events) {
    if (const auto* u = std::get_if<ApplyUnitaryEvent>(&ev.body)) {
      check_locality(parties, u->party, u->labels, "ApplyUnitary", out);
    } else if (const auto* m = std::get_if<MeasureEvent>(&ev.body)) {
      check_locality(parties, m->party, m->labels, "MeasureProjective", out);
      // orthonormal and complete projector list
      if (m->projectors.empty()) {
        out.push_back({"measurement", "record '" + m->record + "': empty projector list"});
        continue;
      }
      const std::size_t d = m->projectors.front().dim();
      ComplexMatrix sum = ComplexMatrix::zero(d);
      bool well_formed = true;
      for (std::size_t a = 0; a < m->projectors.size(); ++a) {
        const ComplexMatrix& pa = m->projectors[a];
        if (pa.dim() != d || pa.hermiticity_defect() > kUnitaryTol ||
            (pa * pa).max_abs_diff(pa) > kUnitaryTol) {
          well_formed = false;
          break;
        }
        for (std::size_t b = a + 1; b < m->projectors.size(); ++b) {
          if (m->projectors[b].dim() != d || (pa * m->projectors[b]).max_abs() > kUnitaryTol) {
            well_formed = false;
            break;
          }
        }
        sum += pa;
      }
      if (well_formed && sum.max_abs_diff(ComplexMatrix::identity(d)) > kUnitaryTol)
        well_formed = false;
      if (!well_formed)
        out.push_back({"measurement",
                       "record '" + m->record + "': projectors are not an orthonormal complete set"});
    } else if (const auto* s = std::get_if<SendClassicalEvent>(&ev.body)) {
      if (find_party(parties, s->from) == nullptr)
        out.push_back({"structure", "SendClassical: unknown sender '" + s->from + "'"});
      if (find_party(parties, s->to) == nullptr)
        out.push_back({"structure", "SendClassical: unknown recipient '" + s->to + "'"});
      if (!(s->arrive_time > s->send_time))
        out.push_back({"structure", "SendClassical '" + s->record +
                                        "': arrive_time must be later than send_time"});
      if (!(ev.time == s->send_time))
        out.push_back({"structure", "SendClassical '" + s->record +
                                        "': event time differs from send_time"});
      if (!defined_records.count(s->record))
        out.push_back({"structure", "SendClassical: record '" + s->record + "' is never measured"});
      if (relativity.enabled) {
        const Party* from = find_party(parties, s->from);
        const Party* to = find_party(parties, s->to);
        if (from != nullptr && to != nullptr) {
          if (!from->position || !to->position) {
            out.push_back({"relativity", "SendClassical '" + s->record +
                                             "': party positions required for the relativity check"});
          } else {
            const double dist = std::abs(*to->position - *from->position);
            const double dt = (s->arrive_time - s->send_time).to_double();
            if (dt * relativity.speed < dist - 1e-12)
              out.push_back({"relativity", "SendClassical '" + s->record + "': transit time " +
                                               std::to_string(dt) + " beats distance " +
                                               std::to_string(dist) + " at speed " +
                                               std::to_string(relativity.speed)});
          }
        }
      }
    } else if (const auto* c = std::get_if<ConditionalUnitaryEvent>(&ev.body)) {
      check_locality(parties, c->party, c->labels, "ConditionalUnitary", out);
      if (!defined_records.count(c->record))
        out.push_back(
            {"structure", "ConditionalUnitary: record '" + c->record + "' is never measured"});
    } else if (const auto* dd = std::get_if<DiscardEvent>(&ev.body)) {
      check_locality(parties, dd->party, dd->labels, "Discard", out);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct WorkItem {
  Rational time;
  int phase;          // 0 = classical delivery, 1 = declared event
  std::size_t index;  // event index (the send event for deliveries)
};

ComplexMatrix lift(const ComplexMatrix& op, const CompositeDims& dims,
                   const std::vector<Label>& labels) {
  return embed_operator(op, dims.dims(), dims.indices_of(labels));
}

void require_labels(const CompositeDims& dims, const std::vector<Label>& labels,
                    const std::string& what) {
  for (const Label& l : labels)
    if (!dims.contains(l)) throw StateError(what + ": system '" + l + "' is not prepared");
}

void require_unitary(const ComplexMatrix& op, const std::string& what) {
  const ComplexMatrix gram = op.adjoint() * op;
  if (gram.max_abs_diff(ComplexMatrix::identity(op.dim())) > kUnitaryTol)
    throw StateError(what + ": operator is not unitary");
}

double uniform_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

const Checkpoint& Trajectory::at(const Rational& time) const {
  if (checkpoints.empty()) throw StateError("trajectory has no checkpoints");
  const Checkpoint* best = &checkpoints.front();
  for (const Checkpoint& cp : checkpoints) {
    if (cp.time <= time) best = &cp;
  }
  return *best;
}

const Checkpoint& Trajectory::final() const {
  if (checkpoints.empty()) throw StateError("trajectory has no checkpoints");
  return checkpoints.back();
}

bool Trajectory::holds(const std::string& party, const std::string& record,
                       const Rational& time) const {
  const auto rec = record_holders.find(record);
  if (rec == record_holders.end()) return false;
  const auto par = rec->second.find(party);
  return par != rec->second.end() && par->second <= time;
}

Trajectory execute(const Timeline& timeline, const std::vector<Party>& parties, ExecutionMode mode,
                   const SampledSettings& sampled, const RelativitySettings& relativity) {
  {
    const std::vector<Violation> violations = validate(timeline, parties, relativity);
    if (!violations.empty()) {
      std::string msg = "timeline fails validation:";
      for (const Violation& v : violations) msg += "\n  [" + v.kind + "] " + v.detail;
      throw ValidationError(msg);
    }
  }

  std::vector<WorkItem> items;
  for (std::size_t i = 0; i < timeline.events.size(); ++i) {
    items.push_back({timeline.events[i].time, 1, i});
    if (const auto* s = std::get_if<SendClassicalEvent>(&timeline.events[i].body))
      items.push_back({s->arrive_time, 0, i});
  }
  std::stable_sort(items.begin(), items.end(), [](const WorkItem& a, const WorkItem& b) {
    if (a.time != b.time) return a.time < b.time;
    if (a.phase != b.phase) return a.phase < b.phase;
    return false;  // declaration order, kept stable
  });

  Trajectory traj;
  traj.parties = parties;
  traj.mode = ExecutionMode::ensemble;

  CompositeDims dims;  // shared across branches
  std::vector<Branch> branches;
  branches.push_back({1.0, DensityOp(ComplexMatrix::identity(1), CompositeDims{}), {}});

  auto snapshot = [&](const Rational& time) {
    Checkpoint cp;
    cp.time = time;
    cp.branches = branches;
    for (const auto& [record, holders] : traj.record_holders) {
      std::vector<std::string> held;
      for (const auto& [party, from] : holders)
        if (from <= time) held.push_back(party);
      std::sort(held.begin(), held.end());
      cp.holders[record] = std::move(held);
    }
    traj.checkpoints.push_back(std::move(cp));
  };

  for (std::size_t i = 0; i < items.size();) {
    const Rational now = items[i].time;
    for (; i < items.size() && items[i].time == now; ++i) {
      const Event& ev = timeline.events[items[i].index];

      if (items[i].phase == 0) {
        const auto& s = std::get<SendClassicalEvent>(ev.body);
        auto& entry = traj.record_holders[s.record];
        const auto it = entry.find(s.to);
        if (it == entry.end() || s.arrive_time < it->second) entry[s.to] = s.arrive_time;
        continue;
      }

      if (const auto* p = std::get_if<PrepareEvent>(&ev.body)) {
        for (const Label& l : p->state.dims().labels())
          if (dims.contains(l)) throw StateError("Prepare: system '" + l + "' already prepared");
        dims = dims + p->state.dims();
        for (Branch& b : branches) b.state = kron(b.state, p->state);
      } else if (const auto* u = std::get_if<ApplyUnitaryEvent>(&ev.body)) {
        require_labels(dims, u->labels, "ApplyUnitary");
        require_unitary(u->op, "ApplyUnitary");
        const ComplexMatrix big = lift(u->op, dims, u->labels);
        const ComplexMatrix big_dag = big.adjoint();
        for (Branch& b : branches)
          b.state = DensityOp(big * b.state.matrix() * big_dag, dims);
      } else if (const auto* m = std::get_if<MeasureEvent>(&ev.body)) {
        require_labels(dims, m->labels, "MeasureProjective");
        std::vector<ComplexMatrix> lifted;
        lifted.reserve(m->projectors.size());
        for (const ComplexMatrix& proj : m->projectors) lifted.push_back(lift(proj, dims, m->labels));

        std::vector<Branch> next;
        for (const Branch& b : branches) {
          for (std::size_t k = 0; k < lifted.size(); ++k) {
            const ComplexMatrix post = lifted[k] * b.state.matrix() * lifted[k];
            const double prob = std::max(post.trace().real(), 0.0);
            const double joint = b.probability * prob;
            if (joint < kBranchPruneTol) continue;
            Branch nb;
            nb.probability = joint;
            nb.state = DensityOp(Complex{1.0 / prob} * post, dims);
            nb.records = b.records;
            nb.records[m->record] = static_cast<int>(k);
            next.push_back(std::move(nb));
          }
        }
        double total = 0.0;
        for (const Branch& b : next) total += b.probability;
        if (total <= 0.0) throw StateError("MeasureProjective: all outcomes pruned");
        for (Branch& b : next) b.probability /= total;
        branches = std::move(next);
        // the measuring party holds the outcome from the measurement time on
        traj.record_holders[m->record][m->party] = ev.time;
      } else if (const auto* s = std::get_if<SendClassicalEvent>(&ev.body)) {
        const auto rec = traj.record_holders.find(s->record);
        const bool sender_holds = rec != traj.record_holders.end() &&
                                  rec->second.count(s->from) &&
                                  rec->second.at(s->from) <= s->send_time;
        if (!sender_holds)
          throw CausalityError("SendClassical: '" + s->from + "' does not hold record '" +
                               s->record + "' at t=" + s->send_time.str());
        // delivery is a separate work item at arrive_time
      } else if (const auto* c = std::get_if<ConditionalUnitaryEvent>(&ev.body)) {
        require_labels(dims, c->labels, "ConditionalUnitary");
        if (!traj.holds(c->party, c->record, ev.time))
          throw CausalityError("ConditionalUnitary: party '" + c->party +
                               "' does not hold record '" + c->record + "' at t=" + ev.time.str() +
                               " (correction cannot precede the classical message)");
        for (Branch& b : branches) {
          const auto outcome = b.records.find(c->record);
          if (outcome == b.records.end())
            throw StateError("ConditionalUnitary: record '" + c->record + "' missing in branch");
          const auto op = c->corrections.find(outcome->second);
          if (op == c->corrections.end())
            throw StateError("ConditionalUnitary: no correction for outcome " +
                             std::to_string(outcome->second));
          require_unitary(op->second, "ConditionalUnitary");
          const ComplexMatrix big = lift(op->second, dims, c->labels);
          b.state = DensityOp(big * b.state.matrix() * big.adjoint(), dims);
        }
      } else if (const auto* dd = std::get_if<DiscardEvent>(&ev.body)) {
        require_labels(dims, dd->labels, "Discard");
        std::vector<Label> keep;
        for (const Label& l : dims.labels())
          if (std::find(dd->labels.begin(), dd->labels.end(), l) == dd->labels.end())
            keep.push_back(l);
        for (Branch& b : branches) b.state = partial_trace(b.state, keep);
        dims = dims.erase(dd->labels);
      }
    }
    snapshot(now);
  }

  if (traj.checkpoints.empty()) snapshot(Rational{0});

  if (mode == ExecutionMode::sampled) {
    traj.mode = ExecutionMode::sampled;
    if (sampled.shots == 0) throw RangeError("sampled mode requires at least one shot");

    const std::vector<Branch>& finals = traj.checkpoints.back().branches;
    std::vector<std::size_t> counts(finals.size(), 0);
    std::mt19937_64 rng(sampled.seed);
    for (std::size_t shot = 0; shot < sampled.shots; ++shot) {
      const double u = uniform_double(rng);
      double acc = 0.0;
      std::size_t pick = finals.size() - 1;
      for (std::size_t k = 0; k < finals.size(); ++k) {
        acc += finals[k].probability;
        if (u < acc) {
          pick = k;
          break;
        }
      }
      ++counts[pick];
    }

    // A checkpoint branch is an ancestor of a final branch iff its record
    // assignments form a sub-map of the final one ever since branches only
    // split and each split adds a fresh record.
    for (Checkpoint& cp : traj.checkpoints) {
      for (Branch& b : cp.branches) {
        std::size_t hits = 0;
        for (std::size_t k = 0; k < finals.size(); ++k) {
          bool consistent = true;
          for (const auto& [name, value] : b.records) {
            const auto it = finals[k].records.find(name);
            if (it == finals[k].records.end() || it->second != value) {
              consistent = false;
              break;
            }
          }
          if (consistent) hits += counts[k];
        }
        b.probability = static_cast<double>(hits) / static_cast<double>(sampled.shots);
      }
    }
  }

  return traj;
}

// ---------------------------------------------------------------------------

DensityOp mixture_state(const Checkpoint& checkpoint) {
  if (checkpoint.branches.empty()) throw StateError("checkpoint has no branches");
  ComplexMatrix acc = ComplexMatrix::zero(checkpoint.branches.front().state.dim());
  for (const Branch& b : checkpoint.branches)
    acc += Complex{b.probability} * b.state.matrix();
  return DensityOp(std::move(acc), checkpoint.branches.front().state.dims());
}

DensityOp averaged_view(const Trajectory& traj, const Rational& time) {
  return mixture_state(traj.at(time));
}

ObserverView observer_view(const Trajectory& traj, const std::string& party, const Rational& time) {
  if (find_party(traj.parties, party) == nullptr)
    throw LabelError("observer_view: unknown party '" + party + "'");
  const Checkpoint& cp = traj.at(time);

  // Group branches by the values of the records this party holds.
  std::map<std::map<std::string, int>, std::pair<double, ComplexMatrix>> groups;
  for (const Branch& b : cp.branches) {
    std::map<std::string, int> known;
    for (const auto& [record, value] : b.records)
      if (traj.holds(party, record, time)) known[record] = value;
    auto it = groups.find(known);
    if (it == groups.end()) {
      groups.emplace(std::move(known),
                     std::make_pair(b.probability, Complex{b.probability} * b.state.matrix()));
    } else {
      it->second.first += b.probability;
      it->second.second += Complex{b.probability} * b.state.matrix();
    }
  }

  ObserverView view;
  const CompositeDims& dims = cp.branches.front().state.dims();
  for (auto& [known, acc] : groups) {
    ViewComponent comp;
    comp.known_records = known;
    comp.probability = acc.first;
    comp.state = DensityOp(Complex{1.0 / acc.first} * acc.second, dims);
    view.components.push_back(std::move(comp));
  }
  return view;
}

std::map<int, double> record_distribution(const Checkpoint& checkpoint, const std::string& record) {
  std::map<int, double> out;
  for (const Branch& b : checkpoint.branches) {
    const auto it = b.records.find(record);
    if (it == b.records.end())
      throw StateError("record_distribution: record '" + record + "' missing in branch");
    out[it->second] += b.probability;
  }
  return out;
}

ComplexMatrix classical_quantum_joint(const Checkpoint& checkpoint, const std::string& record,
                                      std::size_t cardinality, const std::vector<Label>& labels) {
  if (checkpoint.branches.empty()) throw StateError("checkpoint has no branches");
  ComplexMatrix out;
  for (const Branch& b : checkpoint.branches) {
    const auto it = b.records.find(record);
    if (it == b.records.end())
      throw StateError("classical_quantum_joint: record '" + record + "' missing in branch");
    const int value = it->second;
    if (value < 0 || static_cast<std::size_t>(value) >= cardinality)
      throw RangeError("classical_quantum_joint: record value outside cardinality");
    const DensityOp reduced = partial_trace(b.state, labels);
    if (out.dim() == 0) out = ComplexMatrix::zero(cardinality * reduced.dim());
    const std::size_t off = static_cast<std::size_t>(value) * reduced.dim();
    for (std::size_t r = 0; r < reduced.dim(); ++r)
      for (std::size_t c = 0; c < reduced.dim(); ++c)
        out(off + r, off + c) += Complex{b.probability} * reduced.matrix()(r, c);
  }
  return out;
}

}  // namespace vqi
