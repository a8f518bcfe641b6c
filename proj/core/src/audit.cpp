#include "vqi/audit.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <mutex>
#include <numbers>
#include <random>
#include <thread>

namespace vqi {

namespace {

constexpr double kConditionTol = 1e-9;
constexpr double kPi = std::numbers::pi;

double uniform_double(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

void InputFamily::validate() const {
  if (samples.size() < 2) throw RangeError("input family needs at least two samples");
}

InputFamily family_grid(int theta_steps, int phi_steps) {
  if (theta_steps < 1 || phi_steps < 1) throw RangeError("family_grid: steps must be positive");
  InputFamily fam;
  fam.description = "grid(" + std::to_string(theta_steps) + "," + std::to_string(phi_steps) + ")";
  fam.real_parameters = 2;
  for (int j = 0; j < theta_steps; ++j) {
    const double theta = theta_steps == 1 ? 0.0 : kPi * j / (theta_steps - 1);
    for (int k = 0; k < phi_steps; ++k) {
      const double phi = 2.0 * kPi * k / phi_steps;
      SampleInput s;
      s.psi = PureQubitParams{theta, phi};
      fam.samples.push_back(s);
    }
  }
  fam.validate();
  return fam;
}

InputFamily family_random(int count, std::uint64_t seed) {
  if (count < 2) throw RangeError("family_random: need at least two samples");
  InputFamily fam;
  fam.description = "random(" + std::to_string(count) + ",seed" + std::to_string(seed) + ")";
  fam.real_parameters = 2;
  std::mt19937_64 rng(seed);
  for (int k = 0; k < count; ++k) {
    const double theta = std::acos(1.0 - 2.0 * uniform_double(rng));
    const double phi = 2.0 * kPi * uniform_double(rng);
    SampleInput s;
    s.psi = PureQubitParams{theta, phi};
    fam.samples.push_back(s);
  }
  fam.validate();
  return fam;
}

InputFamily family_p_grid(int steps) {
  if (steps < 2) throw RangeError("family_p_grid: need at least two steps");
  InputFamily fam;
  fam.description = "p_grid(" + std::to_string(steps) + ")";
  fam.real_parameters = 1;
  for (int j = 0; j < steps; ++j) {
    SampleInput s;
    s.p = static_cast<double>(j) / (steps - 1);
    fam.samples.push_back(s);
  }
  fam.validate();
  return fam;
}

InputFamily family_union(InputFamily a, const InputFamily& b) {
  a.description += "+" + b.description;
  a.samples.insert(a.samples.end(), b.samples.begin(), b.samples.end());
  a.real_parameters = std::max(a.real_parameters, b.real_parameters);
  a.validate();
  return a;
}

InputFamily default_family(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::classical_teleport:
    case ScenarioKind::multiparty_classical:
      return family_p_grid(11);
    default:
      return family_union(family_grid(5, 8), family_random(32, 42));
  }
}

// ---------------------------------------------------------------------------

unsigned audit_thread_budget() {
  const char* env = std::getenv("VQI_THREADS");
  if (env == nullptr) {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
  }
  const long parsed = std::strtol(env, nullptr, 10);
  if (parsed <= 0) return 1;
  return static_cast<unsigned>(parsed);
}

namespace {

// Run fn(i) for i in [0, count) across the thread budget. Results must be
// written into per-index slots; the reduction stays with the caller, in
// index order, so reports are deterministic.
template <typename Fn>
void for_each_sample(std::size_t count, Fn&& fn) {
  const unsigned budget = std::min<unsigned>(audit_thread_budget(), static_cast<unsigned>(count));
  if (budget <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  std::exception_ptr failure;
  std::mutex failure_mutex;
  for (unsigned t = 0; t < budget; ++t) {
    pool.emplace_back([&, t]() {
      try {
        for (std::size_t i = t; i < count; i += budget) fn(i);
      } catch (...) {
        const std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (std::thread& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

Trajectory run_sample(const ScenarioSpec& spec, const SampleInput& sample, BuiltScenario* built_out) {
  BuiltScenario built = build_scenario(spec, sample);
  Trajectory traj = execute(built.timeline, built.parties, ExecutionMode::ensemble, {},
                            built.relativity);
  if (built_out != nullptr) *built_out = std::move(built);
  return traj;
}

std::vector<Rational> default_probes(const BuiltScenario& built) {
  return {(built.t1 + built.t2) / Rational{2}};
}

}  // namespace

ConditionIResult check_condition_i(const ScenarioSpec& spec, const InputFamily& family,
                                   std::vector<std::vector<Label>> groupings,
                                   std::vector<Rational> probe_times) {
  family.validate();
  const BuiltScenario base = build_scenario(spec, family.samples.front());
  if (groupings.empty()) groupings = base.groupings;
  if (probe_times.empty()) probe_times = default_probes(base);
  for (const Rational& probe : probe_times)
    if (!(base.t1 < probe && probe < base.t2))
      throw RangeError("condition (i) probe time " + probe.str() + " is outside the window");

  // reduced[g][p][s]: marginal of grouping g at probe p for sample s;
  // empty matrix when the grouping's systems are gone.
  const std::size_t ng = groupings.size(), np = probe_times.size(), ns = family.samples.size();
  std::vector<std::vector<std::vector<ComplexMatrix>>> reduced(
      ng, std::vector<std::vector<ComplexMatrix>>(np, std::vector<ComplexMatrix>(ns)));
  // not vector<bool>: slots are written concurrently
  std::vector<std::vector<std::vector<char>>> partial(
      ng, std::vector<std::vector<char>>(np, std::vector<char>(ns, 0)));

  for_each_sample(ns, [&](std::size_t s) {
    const Trajectory traj = run_sample(spec, family.samples[s], nullptr);
    for (std::size_t p = 0; p < np; ++p) {
      const DensityOp window = averaged_view(traj, probe_times[p]);
      for (std::size_t g = 0; g < ng; ++g) {
        std::vector<Label> present;
        for (const Label& l : groupings[g])
          if (window.dims().contains(l)) present.push_back(l);
        if (present.empty()) continue;  // discarded; leave the slot empty
        partial[g][p][s] = present.size() != groupings[g].size() ? 1 : 0;
        reduced[g][p][s] = partial_trace(window, present).matrix();
      }
    }
  });

  ConditionIResult result;
  result.tolerance = kConditionTol;
  result.probe_times = probe_times;
  for (std::size_t g = 0; g < ng; ++g) {
    GroupingResult gr;
    gr.labels = groupings[g];
    bool any = false, was_partial = false;
    double max_dist = 0.0;
    for (std::size_t p = 0; p < np; ++p) {
      for (std::size_t s = 0; s < ns; ++s) {
        if (reduced[g][p][s].dim() == 0) continue;
        any = true;
        was_partial = was_partial || partial[g][p][s];
        for (std::size_t s2 = s + 1; s2 < ns; ++s2) {
          if (reduced[g][p][s2].dim() == 0) continue;
          max_dist = std::max(max_dist, trace_distance(reduced[g][p][s], reduced[g][p][s2]));
        }
      }
    }
    gr.evaluated = any;
    gr.max_pairwise_distance = any ? max_dist : 0.0;
    gr.pass = !any || max_dist <= result.tolerance;
    if (!any)
      gr.note = "systems discarded during the window; marginal trivially input-independent";
    else if (was_partial)
      gr.note = "evaluated on the surviving subset of the grouping";
    result.groupings.push_back(std::move(gr));
    result.pass = result.pass && result.groupings.back().pass;
  }
  return result;
}

ConditionIIResult check_condition_ii(const ScenarioSpec& spec, const InputFamily& family,
                                     std::optional<Bipartition> cut,
                                     std::vector<Rational> probe_times) {
  family.validate();
  const BuiltScenario base = build_scenario(spec, family.samples.front());
  const Bipartition the_cut = cut.value_or(base.cut);
  if (probe_times.empty()) probe_times = default_probes(base);

  const std::size_t ns = family.samples.size();
  std::vector<CorrelationProfile> profiles(ns * probe_times.size());
  std::vector<double> bounds(ns * probe_times.size(), 0.0);
  // not vector<bool>: slots are written concurrently
  std::vector<char> degraded(ns * probe_times.size(), 0);

  for_each_sample(ns, [&](std::size_t s) {
    BuiltScenario built;
    const Trajectory traj = run_sample(spec, family.samples[s], &built);
    for (std::size_t p = 0; p < probe_times.size(); ++p) {
      const DensityOp window = averaged_view(traj, probe_times[p]);
      const std::size_t slot = s * probe_times.size() + p;

      // Discarded systems shrink the cut; a one-sided cut carries no
      // correlations at all and scores zero on every entry.
      Bipartition live_cut;
      for (const Label& l : the_cut.first)
        if (window.dims().contains(l)) live_cut.first.push_back(l);
      for (const Label& l : the_cut.second)
        if (window.dims().contains(l)) live_cut.second.push_back(l);
      const bool shrunk = live_cut.first.size() != the_cut.first.size() ||
                          live_cut.second.size() != the_cut.second.size();
      if (live_cut.first.empty() || live_cut.second.empty()) {
        profiles[slot] = CorrelationProfile{};
        profiles[slot].discord_side = "(discarded)";
        bounds[slot] = 0.0;
        degraded[slot] = 1;
        continue;
      }
      std::vector<Label> live_side;
      for (const Label& l : built.discord_side)
        if (window.dims().contains(l)) live_side.push_back(l);
      if (live_side.empty() || live_side.size() != built.discord_side.size()) {
        // no sensible certificate left; report the correlation numbers only
        CorrelationProfile prof;
        prof.mutual_information_bits = mutual_information(window, live_cut);
        prof.nearest_product_relent_bits = nearest_product_relent(window, live_cut).bits;
        const Negativity neg = negativity(window, live_cut);
        prof.negativity = neg.value;
        prof.ppt = neg.ppt;
        prof.discord_side = "(discarded)";
        profiles[slot] = std::move(prof);
        degraded[slot] = 1;
      } else {
        profiles[slot] =
            correlation_profile(window, live_cut, live_side, built.discord_projectors);
        degraded[slot] = static_cast<char>(degraded[slot] || shrunk);
      }
      std::size_t d1 = 1, d2 = 1;
      for (const Label& l : live_cut.first) d1 *= window.dims().part(window.dims().index_of(l)).dim;
      for (const Label& l : live_cut.second)
        d2 *= window.dims().part(window.dims().index_of(l)).dim;
      bounds[slot] = std::log2(static_cast<double>(std::min(d1, d2)));
    }
  });

  ConditionIIResult result;
  result.cut = the_cut;
  result.family_size = ns;
  result.worst = profiles.front();
  result.bound_bits = bounds.front();
  for (std::size_t i = 1; i < profiles.size(); ++i) {
    const CorrelationProfile& p = profiles[i];
    result.worst.mutual_information_bits =
        std::max(result.worst.mutual_information_bits, p.mutual_information_bits);
    result.worst.nearest_product_relent_bits =
        std::max(result.worst.nearest_product_relent_bits, p.nearest_product_relent_bits);
    result.worst.negativity = std::max(result.worst.negativity, p.negativity);
    result.worst.ppt = result.worst.ppt && p.ppt;
    result.worst.discord_bits = std::max(result.worst.discord_bits, p.discord_bits);
    result.worst.classical_correlation_bits =
        std::max(result.worst.classical_correlation_bits, p.classical_correlation_bits);
    result.bound_bits = std::max(result.bound_bits, bounds[i]);
  }

  result.family_info =
      family.real_parameters == 2
          ? "continuum: 2 real parameters"
          : (family.real_parameters == 1 ? "continuum: 1 real parameter" : "discrete family");
  result.applicable = !base.exploratory;
  if (std::find(degraded.begin(), degraded.end(), char{1}) != degraded.end())
    result.note = "systems discarded during the window; correlations evaluated on the survivors";
  const double capacity = std::exp2(result.bound_bits);
  result.pass = !result.applicable ||
                (result.worst.mutual_information_bits <= result.bound_bits + kConditionTol &&
                 static_cast<double>(result.family_size) > capacity);
  return result;
}

ConditionIIIResult check_condition_iii(const ScenarioSpec& spec, const InputFamily& family) {
  family.validate();
  const BuiltScenario base = build_scenario(spec, family.samples.front());

  ConditionIIIResult result;
  if (!base.retrieval) {
    result.applicable = false;
    result.retriever = "none (exploratory)";
    result.metric = "none";
    return result;
  }
  result.retriever = base.retrieval->retriever;
  result.metric = base.retrieval->compare_by_trace_distance ? "trace_distance" : "fidelity";

  const std::size_t ns = family.samples.size();
  std::vector<double> mins(ns, 1.0), means(ns, 0.0), max_tds(ns, 0.0);

  for_each_sample(ns, [&](std::size_t s) {
    BuiltScenario built;
    const Trajectory traj = run_sample(spec, family.samples[s], &built);
    const Checkpoint& done = traj.final();
    double min_f = 1.0, mean_f = 0.0, max_td = 0.0;
    for (const Branch& b : done.branches) {
      const DensityOp reduced = partial_trace(b.state, built.retrieval->labels);
      if (built.retrieval->compare_by_trace_distance) {
        max_td = std::max(max_td, trace_distance(reduced, built.retrieval->target));
      } else {
        const double f = fidelity(built.retrieval->target, reduced);
        min_f = std::min(min_f, f);
        mean_f += b.probability * f;
      }
    }
    mins[s] = min_f;
    means[s] = mean_f;
    max_tds[s] = max_td;
  });

  if (base.retrieval->compare_by_trace_distance) {
    result.max_trace_distance = *std::max_element(max_tds.begin(), max_tds.end());
    result.min_fidelity = 0.0;
    result.mean_fidelity = 0.0;
    result.pass = result.max_trace_distance <= kConditionTol;
  } else {
    result.min_fidelity = *std::min_element(mins.begin(), mins.end());
    double total = 0.0;
    for (double m : means) total += m;
    result.mean_fidelity = total / static_cast<double>(ns);
    result.pass = result.min_fidelity >= 1.0 - kConditionTol;
  }
  return result;
}

AuditReport full_audit(const ScenarioSpec& spec, const InputFamily& family) {
  family.validate();
  const BuiltScenario base = build_scenario(spec, family.samples.front());

  AuditReport report;
  report.scenario_kind = to_string(spec.kind);
  report.t1 = base.t1;
  report.t2 = base.t2;
  report.family_description = family.description;
  report.family_size = family.samples.size();
  report.condition_i = check_condition_i(spec, family);
  report.condition_ii = check_condition_ii(spec, family);
  report.condition_iii = check_condition_iii(spec, family);
  report.exploratory = base.exploratory;
  report.notes = base.notes;
  if (report.exploratory) {
    report.overall = "EXPLORATORY";
    report.pass = true;
    report.notes.insert(report.notes.begin(), "exploratory: no verdict");
  } else {
    const bool all = report.condition_i.pass && report.condition_ii.pass &&
                     report.condition_iii.pass;
    report.overall = all ? "VOLATILE" : "NOT VOLATILE";
    report.pass = all;
  }
  return report;
}

AuditReport full_audit(const ScenarioSpec& spec) {
  return full_audit(spec, default_family(spec.kind));
}

double record_uniformity_max_dev(const ScenarioSpec& spec, const InputFamily& family) {
  family.validate();
  const BuiltScenario base = build_scenario(spec, family.samples.front());
  if (base.record.empty()) throw StateError("scenario produces no classical record");

  const std::size_t ns = family.samples.size();
  std::vector<double> devs(ns, 0.0);
  for_each_sample(ns, [&](std::size_t s) {
    BuiltScenario built;
    const Trajectory traj = run_sample(spec, family.samples[s], &built);
    const std::map<int, double> dist = record_distribution(traj.at(built.t1), built.record);
    const double uniform = 1.0 / static_cast<double>(built.record_cardinality);
    double dev = 0.0;
    double seen = 0.0;
    for (const auto& [outcome, prob] : dist) {
      dev = std::max(dev, std::abs(prob - uniform));
      seen += 1.0;
    }
    if (seen < static_cast<double>(built.record_cardinality)) dev = std::max(dev, uniform);
    devs[s] = dev;
  });
  return *std::max_element(devs.begin(), devs.end());
}

}  // namespace vqi
