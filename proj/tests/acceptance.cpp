// Acceptance suite: runs the volatility checks end to end at fixed
// tolerances and prints one PASS/FAIL line per criterion. Exit code equals
// the number of failed criteria.
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "oracle.hpp"
#include "test_support.hpp"
#include "vqi/audit.hpp"
#include "vqi/measures.hpp"

using namespace vqi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

ScenarioSpec spec_of(ScenarioKind kind) {
  ScenarioSpec spec;
  spec.kind = kind;
  return spec;
}

InputFamily acceptance_family() { return family_union(family_grid(5, 8), family_random(32, 42)); }

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.3e", v);
  return buf;
}

Outcome criterion_teleport_fidelity() {
  const InputFamily family = acceptance_family();
  double min_fid = 1.0;
  for (const SampleInput& sample : family.samples) {
    const BuiltScenario built = std_teleport(spec_of(ScenarioKind::std_teleport), sample);
    const Trajectory traj = execute(built.timeline, built.parties);
    const DensityOp target = pure_qubit(*sample.psi, "B");
    for (const Branch& b : traj.final().branches)
      min_fid = std::min(min_fid, fidelity(target, partial_trace(b.state, {"B"})));
  }
  return {min_fid >= 1.0 - 1e-10,
          "min branch fidelity " + fmt(min_fid) + " over " + std::to_string(family.samples.size()) +
              " inputs"};
}

Outcome criterion_condition_i() {
  const ConditionIResult r =
      check_condition_i(spec_of(ScenarioKind::std_teleport), acceptance_family());
  double worst = 0.0;
  for (const GroupingResult& g : r.groupings) worst = std::max(worst, g.max_pairwise_distance);
  return {worst <= 1e-12, "max pairwise window-marginal distance " + fmt(worst) +
                              " for groupings {a,A} and {B}"};
}

Outcome criterion_condition_ii() {
  const ConditionIIResult r =
      check_condition_ii(spec_of(ScenarioKind::std_teleport), acceptance_family());
  const bool mi_ok = std::abs(r.worst.mutual_information_bits - 1.0) <= 1e-9;
  const bool neg_ok = r.worst.negativity <= 1e-10 && r.worst.ppt;
  const bool discord_ok = r.worst.discord_bits <= 1e-9;
  std::ostringstream detail;
  detail << "MI " << r.worst.mutual_information_bits << " bits, negativity "
         << fmt(r.worst.negativity) << " (PPT " << (r.worst.ppt ? "yes" : "no")
         << "), Bell-certificate discord " << fmt(r.worst.discord_bits) << " bits";
  return {mi_ok && neg_ok && discord_ok, detail.str()};
}

Outcome criterion_nearest_product_sweep() {
  oracle::Rng rng(97);
  double worst_gap = 0.0;  // most a candidate ever beat the MI value by
  const auto sweep = [&](const DensityOp& rho, const Bipartition& cut) {
    const double mi = mutual_information(rho, cut);
    const DensityOp mx = partial_trace(rho, cut.first);
    const DensityOp my = partial_trace(rho, cut.second);
    for (int trial = 0; trial < 200; ++trial) {
      const double eps = rng.uniform(0.0, 0.6);
      ComplexMatrix cx = Complex{1.0 - eps} * mx.matrix() +
                         Complex{eps} * support::to_matrix(rng.random_density(mx.dim()));
      ComplexMatrix cy = Complex{1.0 - eps} * my.matrix() +
                         Complex{eps} * support::to_matrix(rng.random_density(my.dim()));
      const DensityOp candidate =
          reorder(kron(DensityOp(cx, mx.dims()), DensityOp(cy, my.dims())), rho.dims().labels());
      const RelEntropy re = relative_entropy(rho, candidate);
      if (!re.infinite) worst_gap = std::max(worst_gap, mi - re.bits);
    }
  };

  const DensityOp window(support::to_matrix(oracle::window_state(1.0471975511965976, 1.2566370614359172)),
                         CompositeDims::qubits({"a", "A", "B"}));
  sweep(window, {{"a", "A"}, {"B"}});
  const DensityOp charge = classical_correlated(2, {"alpha", "beta"});
  sweep(charge, {{"alpha"}, {"beta"}});
  const double charge_bits = nearest_product_relent(charge, {{"alpha"}, {"beta"}}).bits;

  const bool ok = worst_gap <= 1e-6 && std::abs(charge_bits - 1.0) <= 1e-9;
  return {ok, "max sweep advantage " + fmt(worst_gap) + " over 2x200 candidates; charge-state value " +
                  std::to_string(charge_bits) + " bits"};
}

Outcome criterion_outcome_uniformity() {
  const double dev =
      record_uniformity_max_dev(spec_of(ScenarioKind::std_teleport), acceptance_family());

  const BuiltScenario built =
      std_teleport(spec_of(ScenarioKind::std_teleport), acceptance_family().samples[7]);
  const Trajectory sampled =
      execute(built.timeline, built.parties, ExecutionMode::sampled, {42, 4096}, built.relativity);
  bool sampled_ok = true;
  double worst_freq_dev = 0.0;
  for (const auto& [outcome, freq] : record_distribution(sampled.at(built.t1), "m")) {
    sampled_ok = sampled_ok && oracle::within_4_sigma(freq, 4096, 0.25);
    worst_freq_dev = std::max(worst_freq_dev, std::abs(freq - 0.25));
  }
  return {dev <= 1e-12 && sampled_ok,
          "ensemble max deviation " + fmt(dev) + "; sampled (4096 shots, seed 42) max deviation " +
              fmt(worst_freq_dev) + " vs 4-sigma band " + fmt(4.0 * std::sqrt(0.25 * 0.75 / 4096.0))};
}

Outcome criterion_classical_teleport() {
  double worst_final = 0.0, worst_window = 0.0;
  for (const SampleInput& sample : family_p_grid(11).samples) {
    const BuiltScenario built =
        classical_teleport(spec_of(ScenarioKind::classical_teleport), sample);
    const Trajectory traj = execute(built.timeline, built.parties);
    const double p = *sample.p;

    ComplexMatrix target(2);
    target(0, 0) = p;
    target(1, 1) = 1.0 - p;
    for (const Branch& b : traj.final().branches)
      worst_final =
          std::max(worst_final, partial_trace(b.state, {"beta"}).matrix().max_abs_diff(target));

    const DensityOp window = averaged_view(traj, Rational{3, 2});
    worst_window = std::max(worst_window,
                            partial_trace(window, {"beta"})
                                .matrix()
                                .max_abs_diff(Complex{0.5} * ComplexMatrix::identity(2)));
  }

  ScenarioSpec discard = spec_of(ScenarioKind::classical_teleport);
  discard.variants.discard_source = true;
  const bool i_pass = check_condition_i(discard, family_p_grid(11)).pass;
  const bool iii_pass = check_condition_iii(discard, family_p_grid(11)).pass;

  return {worst_final <= 1e-12 && worst_window <= 1e-12 && i_pass && iii_pass,
          "final-state error " + fmt(worst_final) + ", window-marginal error " + fmt(worst_window) +
              ", discard variant conditions (i)/(iii) " + (i_pass && iii_pass ? "pass" : "fail")};
}

Outcome criterion_multiparty() {
  double min_fid = 1.0;
  for (int n : {2, 3}) {
    ScenarioSpec spec = spec_of(ScenarioKind::multiparty_teleport);
    spec.n = n;
    for (const SampleInput& sample : family_grid(5, 8).samples) {
      const BuiltScenario built = multiparty_teleport(spec, sample);
      const Trajectory traj = execute(built.timeline, built.parties);
      for (const Branch& b : traj.final().branches)
        min_fid = std::min(
            min_fid, fidelity(built.retrieval->target, partial_trace(b.state, built.retrieval->labels)));
    }
  }

  double worst_broadcast = 0.0;
  double product_distance_at_half = 0.0;
  for (int n : {2, 3}) {
    ScenarioSpec spec = spec_of(ScenarioKind::multiparty_classical);
    spec.n = n;
    for (const SampleInput& sample : family_p_grid(11).samples) {
      const BuiltScenario built = multiparty_classical(spec, sample);
      const Trajectory traj = execute(built.timeline, built.parties);
      for (const Branch& b : traj.final().branches)
        worst_broadcast =
            std::max(worst_broadcast, trace_distance(partial_trace(b.state, built.retrieval->labels),
                                                     built.retrieval->target));
      if (std::abs(*sample.p - 0.5) < 1e-12) {
        const DensityOp recv = partial_trace(traj.final().branches[0].state, built.retrieval->labels);
        DensityOp product = partial_trace(recv, {built.retrieval->labels[0]});
        for (std::size_t k = 1; k < built.retrieval->labels.size(); ++k)
          product = kron(product, partial_trace(recv, {built.retrieval->labels[k]}));
        product_distance_at_half =
            std::max(product_distance_at_half, trace_distance(recv, product));
      }
    }
  }

  const bool ok = min_fid >= 1.0 - 1e-10 && worst_broadcast <= 1e-12 &&
                  product_distance_at_half > 1e-3;
  return {ok, "min joint fidelity " + fmt(min_fid) + ", broadcast-state error " +
                  fmt(worst_broadcast) + ", distance from n-fold product at p=1/2 " +
                  fmt(product_distance_at_half)};
}

Outcome criterion_misrouting() {
  const InputFamily family = family_grid(5, 8);
  std::vector<ComplexMatrix> joints;
  double fid_sum = 0.0;
  for (const SampleInput& sample : family.samples) {
    const BuiltScenario built = misrouted(spec_of(ScenarioKind::misrouted), sample);
    const Trajectory traj = execute(built.timeline, built.parties);
    joints.push_back(classical_quantum_joint(traj.final(), "m", 4, {"c"}));
    const DensityOp target = pure_qubit(*sample.psi, "c");
    double avg = 0.0;
    for (const Branch& b : traj.final().branches)
      avg += b.probability * fidelity(target, partial_trace(b.state, {"c"}));
    fid_sum += avg;
  }
  double worst_pairwise = 0.0;
  for (std::size_t i = 1; i < joints.size(); ++i)
    worst_pairwise = std::max(worst_pairwise, trace_distance(joints[0], joints[i]));
  const double mean_fid = fid_sum / static_cast<double>(family.samples.size());

  return {worst_pairwise <= 1e-12 && std::abs(mean_fid - 0.5) <= 0.01,
          "joint (record, Charu) input-dependence " + fmt(worst_pairwise) +
              ", mean retrieval fidelity " + std::to_string(mean_fid)};
}

Outcome criterion_relativity() {
  ScenarioSpec spec = spec_of(ScenarioKind::std_teleport);
  spec.relativity.enabled = true;
  spec.relativity.speed = 1.0;
  spec.relativity.positions = {{"Alice", 0.0}, {"Bob", 10.0}};

  // window of length 1 against distance 10: must be rejected
  const BuiltScenario tight = std_teleport(spec);
  const bool rejected = !validate(tight.timeline, tight.parties, tight.relativity).empty();

  // window of exactly distance/speed: accepted
  spec.times.t2 = Rational{11};
  const BuiltScenario roomy = std_teleport(spec);
  const bool accepted = validate(roomy.timeline, roomy.parties, roomy.relativity).empty();

  return {rejected && accepted,
          std::string("t2-t1 < d rejected: ") + (rejected ? "yes" : "no") +
              "; t2-t1 = d accepted: " + (accepted ? "yes" : "no")};
}

Outcome criterion_negativity_negentropy() {
  const double bell_neg = negativity(bell_state({0}), {{"A"}, {"B"}}).value;
  const double pure_negent = negentropy(pure_qubit({1.3, 0.8}));
  ComplexMatrix half(2);
  half(0, 0) = half(1, 1) = 0.5;
  const double mixed_negent = negentropy(DensityOp(half, CompositeDims::single("q", 2)));

  const bool ok = std::abs(bell_neg - 0.5) <= 1e-10 && std::abs(pure_negent - 1.0) <= 1e-9 &&
                  std::abs(mixed_negent) <= 1e-9;
  return {ok, "negativity(Bell) " + std::to_string(bell_neg) + ", negentropy(pure) " +
                  std::to_string(pure_negent) + ", negentropy(I/2) " + fmt(mixed_negent)};
}

Outcome criterion_psi_pair() {
  double worst_marginal = 0.0, worst_negativity = 0.0;
  for (const SampleInput& sample : family_grid(5, 8).samples) {
    const DensityOp pair = psi_pair(*sample.psi);
    for (const Label& l : {Label{"A"}, Label{"B"}})
      worst_marginal = std::max(worst_marginal,
                                partial_trace(pair, {l}).matrix().max_abs_diff(
                                    Complex{0.5} * ComplexMatrix::identity(2)));
    worst_negativity =
        std::max(worst_negativity, std::abs(negativity(pair, {{"A"}, {"B"}}).value - 0.5));
  }

  double min_theta_invariance = 1.0;
  for (double phi : {0.0, 1.1, 2.9, 4.4}) {
    for (double t1 : {0.0, 1.0, 2.2}) {
      for (double t2 : {0.5, 1.7, 3.1}) {
        min_theta_invariance =
            std::min(min_theta_invariance, fidelity(psi_pair({t1, phi}), psi_pair({t2, phi})));
      }
    }
  }

  const bool ok =
      worst_marginal <= 1e-10 && worst_negativity <= 1e-10 && min_theta_invariance >= 1.0 - 1e-10;
  return {ok, "marginal error " + fmt(worst_marginal) + ", negativity error " +
                  fmt(worst_negativity) + ", min fidelity across theta at fixed phi " +
                  std::to_string(min_theta_invariance)};
}

Outcome criterion_structural_causality() {
  const BuiltScenario built = std_teleport(spec_of(ScenarioKind::std_teleport));
  Timeline butchered = built.timeline;
  for (std::size_t i = 0; i < butchered.events.size(); ++i)
    if (std::holds_alternative<SendClassicalEvent>(butchered.events[i].body)) {
      butchered.events.erase(butchered.events.begin() + i);
      break;
    }
  try {
    execute(butchered, built.parties);
    return {false, "execution succeeded without the classical message"};
  } catch (const CausalityError& e) {
    return {true, "execution failed with a causality error as required"};
  }
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"teleportation resurrects every input at Bob", criterion_teleport_fidelity},
      {"window marginals are input-independent (condition i)", criterion_condition_i},
      {"window correlations: 1 bit MI, PPT, zero discord (condition ii)", criterion_condition_ii},
      {"nearest-product sweep never beats mutual information", criterion_nearest_product_sweep},
      {"Bell outcomes are uniform (ensemble exactly, sampled at 4 sigma)",
       criterion_outcome_uniformity},
      {"classical teleportation transports diag(p, 1-p)", criterion_classical_teleport},
      {"multiparty teleportation shares the input; classical case broadcasts",
       criterion_multiparty},
      {"misrouted bits resurrect nothing at Charu", criterion_misrouting},
      {"relativity bound on the window length is enforced", criterion_relativity},
      {"negativity and negentropy reference values", criterion_negativity_negentropy},
      {"distributed pair: mixed marginals, negativity 1/2, theta-invariance", criterion_psi_pair},
      {"corrections cannot precede the classical message", criterion_structural_causality},
  };

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome outcome;
    try {
      outcome = criteria[i].second();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    if (!outcome.pass) ++failures;
    std::printf("%s criterion %2zu: %s — %s\n", outcome.pass ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), outcome.detail.c_str());
  }
  if (failures == 0)
    std::printf("all %zu acceptance criteria passed\n", criteria.size());
  else
    std::printf("%d of %zu acceptance criteria FAILED\n", failures, criteria.size());
  return failures;
}
