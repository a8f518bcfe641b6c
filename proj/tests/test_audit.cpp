#include <cmath>

#include "doctest.h"
#include "oracle.hpp"
#include "vqi/audit.hpp"

using namespace vqi;

namespace {

ScenarioSpec spec_of(ScenarioKind kind) {
  ScenarioSpec spec;
  spec.kind = kind;
  return spec;
}

}  // namespace

TEST_CASE("input families cover their ranges") {
  const InputFamily grid = family_grid(5, 8);
  CHECK(grid.samples.size() == 40);
  CHECK(grid.real_parameters == 2);
  double min_theta = 10.0, max_theta = -1.0, max_phi = -1.0;
  for (const SampleInput& s : grid.samples) {
    min_theta = std::min(min_theta, s.psi->theta);
    max_theta = std::max(max_theta, s.psi->theta);
    max_phi = std::max(max_phi, s.psi->phi);
  }
  CHECK(min_theta == doctest::Approx(0.0));
  CHECK(max_theta == doctest::Approx(M_PI));   // theta endpoint included
  CHECK(max_phi < 2.0 * M_PI);                 // phi endpoint excluded

  const InputFamily ps = family_p_grid(11);
  CHECK(ps.samples.size() == 11);
  CHECK(ps.samples.front().p.value() == doctest::Approx(0.0));
  CHECK(ps.samples.back().p.value() == doctest::Approx(1.0));

  const InputFamily rnd = family_random(32, 42);
  CHECK(rnd.samples.size() == 32);
  const InputFamily rnd2 = family_random(32, 42);
  for (std::size_t i = 0; i < rnd.samples.size(); ++i) {
    CHECK(rnd.samples[i].psi->theta == rnd2.samples[i].psi->theta);
    CHECK(rnd.samples[i].psi->phi == rnd2.samples[i].psi->phi);
    rnd.samples[i].psi->validate();
  }

  CHECK_THROWS_AS(family_p_grid(1), RangeError);
  CHECK_THROWS_AS(family_random(1, 3), RangeError);

  const InputFamily both = family_union(family_grid(2, 2), family_random(4, 9));
  CHECK(both.samples.size() == 8);
}

TEST_CASE("condition (i) passes exactly for the standard teleportation") {
  const ConditionIResult r =
      check_condition_i(spec_of(ScenarioKind::std_teleport), family_grid(3, 4));
  REQUIRE(r.groupings.size() == 2);
  for (const GroupingResult& g : r.groupings) {
    CHECK(g.evaluated);
    CHECK(g.pass);
    // analytically zero, not merely under the tolerance
    CHECK(g.max_pairwise_distance <= 1e-12);
  }
  CHECK(r.pass);
}

TEST_CASE("condition (i) probe times must stay inside the window") {
  CHECK_THROWS_AS(
      check_condition_i(spec_of(ScenarioKind::std_teleport), family_grid(2, 2), {}, {Rational{2}}),
      RangeError);
}

TEST_CASE("condition (i) exposes the classical source marginal") {
  const InputFamily ps = family_p_grid(11);
  const ConditionIResult r =
      check_condition_i(spec_of(ScenarioKind::classical_teleport), ps, {{"src"}});
  REQUIRE(r.groupings.size() == 1);
  CHECK_FALSE(r.groupings[0].pass);
  // max |p - p'| over the grid endpoints 0 and 1
  CHECK(r.groupings[0].max_pairwise_distance == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(r.pass);
}

TEST_CASE("condition (i) becomes vacuous once the source is discarded") {
  ScenarioSpec spec = spec_of(ScenarioKind::classical_teleport);
  spec.variants.discard_source = true;
  const ConditionIResult r = check_condition_i(spec, family_p_grid(5));
  for (const GroupingResult& g : r.groupings) {
    CHECK(g.pass);
    if (!g.evaluated) CHECK(!g.note.empty());
  }
  CHECK(r.pass);
}

TEST_CASE("condition (ii) reports the paper's window numbers") {
  const ConditionIIResult r =
      check_condition_ii(spec_of(ScenarioKind::std_teleport), family_grid(3, 4));
  CHECK(r.worst.mutual_information_bits == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.worst.nearest_product_relent_bits == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.worst.negativity <= 1e-10);
  CHECK(r.worst.ppt);
  CHECK(r.worst.discord_bits <= 1e-9);
  CHECK(r.worst.classical_correlation_bits == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(r.bound_bits == doctest::Approx(1.0));
  CHECK(r.applicable);
  CHECK(r.pass);
}

TEST_CASE("condition (ii) profiles the entangled exploratory state without a verdict") {
  const ConditionIIResult r =
      check_condition_ii(spec_of(ScenarioKind::psi_pair_dist), family_grid(3, 4));
  CHECK(r.worst.negativity == doctest::Approx(0.5).epsilon(1e-9));
  CHECK_FALSE(r.worst.ppt);
  CHECK(r.worst.mutual_information_bits == doctest::Approx(2.0).epsilon(1e-9));
  CHECK_FALSE(r.applicable);
  CHECK(r.pass);  // no verdict means no failure
}

TEST_CASE("condition (iii) verdicts: teleport passes, misrouting fails") {
  const ConditionIIIResult good =
      check_condition_iii(spec_of(ScenarioKind::std_teleport), family_grid(3, 4));
  CHECK(good.metric == "fidelity");
  CHECK(good.min_fidelity >= 1.0 - 1e-10);
  CHECK(good.pass);

  const ConditionIIIResult bad =
      check_condition_iii(spec_of(ScenarioKind::misrouted), family_grid(3, 4));
  CHECK_FALSE(bad.pass);
  CHECK(bad.mean_fidelity == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("full audit verdicts per scenario kind") {
  const AuditReport std_report = full_audit(spec_of(ScenarioKind::std_teleport), family_grid(3, 4));
  CHECK(std_report.overall == "VOLATILE");
  CHECK(std_report.pass);

  const AuditReport bad = full_audit(spec_of(ScenarioKind::misrouted), family_grid(3, 4));
  CHECK(bad.overall == "NOT VOLATILE");
  CHECK_FALSE(bad.pass);
  CHECK_FALSE(bad.condition_iii.pass);

  ScenarioSpec classical = spec_of(ScenarioKind::classical_teleport);
  classical.variants.discard_source = true;
  const AuditReport cls = full_audit(classical, family_p_grid(11));
  CHECK(cls.condition_i.pass);
  CHECK(cls.condition_iii.pass);
  CHECK(cls.overall == "VOLATILE");

  const AuditReport expl = full_audit(spec_of(ScenarioKind::psi_pair_dist), family_grid(3, 4));
  CHECK(expl.overall == "EXPLORATORY");
  CHECK(expl.pass);
  bool has_note = false;
  for (const std::string& n : expl.notes) has_note = has_note || n == "exploratory: no verdict";
  CHECK(has_note);
}

TEST_CASE("audits are deterministic") {
  const ScenarioSpec spec = spec_of(ScenarioKind::std_teleport);
  const InputFamily family = family_union(family_grid(2, 3), family_random(6, 42));
  const AuditReport a = full_audit(spec, family);
  const AuditReport b = full_audit(spec, family);
  for (std::size_t g = 0; g < a.condition_i.groupings.size(); ++g)
    CHECK(a.condition_i.groupings[g].max_pairwise_distance ==
          b.condition_i.groupings[g].max_pairwise_distance);
  CHECK(a.condition_ii.worst.mutual_information_bits ==
        b.condition_ii.worst.mutual_information_bits);
  CHECK(a.condition_iii.min_fidelity == b.condition_iii.min_fidelity);
}

TEST_CASE("the measurement record is uniform for every input") {
  CHECK(record_uniformity_max_dev(spec_of(ScenarioKind::std_teleport), family_grid(3, 4)) <=
        1e-12);
  CHECK(record_uniformity_max_dev(spec_of(ScenarioKind::classical_teleport), family_p_grid(5)) <=
        1e-12);
}

TEST_CASE("default families per scenario kind") {
  CHECK(default_family(ScenarioKind::std_teleport).samples.size() == 72);
  CHECK(default_family(ScenarioKind::classical_teleport).samples.size() == 11);
  CHECK(default_family(ScenarioKind::multiparty_classical).real_parameters == 1);
}
