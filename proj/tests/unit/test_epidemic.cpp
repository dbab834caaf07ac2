#include <sstream>

#include "doctest.h"
#include "sdct/epidemic.hpp"
#include "unit/worlds.hpp"

using namespace sdct;
using sdct::testing::make_graph;
using sdct::testing::path_graph;
using sdct::testing::star_graph;

TEST_SUITE("epidemic") {
  TEST_CASE("parameter validation") {
    EpidemicParams p;
    CHECK_NOTHROW(p.validate());
    p.p_i = 1.5;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = {};
    p.T_P = 9;  // T_P must stay below T_E + T_H
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = {};
    p.T_E = -1;
    CHECK_THROWS_AS(p.validate(), ParameterError);
  }

  TEST_CASE("p_i = 0 only advances the clock") {
    const auto g = star_graph(4);
    EpidemicParams p;
    p.p_i = 0;
    Rng rng(1);
    auto s = seed_epidemic(0, p, rng);
    for (int d = 0; d < 30; ++d) {
      const auto before = s;
      step(s, g, p, rng);
      CHECK(s.day == before.day + 1);
      CHECK(s.infected == before.infected);
    }
  }

  TEST_CASE("p_i = 1 on a star exposes every leaf on day T_E") {
    const auto g = star_graph(6);
    EpidemicParams p;
    p.p_i = 1;
    p.T_E = 1;
    Rng rng(2);
    auto s = seed_epidemic(0, p, rng);
    step(s, g, p, rng);  // day 0: source still exposed
    CHECK(s.infected.size() == 1);
    step(s, g, p, rng);  // day 1
    CHECK(s.infected.size() == 7);
    for (NodeId v = 1; v <= 6; ++v) {
      CHECK(s.timeline(v).exposure_day == 1);
      CHECK(s.timeline(v).infector == 0);
    }
  }

  TEST_CASE("per-day transmission frequency matches p_i") {
    const auto g = path_graph(2);
    EpidemicParams p;
    p.p_i = 0.3;
    Rng rng(3);
    constexpr int kTrials = 100000;
    int hits = 0;
    for (int i = 0; i < kTrials; ++i) {
      auto s = seed_epidemic(0, p, rng);
      s.day = p.T_E;  // first infectious day
      step(s, g, p, rng);
      hits += s.is_infected(1);
    }
    CHECK(static_cast<double>(hits) / kTrials == doctest::Approx(0.3).epsilon(0.005 / 0.3));
  }

  TEST_CASE("forced hospitalization of the source") {
    const auto g = path_graph(5);
    EpidemicParams p;
    p.p_a = 0;
    p.p_h = 1;
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
      Rng rng(seed);
      const auto o = run_until_first_hospitalization(g, 2, p, rng);
      REQUIRE(o);
      CHECK(o->h == 2);
      CHECK(o->t_h == p.T_E + p.T_H);
      CHECK(transmission_path(o->state, o->h) == std::vector<NodeId>{2});
    }
  }

  TEST_CASE("extinction gives no outbreak") {
    const auto g = path_graph(3);
    EpidemicParams p;
    p.p_i = 0;
    p.p_a = 1;
    Rng rng(4);
    CHECK_FALSE(run_until_first_hospitalization(g, 0, p, rng).has_value());
  }

  TEST_CASE("transmission path follows infectors") {
    EpidemicParams p;
    EpidemicState s;
    s.timelines.resize(3);
    s.source = 0;
    expose(s, 0, kNoNode, 0, Course::kRecovering, p);
    expose(s, 1, 0, 3, Course::kAsymptomatic, p);
    expose(s, 2, 1, 6, Course::kHospitalized, p);
    CHECK(transmission_path(s, 2) == std::vector<NodeId>{0, 1, 2});
    CHECK(transmission_path(s, 0) == std::vector<NodeId>{0});
    EpidemicState other;
    other.timelines.resize(3);
    CHECK_THROWS_AS(transmission_path(other, 1), LookupError);
  }

  TEST_CASE("timeline arithmetic") {
    EpidemicParams p;
    EpidemicState s;
    s.timelines.resize(3);
    expose(s, 0, kNoNode, 4, Course::kHospitalized, p);
    expose(s, 1, 0, 7, Course::kRecovering, p);
    expose(s, 2, 0, 7, Course::kAsymptomatic, p);
    CHECK(s.timeline(0).onset_day == 4 + p.T_E + p.T_P);
    CHECK(s.timeline(0).hospitalization_day == 4 + p.T_E + p.T_H);
    CHECK(s.timeline(0).infectious_until == 4 + p.T_E + p.T_H);
    CHECK(s.timeline(1).infectious_until == 7 + p.T_E + p.T_I);
    CHECK(s.timeline(2).onset_day == kNever);
    CHECK(s.compartment(1, 7, p) == Compartment::kExposed);
    CHECK(s.compartment(1, 7 + p.T_E, p) == Compartment::kPresymptomatic);
    CHECK(s.compartment(1, 7 + p.T_E + p.T_P, p) == Compartment::kSymptomatic);
    CHECK(s.compartment(1, 7 + p.T_E + p.T_I, p) == Compartment::kRecovered);
    CHECK(s.compartment(2, 7 + p.T_E, p) == Compartment::kAsymptomatic);
    CHECK(s.compartment(0, 4 + p.T_E + p.T_H, p) == Compartment::kHospitalized);
    CHECK(s.compartment(1, 0, p) == Compartment::kSusceptible);
  }

  TEST_CASE("no-recovery variant") {
    const auto p = EpidemicParams{}.no_recovery_variant();
    EpidemicState s;
    s.timelines.resize(2);
    expose(s, 0, kNoNode, 0, Course::kRecovering, p);
    expose(s, 1, 0, 0, Course::kAsymptomatic, p);
    CHECK(s.timeline(0).onset_day == p.T_E);
    CHECK(s.compartment(0, 1000, p) == Compartment::kSymptomatic);
    CHECK(s.compartment(1, 1000, p) == Compartment::kAsymptomatic);
    CHECK(s.timeline(0).infectious_until == kNever);
  }

  TEST_CASE("infectors are neighbors and infectious on the exposure day") {
    Rng rng(5);
    for (int round = 0; round < 30; ++round) {
      const auto g = generate_hnm(NetworkParams{99, 2, 3}, rng());
      EpidemicParams p;
      p.p_i = 0.2;
      const auto o = run_until_first_hospitalization(g, uniform_index(rng, 99), p, rng);
      if (!o) continue;
      const auto& s = o->state;
      std::size_t roots = 0;
      for (NodeId v : s.infected) {
        const auto& tl = s.timeline(v);
        if (tl.infector == kNoNode) {
          ++roots;
          continue;
        }
        CHECK(g.has_edge(v, tl.infector));
        const auto& inf = s.timeline(tl.infector);
        CHECK(tl.exposure_day >= inf.exposure_day + p.T_E);
        CHECK(tl.exposure_day < inf.infectious_until);
      }
      CHECK(roots == 1);
      // Nobody is hospitalized before t_h.
      for (NodeId v : s.infected) CHECK(s.timeline(v).hospitalization_day >= o->t_h);
    }
  }

  TEST_CASE("identical seeds give identical states") {
    const auto g = generate_hnm(NetworkParams{99, 2, 3}, 8);
    EpidemicParams p;
    p.p_i = 0.3;
    Rng a(77), b(77);
    const auto x = run_until_first_hospitalization(g, 5, p, a);
    const auto y = run_until_first_hospitalization(g, 5, p, b);
    REQUIRE(x.has_value() == y.has_value());
    if (x) {
      CHECK(x->state == y->state);
      CHECK(x->h == y->h);
      std::ostringstream cx, cy;
      write_timelines_csv(cx, x->state);
      write_timelines_csv(cy, y->state);
      CHECK(cx.str() == cy.str());
      CHECK(cx.str().rfind("node,exposure_day,course,infector", 0) == 0);
    }
  }

  TEST_CASE("path length equals tree distance on RB trees") {
    const auto p = EpidemicParams{}.no_recovery_variant();
    Rng rng(9);
    for (int i = 0; i < 300; ++i) {
      RBTree t(3, 2);
      const auto o = run_until_first_hospitalization(t, RBTree::kRoot, p, rng);
      REQUIRE(o);
      const auto path = transmission_path(o->state, o->h);
      CHECK(path.size() - 1 == t.depth(o->h));
      for (std::size_t i = 1; i < path.size(); ++i) CHECK(t.parent(path[i]) == path[i - 1]);
    }
  }

  TEST_CASE("asymptomatic share on the path approaches the conditional probability") {
    const auto p = EpidemicParams{}.no_recovery_variant();
    const double expected = p.p_a / (p.p_a + (1 - p.p_a) * (1 - p.p_h));
    Rng rng(10);
    std::size_t nodes = 0, asym = 0;
    while (nodes < 100000) {
      RBTree t(3, 2);
      const auto o = run_until_first_hospitalization(t, RBTree::kRoot, p, rng);
      REQUIRE(o);
      const auto path = transmission_path(o->state, o->h);
      for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        const auto& tl = o->state.timeline(path[i]);
        CHECK(tl.course != Course::kHospitalized);
        ++nodes;
        asym += tl.course == Course::kAsymptomatic;
      }
    }
    CHECK(static_cast<double>(asym) / static_cast<double>(nodes) ==
          doctest::Approx(expected).epsilon(0.01 / expected));
  }

  TEST_CASE("same-day competing infectors are picked uniformly") {
    // Two infectious nodes share one susceptible neighbor; p_i = 1.
    const auto g = make_graph(3, {{0, 2}, {1, 2}});
    EpidemicParams p;
    p.p_i = 1;
    Rng rng(12);
    int from0 = 0;
    constexpr int kTrials = 20000;
    for (int i = 0; i < kTrials; ++i) {
      EpidemicState s;
      s.timelines.resize(3);
      s.source = 0;
      expose(s, 0, kNoNode, 0, Course::kAsymptomatic, p);
      expose(s, 1, 0, 0, Course::kAsymptomatic, p);
      s.day = p.T_E;
      step(s, g, p, rng);
      REQUIRE(s.is_infected(2));
      from0 += s.timeline(2).infector == 0;
    }
    CHECK(static_cast<double>(from0) / kTrials == doctest::Approx(0.5).epsilon(0.03));
  }
}
