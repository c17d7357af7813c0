// One PASS/FAIL line per acceptance criterion. Exit status is the number of
// failed criteria.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "nsbgp/engine.hpp"
#include "nsbgp/intra_as.hpp"
#include "nsbgp/oracle.hpp"
#include "nsbgp/policy.hpp"
#include "nsbgp/scenarios.hpp"
#include "nsbgp/service_models.hpp"

namespace {

using namespace nsbgp;
using Clock = std::chrono::steady_clock;

// Runtime ceilings in seconds.
constexpr double kFastLimit = 1.0;
constexpr double kSafetySuiteLimit = 300.0;
constexpr double kUnboundedLimit = 1e9;

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail = what;
    pass = pass && ok;
  }
};

int failures = 0;

void criterion(int id, const char* title, double limit, const std::function<Verdict()>& body) {
  const auto start = Clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v.pass = false;
    v.detail = std::string("exception: ") + e.what();
  }
  const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
  if (seconds >= limit) v.require(false, "took " + std::to_string(seconds) + " s");
  if (!v.pass) ++failures;
  std::printf("%s [%d] %s (%.3f s)%s%s\n", v.pass ? "PASS" : "FAIL", id, title, seconds,
              v.detail.empty() ? "" : ": ", v.detail.c_str());
  std::fflush(stdout);
}

std::vector<NodeIndex> nodes_of(const Instance& inst, std::initializer_list<const char*> names) {
  std::vector<NodeIndex> out;
  for (const char* n : names) out.push_back(inst.index(n));
  return out;
}

Verdict golden_trace() {
  Verdict v;
  const std::vector<std::string> expected = {
      "((1 d), (2 d), (3 d))",     "((1 3 d), (2 d), (3 d))",   "((1 3 d), (2 d), (3 2 d))",
      "((1 d), (2 d), (3 2 d))",   "((1 d), (2 1 d), (3 2 d))", "((1 d), (2 1 d), (3 d))",
      "((1 3 d), (2 1 d), (3 d))", "((1 3 d), (2 d), (3 d))"};
  const auto inst = scenarios::bad_gadget();
  const ExplicitSequence schedule{nodes_of(inst, {"1", "3", "1", "2", "3", "1", "2"})};
  RunOptions options;
  options.initial = scenarios::direct_route_state(inst);
  options.max_steps = 7;
  const auto steps = trace(inst, schedule, options);
  std::vector<std::string> got{render_selections(inst, *options.initial)};
  for (const auto& s : steps) got.push_back(render_selections(inst, s.state));
  v.require(got == expected, "selection sequence differs");

  options.max_steps = 0;
  const auto out = run(inst, schedule, options);
  const auto* cycle = std::get_if<Cycle>(&out);
  v.require(cycle != nullptr, "run did not report a cycle");
  if (cycle) {
    v.require(render_selections(inst, cycle->states.front()) == expected[1],
              "cycle does not start at the second state");
    v.require(cycle->states.size() == 6, "cycle length is not 6");
  }
  return v;
}

Verdict filter_first_fix() {
  Verdict v;
  const auto inst = scenarios::bad_gadget(Mode::kFilterFirst);
  const auto n1 = inst.index("1"), n3 = inst.index("3");
  std::vector<ProtocolState> finals;
  const auto rr = run(inst, RoundRobin{});
  v.require(std::holds_alternative<Converged>(rr), "round-robin did not converge");
  if (auto* c = std::get_if<Converged>(&rr)) finals.push_back(c->state);
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto out = run(inst, RandomFair{seed, 0});
    const auto* c = std::get_if<Converged>(&out);
    v.require(c != nullptr, "random schedule " + std::to_string(seed) + " did not converge");
    if (c) finals.push_back(c->state);
  }
  using testing::path_of;
  for (const auto& s : finals) {
    v.require(s.exported(inst, n3, n1) == path_of(inst, {"3", "d"}), "3 does not export (3 d) to 1");
    v.require(s.own(n3) == path_of(inst, {"3", "2", "d"}), "3 does not select (3 2 d)");
    v.require(s.own(n1) == path_of(inst, {"1", "3", "d"}), "1 does not select (1 3 d)");
  }
  const auto stable = oracle::enumerate_stable_states(inst);
  v.require(stable.size() == 1, "oracle found " + std::to_string(stable.size()) + " stable states");
  for (const auto& s : finals) {
    v.require(!stable.empty() && s == stable.front(), "converged state is not the stable state");
  }
  v.require(oracle::exhaustive_search(inst).verdict == oracle::Verdict::kSafe,
            "exhaustive search is not SAFE");
  return v;
}

Verdict fig1_matrix() {
  using namespace intra_as;
  Verdict v;
  const auto as = scenarios::fig1_gadget();
  auto row = [&](const Selection& sel) {
    return std::make_pair(check_consistent_export(as, "Peer1", sel).pass,
                          check_hot_potato(as, sel).pass);
  };
  const auto conv = egress_selection(as, SelectionMode::kConventional);
  const auto forced = egress_selection(as, SelectionMode::kConventional, scenarios::fig1_forced_r1());
  const auto ff = egress_selection(as, SelectionMode::kFilterFirst);
  v.require(row(conv) == std::make_pair(false, true), "conventional row");
  v.require(row(forced) == std::make_pair(true, false), "forced-r1 row");
  v.require(row(ff) == std::make_pair(true, true), "filter-first row");
  const Route r1{"R3-Customer2", {"Customer2", "d"}};
  const Route r2{"R4-Peer2", {"Peer2", "d"}};
  v.require(ff.at("R1-Peer1") == r1 && ff.at("R2-Peer1") == r1, "Peer1 does not get r1 at both links");
  v.require(ff.at("R2-Customer1") == r2, "Customer1 does not get r2");
  return v;
}

Verdict fig5_visibility() {
  using namespace intra_as;
  Verdict v;
  const auto single = disseminate(scenarios::fig5_as());
  v.require(single.visible.at("R5").size() == 2, "R5 visibility");
  v.require(single.visible.at("R1").size() == 1, "R1 visibility");
  v.require(single.visible.at("R2").size() == 1, "R2 visibility");
  auto config = scenarios::fig5_config();
  v.require(config.offers.size() == 4, "offer count");
  config.dissemination = RcpFull{};
  const AsInternal rcp(config);
  for (const auto& [router, routes] : disseminate(rcp).visible) {
    v.require(routes.size() == 4, "RCP visibility at " + router);
  }
  config.dissemination = ClassBest{};
  for (const auto& [router, n] : dissemination_overhead(AsInternal(config))) {
    v.require(n <= 2, "two-class overhead at " + router);
  }
  return v;
}

Verdict nsbgp_safety_suite() {
  Verdict v;
  std::size_t instances = 0, runs = 0, exhaustive = 0;
  for (std::uint64_t seed = 0; instances < 1000; ++seed) {
    const std::size_t n = 3 + seed % 6;  // 3..8 nodes
    const auto inst = scenarios::random_instance(seed, n, Mode::kNeighborSpecific);
    if (!check_nsbgp_safety(inst).pass) continue;
    ++instances;
    for (std::uint64_t s = 0; s < 10; ++s) {
      const auto out = run(inst, RandomFair{seed * 10 + s, 0});
      ++runs;
      v.require(std::holds_alternative<Converged>(out),
                "instance " + std::to_string(seed) + " schedule " + std::to_string(s) +
                    (std::holds_alternative<Cycle>(out) ? " cycled" : " hit max_steps"));
    }
    if (n <= 5 && exhaustive < 100) {
      ++exhaustive;
      v.require(oracle::exhaustive_search(inst).verdict == oracle::Verdict::kSafe,
                "exhaustive search not SAFE on instance " + std::to_string(seed));
    }
  }
  v.require(exhaustive == 100, "only " + std::to_string(exhaustive) + " exhaustive searches");
  v.detail = v.pass ? std::to_string(instances) + " instances, " + std::to_string(runs) +
                          " runs, " + std::to_string(exhaustive) + " exhaustive"
                    : v.detail;
  return v;
}

Verdict cross_validation() {
  Verdict v;
  const Mode modes[] = {Mode::kConventional, Mode::kFilterFirst, Mode::kNeighborSpecific};
  std::size_t converged = 0, witnesses = 0;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const Mode mode = modes[i % 3];
    scenarios::GeneratorConfig cfg;
    cfg.safe = (i / 3) % 2 == 0;
    const std::size_t n = 3 + (i / 6) % 3;  // 3..5 nodes
    if (!cfg.safe && mode == Mode::kNeighborSpecific && n >= 4) cfg.inject_export_violation = (i / 6) % 2;
    if (!cfg.safe && mode != Mode::kNeighborSpecific && n >= 4) cfg.inject_gadget = (i / 6) % 2;
    const auto inst = scenarios::random_instance(i, n, mode, cfg);
    const auto stable = oracle::enumerate_stable_states(inst);
    const auto search = oracle::exhaustive_search(inst);
    const std::string tag = " (instance " + std::to_string(i) + ")";
    bool engine_cycled = false;
    for (std::uint64_t s = 0; s < 5; ++s) {
      const auto out = run(inst, RandomFair{i * 5 + s, 0});
      if (const auto* c = std::get_if<Converged>(&out)) {
        ++converged;
        v.require(std::binary_search(stable.begin(), stable.end(), c->state),
                  "converged state not enumerated" + tag);
      }
      engine_cycled = engine_cycled || std::holds_alternative<Cycle>(out);
    }
    v.require(!engine_cycled || search.verdict == oracle::Verdict::kCycleFound,
              "engine cycled on a SAFE instance" + tag);
    if (search.witness) {
      ++witnesses;
      v.require(testing::witness_replays(inst, *search.witness), "witness does not replay" + tag);
    }
  }
  v.require(witnesses > 0 && converged > 0, "suite exercised no cycles or no convergence");
  if (v.pass) {
    v.detail = std::to_string(converged) + " converged runs, " + std::to_string(witnesses) +
               " cycle witnesses";
  }
  return v;
}

Verdict mode_embedding() {
  Verdict v;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto ff = scenarios::random_instance(seed, 3 + seed % 6, Mode::kFilterFirst);
    const auto ns = with_mode(ff, Mode::kNeighborSpecific);
    RunOptions options;
    options.max_steps = 200;
    const auto a = trace(ff, RandomFair{seed, 0}, options);
    const auto b = trace(ns, RandomFair{seed, 0}, options);
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) same = a[i].state == b[i].state;
    v.require(same, "traces differ on instance " + std::to_string(seed));
  }
  return v;
}

Verdict fig3_fig4() {
  Verdict v;
  auto exports = [](const Instance& inst, const Outcome& out) {
    std::vector<Path> sent;
    if (const auto* c = std::get_if<Converged>(&out)) {
      for (const char* customer : {"2", "3", "4"}) {
        sent.push_back(c->state.exported(inst, inst.index("1"), inst.index(customer)));
      }
    }
    return sent;
  };
  const auto ns = scenarios::fig4_gadget();
  const auto a = exports(ns, run(ns, RoundRobin{}));
  v.require(a.size() == 3, "neighbor-specific variant did not converge");
  v.require(std::set<Path>(a.begin(), a.end()).size() == 3 && !a.empty() && !a[0].empty(),
            "exports are not pairwise distinct");
  const auto conv = scenarios::fig3_gadget();
  const auto b = exports(conv, run(conv, RoundRobin{}));
  v.require(b.size() == 3, "conventional variant did not converge");
  v.require(std::set<Path>(b.begin(), b.end()).size() == 1 && !b.empty() && !b[0].empty(),
            "conventional exports differ");
  return v;
}

std::map<Attribute, double> random_weights(std::mt19937& gen) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::map<Attribute, double> w;
  double total = 0;
  for (auto a : {Attribute::kLatency, Attribute::kSecurity, Attribute::kCost, Attribute::kHops}) {
    total += w[a] = u(gen);
  }
  for (auto& [a, x] : w) x /= total;
  return w;
}

Verdict service_models() {
  Verdict v;
  for (std::uint64_t i = 0; i < 200; ++i) {
    const std::string tag = " (assignment " + std::to_string(i) + ")";
    scenarios::GeneratorConfig cfg;
    if (i % 2) {
      cfg.safe = false;
      cfg.inject_export_violation = true;
    }
    const auto inst = scenarios::random_instance(i, 5 + i % 4, Mode::kNeighborSpecific, cfg);
    const auto attrs = scenarios::random_attributes(i, inst);
    std::mt19937 gen(static_cast<std::uint32_t>(i));
    NodeIndex owner = inst.dest();
    for (NodeIndex u = 0; u < inst.node_count(); ++u) {
      if (u != inst.dest() && inst.node_ranking(u)->acceptable().size() >= 2) owner = u;
    }
    if (owner == inst.dest()) continue;
    const auto& acc = inst.node_ranking(owner)->acceptable();
    const std::set<Path> candidates(acc.begin(), acc.end());
    auto rank = [&](const ServiceModel& m, const PathAttributes& a) {
      return build_ranking(m, owner, owner, candidates, a).acceptable();
    };
    const auto nw = random_weights(gen), aw = random_weights(gen);
    v.require(rank(Hybrid{1.0, nw, aw}, attrs) == rank(Hybrid{1.0, nw, {}}, attrs),
              "weight 1 depends on the AS" + tag);
    v.require(rank(Hybrid{0.0, nw, aw}, attrs) == rank(Hybrid{0.0, {}, aw}, attrs),
              "weight 0 depends on the neighbor" + tag);

    std::uniform_real_distribution<double> scale(0.1, 10.0);
    const double sl = scale(gen), ss = scale(gen), sc = scale(gen);
    auto scaled = attrs;
    for (auto& [p, m] : scaled) {
      m.latency_ms *= sl;
      m.security_score *= ss;
      m.monetary_cost *= sc;
    }
    const Hybrid mixed{std::uniform_real_distribution<double>(0, 1)(gen), nw, aw};
    v.require(rank(mixed, attrs) == rank(mixed, scaled), "rescaling changed the order" + tag);

    std::map<NodeIndex, ServiceModel> assignments;
    for (NodeIndex nb : inst.neighbors(owner)) {
      switch (gen() % 3) {
        case 0: assignments[nb] = Subscription{static_cast<MenuItem>(gen() % 3)}; break;
        case 1: {
          std::vector<Path> order(acc.begin(), acc.end());
          std::shuffle(order.begin(), order.end(), gen);
          assignments[nb] = TotalControl{RankingFunction(owner, order)};
          break;
        }
        default: assignments[nb] = Hybrid{0.5, random_weights(gen), random_weights(gen)};
      }
    }
    const auto out = apply_service_models(inst, owner, assignments, attrs);
    v.require(check_nsbgp_safety(out).pass, "output fails nsbgp safety" + tag);
  }
  return v;
}

}  // namespace

int main() {
  criterion(1, "Bad Gadget golden trace", kFastLimit, golden_trace);
  criterion(2, "Bad Gadget under filter-first", kFastLimit, filter_first_fix);
  criterion(3, "Fig. 1 compliance matrix", kFastLimit, fig1_matrix);
  criterion(4, "Fig. 5 visibility", kFastLimit, fig5_visibility);
  criterion(5, "NS-BGP safety property suite", kSafetySuiteLimit, nsbgp_safety_suite);
  criterion(6, "oracle/engine cross-validation", kUnboundedLimit, cross_validation);
  criterion(7, "mode embedding", kUnboundedLimit, mode_embedding);
  criterion(8, "Fig. 3 / Fig. 4 contrast", kFastLimit, fig3_fig4);
  criterion(9, "service-model properties", kUnboundedLimit, service_models);
  std::printf("%d of 9 criteria failed\n", failures);
  return failures;
}
