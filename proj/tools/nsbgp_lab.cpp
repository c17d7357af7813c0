// nsbgp-lab: command-line front end for the routing lab.
//
// Exit codes: 0 success / converged / SAFE, 1 input error, 2 cycle,
// 3 inconclusive or budget exceeded, 4 a policy or compliance check failed.

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "nsbgp/engine.hpp"
#include "nsbgp/intra_as.hpp"
#include "nsbgp/io.hpp"
#include "nsbgp/oracle.hpp"
#include "nsbgp/policy.hpp"
#include "nsbgp/scenarios.hpp"
#include "nsbgp/service_models.hpp"

namespace {

using namespace nsbgp;
using io::Json;

enum Exit : int {
  kOk = 0,
  kInputError = 1,
  kCycle = 2,
  kInconclusive = 3,
  kCheckFailed = 4,
};

struct Global {
  bool json = false;
};

Json report_header(const std::string& command) {
  Json doc;
  doc["schema"] = io::kReportSchema;
  doc["command"] = command;
  return doc;
}

void emit(const Json& doc) { std::cout << doc.dump(2) << "\n"; }

Schedule parse_schedule(const Instance& inst, const std::string& text,
                        std::size_t window) {
  if (text == "round-robin") return RoundRobin{};
  if (text.rfind("random:", 0) == 0) {
    const auto seed_text = text.substr(7);
    try {
      std::size_t used = 0;
      const auto seed = std::stoull(seed_text, &used);
      if (used != seed_text.size()) throw std::invalid_argument(seed_text);
      return RandomFair{seed, window};
    } catch (const std::exception&) {
      throw ModelError("schedule: bad seed '" + seed_text + "'");
    }
  }
  ExplicitSequence seq;
  std::stringstream in(text);
  std::string name;
  while (std::getline(in, name, ',')) {
    auto node = inst.find(name);
    if (!node) throw ModelError("schedule: unknown node '" + name + "'");
    seq.sequence.push_back(*node);
  }
  if (seq.sequence.empty()) throw ModelError("schedule: empty");
  return seq;
}

std::string render_nodes(const Instance& inst, const std::vector<NodeIndex>& nodes) {
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (i) out += ",";
    out += inst.name(nodes[i]);
  }
  return out;
}

/// Prints violations; returns false if the instance is unusable.
bool report_validation(const Instance& inst) {
  const auto report = validate(inst);
  for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
  for (const auto& v : report.violations) {
    std::cerr << "error: " << v.what << ": " << v.witness << "\n";
  }
  return report.ok();
}

std::optional<std::uint64_t> env_budget() {
  const char* text = std::getenv("NSBGP_LAB_BUDGET");
  if (!text || !*text) return std::nullopt;
  try {
    return std::stoull(text);
  } catch (const std::exception&) {
    throw ModelError("NSBGP_LAB_BUDGET is not a number: " + std::string(text));
  }
}

// ---------------------------------------------------------------- run

struct RunArgs {
  std::string file;
  std::string mode;
  std::string schedule = "round-robin";
  std::size_t max_steps = 0;
  std::size_t window = 0;
  std::string start = "initial";
  std::string trace_out;
};

int cmd_run(const Global& g, const RunArgs& a) {
  Instance inst = io::load_instance(a.file);
  if (!a.mode.empty()) inst = with_mode(inst, parse_mode(a.mode));
  if (!report_validation(inst)) return kInputError;

  const Schedule schedule = parse_schedule(inst, a.schedule, a.window);
  RunOptions options;
  options.max_steps = a.max_steps ? a.max_steps : 1000 * inst.node_count();
  if (a.start == "direct") {
    options.initial = scenarios::direct_route_state(inst);
  } else if (a.start != "initial") {
    throw ModelError("start: expected initial or direct");
  }

  if (!a.trace_out.empty()) {
    std::ofstream out(a.trace_out);
    if (!out) throw ModelError(a.trace_out + ": cannot write trace");
    for (const auto& step : trace(inst, schedule, options)) {
      out << render_trace_record(inst, step) << "\n";
    }
  }

  const Outcome outcome = run(inst, schedule, options);
  Json doc = report_header("run");
  doc["instance"] = a.file;
  doc["mode"] = std::string(to_string(inst.mode()));
  doc["schedule"] = a.schedule;
  doc["start"] = a.start;
  doc["max_steps"] = options.max_steps;

  int code = kOk;
  std::ostringstream text;
  text << "mode: " << to_string(inst.mode()) << "  schedule: " << a.schedule
       << "  start: " << a.start << "  max-steps: " << options.max_steps << "\n";
  if (const auto* c = std::get_if<Converged>(&outcome)) {
    doc["outcome"] = "CONVERGED";
    doc["steps"] = c->steps;
    doc["state"] = render_selections(inst, c->state);
    text << "CONVERGED after " << c->steps << " steps\n"
         << "  " << render_selections(inst, c->state) << "\n";
  } else if (const auto* cy = std::get_if<Cycle>(&outcome)) {
    code = kCycle;
    doc["outcome"] = "CYCLE";
    doc["entry_step"] = cy->entry_step;
    Json states = Json::array();
    for (const auto& s : cy->states) states.push_back(render_selections(inst, s));
    doc["states"] = std::move(states);
    doc["activations"] = render_nodes(inst, cy->activations);
    text << "CYCLE of " << cy->states.size() << " states entered after step "
         << cy->entry_step << "\n";
    for (std::size_t i = 0; i < cy->states.size(); ++i) {
      text << "  " << render_selections(inst, cy->states[i]);
      if (i < cy->activations.size()) {
        text << "  --" << inst.name(cy->activations[i]) << "-->";
      }
      text << "\n";
    }
  } else {
    code = kInconclusive;
    const auto& in = std::get<Inconclusive>(outcome);
    doc["outcome"] = "INCONCLUSIVE";
    doc["steps"] = in.steps;
    text << "INCONCLUSIVE after " << in.steps << " steps\n";
  }
  if (g.json) {
    emit(doc);
  } else {
    std::cout << text.str();
  }
  return code;
}

// ---------------------------------------------------------------- check

Json witness_json(const Instance& inst, const Witness& w) {
  Json nodes = Json::array();
  for (NodeIndex n : w.nodes) nodes.push_back(inst.name(n));
  Json paths = Json::array();
  for (const auto& p : w.paths) paths.push_back(inst.render(p));
  return {{"nodes", nodes}, {"paths", paths}, {"explanation", w.explanation}};
}

Json condition_json(const Instance& inst, const ConditionReport& r) {
  Json out;
  out["condition"] = std::string(to_string(r.condition));
  out["pass"] = r.pass;
  Json witnesses = Json::array();
  for (const auto& w : r.witnesses) witnesses.push_back(witness_json(inst, w));
  out["witnesses"] = std::move(witnesses);
  if (!r.parts.empty()) {
    Json parts = Json::array();
    for (const auto& p : r.parts) parts.push_back(condition_json(inst, p));
    out["parts"] = std::move(parts);
  }
  return out;
}

void print_condition(const Instance& inst, const ConditionReport& r, int indent) {
  const std::string pad(indent, ' ');
  std::cout << pad << to_string(r.condition) << ": " << (r.pass ? "PASS" : "FAIL") << "\n";
  for (const auto& w : r.witnesses) {
    std::cout << pad << "  witness:";
    for (NodeIndex n : w.nodes) std::cout << " " << inst.name(n);
    for (const auto& p : w.paths) std::cout << " " << inst.render(p);
    if (!w.explanation.empty()) std::cout << " (" << w.explanation << ")";
    std::cout << "\n";
  }
  for (const auto& p : r.parts) print_condition(inst, p, indent + 2);
}

int cmd_check(const Global& g, const std::string& file, const std::string& mode) {
  Instance inst = io::load_instance(file);
  if (!mode.empty()) inst = with_mode(inst, parse_mode(mode));
  if (!report_validation(inst)) return kInputError;

  std::vector<ConditionReport> reports;
  if (inst.mode() == Mode::kNeighborSpecific) {
    reports.push_back(check_nsbgp_safety(inst));
  } else {
    reports.push_back(check_topology_condition(inst));
    reports.push_back(check_export_condition(inst));
    reports.push_back(check_gr_preference(inst));
  }
  const bool pass = std::all_of(reports.begin(), reports.end(),
                                [](const ConditionReport& r) { return r.pass; });
  if (g.json) {
    Json doc = report_header("check");
    doc["instance"] = file;
    doc["mode"] = std::string(to_string(inst.mode()));
    doc["pass"] = pass;
    Json list = Json::array();
    for (const auto& r : reports) list.push_back(condition_json(inst, r));
    doc["conditions"] = std::move(list);
    emit(doc);
  } else {
    std::cout << "mode: " << to_string(inst.mode()) << "\n";
    for (const auto& r : reports) print_condition(inst, r, 0);
  }
  return pass ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------- oracle

int cmd_oracle(const Global& g, const std::string& file, const std::string& mode,
               std::optional<std::uint64_t> budget, const std::string& dot_out) {
  Instance inst = io::load_instance(file);
  if (!mode.empty()) inst = with_mode(inst, parse_mode(mode));
  if (!report_validation(inst)) return kInputError;

  if (!budget) budget = env_budget();
  const std::uint64_t limit = budget.value_or(oracle::kDefaultSearchLimit);
  const std::size_t max_states =
      budget ? static_cast<std::size_t>(*budget) : oracle::kDefaultMaxStates;

  Json doc = report_header("oracle");
  doc["instance"] = file;
  doc["mode"] = std::string(to_string(inst.mode()));
  doc["search_limit"] = limit;
  doc["max_states"] = max_states;
  try {
    const auto stable = oracle::enumerate_stable_states(inst, limit);
    const auto result = oracle::exhaustive_search(inst, max_states);
    if (!dot_out.empty()) {
      std::ofstream out(dot_out);
      if (!out) throw ModelError(dot_out + ": cannot write graph");
      out << result.graph.to_dot(inst);
    }
    const bool safe = result.verdict == oracle::Verdict::kSafe;
    Json states = Json::array();
    for (const auto& s : stable) states.push_back(render_selections(inst, s));
    doc["stable_states"] = std::move(states);
    doc["reachable_states"] = result.graph.vertices.size();
    doc["verdict"] = safe ? "SAFE" : "CYCLE_FOUND";
    if (result.witness) {
      Json cycle = Json::array();
      for (const auto& s : result.witness->states) cycle.push_back(render_selections(inst, s));
      doc["witness"] = {{"prefix", render_nodes(inst, result.witness->prefix)},
                        {"schedule", render_nodes(inst, result.witness->schedule)},
                        {"states", std::move(cycle)}};
    }
    if (g.json) {
      emit(doc);
    } else {
      std::cout << stable.size() << (stable.size() == 1 ? " stable state" : " stable states")
                << ", " << (safe ? "SAFE" : "CYCLE_FOUND") << "\n";
      for (const auto& s : stable) std::cout << "  " << render_selections(inst, s) << "\n";
      std::cout << "reachable states: " << result.graph.vertices.size() << "\n";
      if (result.witness) {
        std::cout << "witness prefix: " << render_nodes(inst, result.witness->prefix) << "\n"
                  << "witness cycle schedule: "
                  << render_nodes(inst, result.witness->schedule) << "\n";
        for (const auto& s : result.witness->states) {
          std::cout << "  " << render_selections(inst, s) << "\n";
        }
      }
    }
    return safe ? kOk : kCycle;
  } catch (const oracle::SearchSpaceExceeded& e) {
    doc["verdict"] = "BUDGET_EXCEEDED";
    doc["reason"] = e.what();
  } catch (const oracle::StateBudgetExceeded& e) {
    doc["verdict"] = "BUDGET_EXCEEDED";
    doc["reason"] = e.what();
  }
  if (g.json) {
    emit(doc);
  } else {
    std::cout << "BUDGET_EXCEEDED: " << doc["reason"].get<std::string>() << "\n";
  }
  return kInconclusive;
}

// ---------------------------------------------------------------- as

struct AsArgs {
  std::string file;
  std::vector<std::string> checks;
  std::string select = "conventional";
  std::vector<std::string> pins;       // router=link
  std::vector<std::string> customize;  // ingress=egress
  std::string disseminate;
  std::string neighbor_class;
  bool tunnels = false;
};

std::pair<std::string, std::string> split_pair(const std::string& text, const char* what) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw ModelError(std::string(what) + ": expected A=B, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

intra_as::Dissemination parse_dissemination_flag(const std::string& text) {
  using namespace intra_as;
  if (text == "single-best") return SingleBest{};
  if (text == "class-best") return ClassBest{};
  if (text == "rcp") return RcpFull{};
  if (text.rfind("add-paths:", 0) == 0) {
    try {
      const auto k = std::stoul(text.substr(10));
      if (k >= 1) return AddPaths{k};
    } catch (const std::exception&) {
    }
  }
  throw ModelError("disseminate: expected single-best, class-best, rcp or add-paths:<k>");
}

Json route_json(const std::optional<intra_as::Route>& route) {
  if (!route) return nullptr;
  return {{"link", route->link}, {"path", route->path}};
}

std::string route_text(const std::optional<intra_as::Route>& route) {
  if (!route) return "(none)";
  std::string out = route->link + " (";
  for (std::size_t i = 0; i < route->path.size(); ++i) {
    if (i) out += " ";
    out += route->path[i];
  }
  return out + ")";
}

int cmd_as(const Global& g, const AsArgs& a) {
  using namespace intra_as;
  AsConfig config = io::load_as_config(a.file);
  if (!a.disseminate.empty()) config.dissemination = parse_dissemination_flag(a.disseminate);
  const AsInternal as(config);

  const auto view = disseminate(as);
  Selection selection;
  SelectionOptions options;
  if (!a.neighbor_class.empty()) options.neighbor_class = parse_relation(a.neighbor_class);
  for (const auto& pin : a.pins) {
    auto [router, link] = split_pair(pin, "pin");
    options.pinned_best[router] = link;
  }
  if (a.select == "conventional") {
    selection = egress_selection(as, SelectionMode::kConventional, options);
  } else if (a.select == "filter-first") {
    selection = egress_selection(as, SelectionMode::kFilterFirst, options);
  } else if (a.select == "customized") {
    std::map<LinkId, std::vector<LinkId>> prefs;
    for (const auto& c : a.customize) {
      auto [ingress, egress] = split_pair(c, "customize");
      prefs[ingress].push_back(egress);
    }
    selection = customized_selection(as, prefs);
  } else {
    throw ModelError("select: expected conventional, filter-first or customized");
  }

  std::vector<std::string> checks = a.checks;
  if (std::find(checks.begin(), checks.end(), "all") != checks.end()) {
    checks = {"consistent-export", "hot-potato"};
  }
  struct Verdict {
    std::string check;
    std::string scope;
    CheckResult result;
  };
  std::vector<Verdict> verdicts;
  for (const auto& check : checks) {
    if (check == "consistent-export") {
      std::set<std::string> neighbors;
      for (const auto& link : config.external_links) {
        if (as.links_of(link.neighbor).size() >= 2) neighbors.insert(link.neighbor);
      }
      for (const auto& n : neighbors) {
        verdicts.push_back({check, n, check_consistent_export(as, n, selection)});
      }
    } else if (check == "hot-potato") {
      verdicts.push_back({check, "all links", check_hot_potato(as, selection)});
    } else {
      throw ModelError("check: unknown check '" + check + "'");
    }
  }
  const bool pass = std::all_of(verdicts.begin(), verdicts.end(),
                                [](const Verdict& v) { return v.result.pass; });

  if (g.json) {
    Json doc = report_header("as");
    doc["as"] = config.name;
    doc["dissemination"] = describe(config.dissemination);
    doc["select"] = a.select;
    Json visibility = Json::object();
    for (const auto& r : config.routers) visibility[r] = view.visible.at(r).size();
    doc["visibility"] = std::move(visibility);
    Json overhead = Json::object();
    for (const auto& [r, count] : dissemination_overhead(as)) overhead[r] = count;
    doc["overhead"] = std::move(overhead);
    Json sel = Json::object();
    for (const auto& [link, route] : selection) sel[link] = route_json(route);
    doc["selection"] = std::move(sel);
    Json list = Json::array();
    for (const auto& v : verdicts) {
      list.push_back({{"check", v.check},
                      {"scope", v.scope},
                      {"pass", v.result.pass},
                      {"offending", v.result.offending},
                      {"explanation", v.result.explanation}});
    }
    doc["checks"] = std::move(list);
    if (a.tunnels) {
      Json tunnels = Json::object();
      for (const auto& [ingress, e] : assign_tunnels(as, selection).entries) {
        tunnels[ingress] = {{"egress_link", e.egress_link},
                            {"egress_router", e.egress_router},
                            {"pop_before_next_hop", e.pop_before_next_hop}};
      }
      doc["tunnels"] = std::move(tunnels);
    }
    doc["pass"] = pass;
    emit(doc);
  } else {
    std::cout << "AS " << config.name << "  dissemination: " << describe(config.dissemination)
              << "  select: " << a.select << "\n";
    std::cout << "visibility:";
    for (const auto& r : config.routers) std::cout << " " << r << "=" << view.visible.at(r).size();
    std::cout << "  (of " << as.all_offers().size() << " offers)\n";
    std::cout << "selection:\n";
    for (const auto& [link, route] : selection) {
      std::cout << "  " << link << " <- " << route_text(route) << "\n";
    }
    for (const auto& v : verdicts) {
      std::cout << v.check << " [" << v.scope << "]: " << (v.result.pass ? "PASS" : "FAIL");
      for (const auto& o : v.result.offending) std::cout << " " << o;
      std::cout << "\n";
    }
    if (a.tunnels) {
      std::cout << "tunnels:\n";
      for (const auto& [ingress, e] : assign_tunnels(as, selection).entries) {
        std::cout << "  " << ingress << " -> " << e.egress_link << " @" << e.egress_router
                  << (e.pop_before_next_hop ? " (pop at egress)" : "") << "\n";
      }
    }
  }
  return pass ? kOk : kCheckFailed;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string seeds = "1..100";
  std::size_t nodes = 6;
  std::string mode = "neighbor-specific";
  bool unsafe = false;
  bool inject_gadget = false;
  std::size_t schedules = 10;
  std::size_t jobs = 1;
};

struct SeedResult {
  std::uint64_t seed = 0;
  std::size_t converged = 0;
  std::size_t cycles = 0;
  std::size_t inconclusive = 0;
  std::size_t max_steps = 0;
  std::string error;
};

int cmd_sweep(const Global& g, const SweepArgs& a) {
  const auto dots = a.seeds.find("..");
  if (dots == std::string::npos) throw ModelError("seeds: expected a..b");
  std::uint64_t first = 0;
  std::uint64_t last = 0;
  try {
    first = std::stoull(a.seeds.substr(0, dots));
    last = std::stoull(a.seeds.substr(dots + 2));
  } catch (const std::exception&) {
    throw ModelError("seeds: expected a..b with integers");
  }
  const Mode mode = parse_mode(a.mode);
  scenarios::GeneratorConfig cfg;
  cfg.safe = !a.unsafe;
  cfg.inject_gadget = a.inject_gadget;
  // Surface config contradictions before spawning work.
  if (cfg.safe && cfg.inject_gadget) throw ModelError("--inject-gadget needs --unsafe");

  std::vector<SeedResult> results(last >= first ? last - first + 1 : 0);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < results.size(); i = next++) {
      SeedResult& r = results[i];
      r.seed = first + i;
      try {
        const Instance inst = scenarios::random_instance(r.seed, a.nodes, mode, cfg);
        for (std::size_t k = 0; k < a.schedules; ++k) {
          const Outcome out = run(inst, RandomFair{Rng::derive(r.seed, k), 0});
          if (const auto* c = std::get_if<Converged>(&out)) {
            ++r.converged;
            r.max_steps = std::max(r.max_steps, c->steps);
          } else if (std::holds_alternative<Cycle>(out)) {
            ++r.cycles;
          } else {
            ++r.inconclusive;
          }
        }
      } catch (const std::exception& e) {
        r.error = e.what();
      }
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(a.jobs, results.size()));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& r : results) {
    if (!r.error.empty()) throw ModelError("seed " + std::to_string(r.seed) + ": " + r.error);
  }
  std::size_t converged = 0, cycles = 0, inconclusive = 0, max_steps = 0;
  for (const auto& r : results) {
    converged += r.converged;
    cycles += r.cycles;
    inconclusive += r.inconclusive;
    max_steps = std::max(max_steps, r.max_steps);
  }
  if (g.json) {
    Json doc = report_header("sweep");
    doc["seeds"] = a.seeds;
    doc["nodes"] = a.nodes;
    doc["mode"] = std::string(to_string(mode));
    doc["safe"] = cfg.safe;
    doc["inject_gadget"] = cfg.inject_gadget;
    doc["schedules"] = a.schedules;
    doc["instances"] = results.size();
    doc["runs"] = results.size() * a.schedules;
    doc["converged"] = converged;
    doc["cycles"] = cycles;
    doc["inconclusive"] = inconclusive;
    doc["max_steps"] = max_steps;
    Json rows = Json::array();
    for (const auto& r : results) {
      rows.push_back({{"seed", r.seed},
                      {"converged", r.converged},
                      {"cycles", r.cycles},
                      {"inconclusive", r.inconclusive},
                      {"max_steps", r.max_steps}});
    }
    doc["per_seed"] = std::move(rows);
    emit(doc);
  } else {
    std::cout << "seeds " << a.seeds << "  nodes " << a.nodes << "  mode " << to_string(mode)
              << "  safe " << (cfg.safe ? "yes" : "no") << "  schedules " << a.schedules
              << "\n";
    std::cout << "instances  runs  converged  cycles  inconclusive  max_steps\n";
    std::cout << results.size() << "  " << results.size() * a.schedules << "  " << converged
              << "  " << cycles << "  " << inconclusive << "  " << max_steps << "\n";
  }
  return kOk;
}

// ---------------------------------------------------------------- customize / dump

int cmd_customize(const Global& g, const std::string& file, const std::string& assign_file,
                  const std::string& attrs_file, std::uint64_t attrs_seed) {
  const Instance inst = io::load_instance(file);
  if (!report_validation(inst)) return kInputError;
  const auto assignment = io::parse_assignment(inst, io::read_json_file(assign_file));
  const PathAttributes attrs =
      attrs_file.empty() ? scenarios::random_attributes(attrs_seed, inst)
                         : io::parse_attributes(inst, io::read_json_file(attrs_file));
  const Instance out = apply_service_models(inst, assignment.owner, assignment.models, attrs,
                                            assignment.self);
  const auto safety = check_nsbgp_safety(out);
  if (g.json) {
    Json doc = report_header("customize");
    doc["instance"] = io::instance_to_json(out);
    doc["nsbgp_safety"] = safety.pass;
    emit(doc);
  } else {
    std::cout << io::instance_to_json(out).dump(2) << "\n";
    std::cerr << "nsbgp-safety: " << (safety.pass ? "PASS" : "FAIL") << "\n";
  }
  return kOk;
}

int cmd_dump(const std::string& scenario, const std::string& mode, std::uint64_t seed,
             std::size_t nodes) {
  Json doc;
  if (scenario == "bad-gadget") {
    doc = io::instance_to_json(
        scenarios::bad_gadget(mode.empty() ? Mode::kConventional : parse_mode(mode)));
  } else if (scenario == "fig3") {
    doc = io::instance_to_json(scenarios::fig3_gadget());
  } else if (scenario == "fig4") {
    doc = io::instance_to_json(scenarios::fig4_gadget());
  } else if (scenario == "fig4-attributes") {
    const auto inst = scenarios::fig4_gadget();
    doc = io::attributes_to_json(inst, scenarios::fig4_attributes(inst));
  } else if (scenario == "fig1") {
    doc = io::as_config_to_json(scenarios::fig1_config());
  } else if (scenario == "fig5") {
    doc = io::as_config_to_json(scenarios::fig5_config());
  } else if (scenario == "random") {
    doc = io::instance_to_json(scenarios::random_instance(
        seed, nodes, mode.empty() ? Mode::kNeighborSpecific : parse_mode(mode)));
  } else {
    throw ModelError("unknown scenario '" + scenario + "'");
  }
  std::cout << doc.dump(2) << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nsbgp-lab: routing policy and convergence lab"};
  app.require_subcommand(1);
  app.fallthrough();
  Global g;
  app.add_flag("--json", g.json, "Structured JSON report on stdout");

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Simulate an instance under a schedule");
  run_cmd->add_option("instance", run_args.file, "Instance file")->required();
  run_cmd->add_option("--mode", run_args.mode, "conventional | filter-first | neighbor-specific");
  run_cmd->add_option("--schedule", run_args.schedule,
                      "round-robin | random:<seed> | comma-separated node list");
  run_cmd->add_option("--max-steps", run_args.max_steps, "Step budget (default 1000 x nodes)");
  run_cmd->add_option("--fairness-window", run_args.window,
                      "Random schedules: max gap between activations (default 2 x nodes)");
  run_cmd->add_option("--start", run_args.start, "initial | direct");
  run_cmd->add_option("--trace", run_args.trace_out, "Write a JSON-lines trace");

  std::string check_file, check_mode;
  auto* check_cmd = app.add_subcommand("check", "Run the policy condition checkers");
  check_cmd->add_option("instance", check_file, "Instance file")->required();
  check_cmd->add_option("--mode", check_mode, "Mode override");

  std::string oracle_file, oracle_mode, oracle_dot;
  std::optional<std::uint64_t> oracle_budget;
  auto* oracle_cmd = app.add_subcommand("oracle", "Enumerate stable states and search for cycles");
  oracle_cmd->add_option("instance", oracle_file, "Instance file")->required();
  oracle_cmd->add_option("--mode", oracle_mode, "Mode override");
  oracle_cmd->add_option("--budget", oracle_budget,
                         "Search limit and state budget (env NSBGP_LAB_BUDGET)");
  oracle_cmd->add_option("--dot", oracle_dot, "Write the state graph as Graphviz DOT");

  AsArgs as_args;
  auto* as_cmd = app.add_subcommand("as", "Evaluate a single-AS deployment");
  as_cmd->add_option("as_file", as_args.file, "AS file")->required();
  as_cmd->add_option("--check", as_args.checks, "consistent-export | hot-potato | all");
  as_cmd->add_option("--select", as_args.select, "conventional | filter-first | customized");
  as_cmd->add_option("--pin", as_args.pins, "Force a router's best route: ROUTER=LINK");
  as_cmd->add_option("--customize", as_args.customize, "Customized egress: INGRESS=EGRESS");
  as_cmd->add_option("--disseminate", as_args.disseminate,
                     "single-best | class-best | rcp | add-paths:<k>");
  as_cmd->add_option("--neighbor-class", as_args.neighbor_class,
                     "Only evaluate links to customer | peer | provider");
  as_cmd->add_flag("--tunnels", as_args.tunnels, "Print the tunnel table");

  SweepArgs sweep_args;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run random instances under random schedules");
  sweep_cmd->add_option("--seeds", sweep_args.seeds, "Seed range a..b (inclusive)");
  sweep_cmd->add_option("--nodes", sweep_args.nodes, "Nodes per instance, destination included");
  sweep_cmd->add_option("--mode", sweep_args.mode, "Selection mode");
  sweep_cmd->add_flag("--unsafe", sweep_args.unsafe, "Drop the safety conditions");
  sweep_cmd->add_flag("--inject-gadget", sweep_args.inject_gadget,
                      "Wire nodes 1-3 as a Bad Gadget (needs --unsafe)");
  sweep_cmd->add_option("--schedules", sweep_args.schedules, "Random schedules per instance");
  sweep_cmd->add_option("--jobs", sweep_args.jobs, "Worker threads");

  std::string cust_file, cust_assign, cust_attrs;
  std::uint64_t cust_seed = 0;
  auto* cust_cmd = app.add_subcommand("customize", "Apply service models to an instance");
  cust_cmd->add_option("instance", cust_file, "Instance file")->required();
  cust_cmd->add_option("--assign", cust_assign, "Service assignment file")->required();
  cust_cmd->add_option("--attrs", cust_attrs, "Path attribute file");
  cust_cmd->add_option("--attrs-seed", cust_seed, "Seed for generated attributes");

  std::string dump_name, dump_mode;
  std::uint64_t dump_seed = 1;
  std::size_t dump_nodes = 6;
  auto* dump_cmd = app.add_subcommand("dump", "Print a built-in scenario as a file");
  dump_cmd->add_option("scenario", dump_name,
                       "bad-gadget | fig1 | fig3 | fig4 | fig4-attributes | fig5 | random")
      ->required();
  dump_cmd->add_option("--mode", dump_mode, "Mode for bad-gadget / random");
  dump_cmd->add_option("--seed", dump_seed, "Seed for random");
  dump_cmd->add_option("--nodes", dump_nodes, "Nodes for random");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*run_cmd) return cmd_run(g, run_args);
    if (*check_cmd) return cmd_check(g, check_file, check_mode);
    if (*oracle_cmd) return cmd_oracle(g, oracle_file, oracle_mode, oracle_budget, oracle_dot);
    if (*as_cmd) return cmd_as(g, as_args);
    if (*sweep_cmd) return cmd_sweep(g, sweep_args);
    if (*cust_cmd) return cmd_customize(g, cust_file, cust_assign, cust_attrs, cust_seed);
    if (*dump_cmd) return cmd_dump(dump_name, dump_mode, dump_seed, dump_nodes);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
