#include "mtra/axioms.hpp"
#include "mtra/error.hpp"
#include "mtra/fixtures.hpp"
#include "mtra/io.hpp"
#include "mtra/mechanisms.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

namespace {

using namespace mtra;

constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitGuard = 3;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("MTRA_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "MTRA_SEED must be an unsigned integer");
    }
  }
  return 0;
}

// "" keeps the instance file's tiebreak, "default" forces canonical order,
// anything else is a tiebreak file.
TiebreakSpec choose_tiebreak(const std::string& option, const TiebreakSpec& from_instance) {
  if (option.empty()) return from_instance;
  if (option == "default") return {};
  return parse_tiebreak_document(read_text_file(option));
}

Mechanism mechanism_from(const std::string& name) {
  auto m = parse_mechanism(name);
  if (!m) throw Error(ErrorKind::Parse, "unknown mechanism '" + name + "' (expected mrp, mps or mgd)");
  return *m;
}

void print_approx(const Instance& instance, const FractionalAssignment& a, std::ostream& out) {
  out << std::setw(8) << "agent";
  for (BundleIndex x = 0; x < instance.bundle_count(); ++x) out << std::setw(10) << instance.bundle_name(x);
  out << '\n';
  for (AgentIndex j = 0; j < instance.agent_count(); ++j) {
    out << std::setw(8) << j + 1;
    for (BundleIndex x = 0; x < instance.bundle_count(); ++x) {
      out << std::setw(10) << std::fixed << std::setprecision(4) << to_double(a.at(j, x));
    }
    out << '\n';
  }
}

struct RunOptions {
  std::string instance;
  std::string mechanism = "mps";
  std::string mode = "exact";
  std::optional<std::uint64_t> seed;
  std::string tiebreak;
  bool approx = false;
};

int cmd_run(const RunOptions& o) {
  TiebreakSpec file_tiebreak;
  const auto instance = load_instance(o.instance, &file_tiebreak);
  const auto tiebreak = choose_tiebreak(o.tiebreak, file_tiebreak);
  const auto tiebreaks = resolve_tiebreaks(instance, tiebreak);
  const auto mechanism = mechanism_from(o.mechanism);
  const auto seed = o.seed ? *o.seed : default_seed();

  AssignmentDocument doc;
  doc.metadata.mechanism = std::string(mechanism_name(mechanism));
  doc.metadata.tiebreak = tiebreak;
  if (o.mode == "exact") {
    doc.metadata.mode = "exact";
    doc.assignment = run_mechanism(mechanism, instance, tiebreaks);
  } else if (mechanism != Mechanism::Mrp) {
    throw Error(ErrorKind::Parse, "mode '" + o.mode + "' only applies to mrp");
  } else if (o.mode == "sample") {
    std::vector<AgentIndex> priority(instance.agent_count());
    std::iota(priority.begin(), priority.end(), AgentIndex{0});
    std::mt19937_64 rng(seed);
    std::shuffle(priority.begin(), priority.end(), rng);
    doc.metadata.mode = "sample";
    doc.metadata.seed = seed;
    doc.assignment = mrp(instance, MrpMode::single_run(priority), tiebreaks).assignment;
  } else if (o.mode.rfind("mc:", 0) == 0) {
    std::size_t samples = 0;
    try {
      samples = std::stoull(o.mode.substr(3));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "mode mc:K needs a positive sample count");
    }
    doc.metadata.mode = "mc";
    doc.metadata.seed = seed;
    doc.metadata.samples = samples;
    doc.assignment = mrp(instance, MrpMode::monte_carlo(samples, seed), tiebreaks).assignment;
  } else {
    throw Error(ErrorKind::Parse, "unknown mode '" + o.mode + "' (expected sample, exact or mc:K)");
  }
  if (o.approx) {
    print_approx(instance, doc.assignment, std::cout);
  } else {
    std::cout << serialize_assignment_document(doc, instance);
  }
  return 0;
}

struct CheckOptions {
  std::string instance;
  std::string assignment;
  std::string properties = "all";
  std::string mechanism;
  std::string misreports = "linear";
  std::string transforms = "generated";
  std::string tiebreak;
  std::string report;
};

AssignmentDocument load_assignment(const Instance& instance, const std::string& path) {
  auto doc = parse_assignment_document(read_text_file(path), instance);
  if (auto violation = validate_assignment(doc.assignment, instance)) {
    throw Error(ErrorKind::DimensionMismatch, path + ": " + violation->describe(instance));
  }
  return doc;
}

MisreportSpace misreport_space(const std::string& name) {
  if (name == "linear") return MisreportSpace::linear_orders();
  if (name == "cpnet") return MisreportSpace::cp_nets();
  if (name == "independent") return MisreportSpace::independent_cp_nets();
  throw Error(ErrorKind::Parse, "unknown misreport space '" + name + "' (expected linear, cpnet or independent)");
}

TransformSource transform_source(const std::string& name) {
  if (name == "generated") return TransformSource::generated();
  if (name == "cpnet") return TransformSource::cp_nets();
  throw Error(ErrorKind::Parse, "unknown transform source '" + name + "' (expected generated or cpnet)");
}

std::vector<Property> property_list(const std::string& text) {
  if (text == "all") return all_properties();
  std::vector<Property> out;
  std::stringstream stream(text);
  std::string name;
  while (std::getline(stream, name, ',')) {
    auto p = parse_property(name);
    if (!p) throw Error(ErrorKind::Parse, "unknown property '" + name + "'");
    out.push_back(*p);
  }
  return out;
}

nlohmann::ordered_json report_json(const Instance& instance, const PropertyReport& r) {
  nlohmann::ordered_json out;
  out["property"] = std::string(property_name(r.property));
  out["pass"] = r.pass;
  out["cases_checked"] = r.cases_checked;
  out["detail"] = r.detail;
  out["summary"] = describe_report(instance, r);
  return out;
}

int cmd_check(const CheckOptions& o) {
  TiebreakSpec file_tiebreak;
  const auto instance = load_instance(o.instance, &file_tiebreak);
  const auto doc = load_assignment(instance, o.assignment);
  const auto& p = doc.assignment;
  const auto properties = property_list(o.properties);
  const std::string mechanism_text = o.mechanism.empty() ? doc.metadata.mechanism : o.mechanism;

  std::vector<Tiebreaks> tiebreak_sets;
  if (!o.tiebreak.empty()) {
    tiebreak_sets.push_back(resolve_tiebreaks(instance, choose_tiebreak(o.tiebreak, file_tiebreak)));
  } else if (!doc.metadata.tiebreak.empty()) {
    tiebreak_sets.push_back(resolve_tiebreaks(instance, doc.metadata.tiebreak));
  }

  bool all_pass = true;
  nlohmann::ordered_json reports = nlohmann::ordered_json::array();
  for (auto property : properties) {
    if (is_mechanism_property(property) && mechanism_text.empty()) {
      if (o.properties == "all") continue;
      throw Error(ErrorKind::Parse, std::string(property_name(property)) + " needs --mechanism");
    }
    PropertyReport r;
    switch (property) {
      case Property::SdEfficiency: r = check_sd_efficiency(instance, p); break;
      case Property::ExPostEfficiency: r = check_ex_post_efficiency(instance, p); break;
      case Property::OrdinalFairness: r = check_ordinal_fairness(instance, p); break;
      case Property::SdEnvyFreeness: r = check_envy(instance, p, EnvyStrength::Strong); break;
      case Property::WeakSdEnvyFreeness: r = check_envy(instance, p, EnvyStrength::Weak); break;
      case Property::EqualTreatment: r = check_ete(instance, p); break;
      case Property::Decomposability: r = check_decomposability(instance, p); break;
      case Property::UpperInvariance:
        r = check_upper_invariance(mechanism_from(mechanism_text), instance, transform_source(o.transforms),
                                   tiebreak_sets);
        break;
      case Property::SdStrategyproofness:
      case Property::WeakSdStrategyproofness:
        r = check_strategyproofness(mechanism_from(mechanism_text), instance, misreport_space(o.misreports),
                                    property == Property::SdStrategyproofness ? SpStrength::Sd : SpStrength::Weak,
                                    tiebreak_sets);
        break;
    }
    all_pass = all_pass && r.pass;
    std::cout << describe_report(instance, r) << '\n';
    reports.push_back(report_json(instance, r));
  }
  if (!o.report.empty()) {
    std::ofstream out(o.report);
    if (!out) throw Error(ErrorKind::Parse, "cannot write '" + o.report + "'");
    out << reports.dump(2) << '\n';
  }
  return all_pass ? 0 : kExitFail;
}

std::string verdict_text(const SdVerdict& v) {
  if (v.mutual()) return "mutual";
  if (v.p_dominates_q) return "A sd B, not conversely";
  if (v.q_dominates_p) return "B sd A, not conversely";
  return "incomparable";
}

int cmd_compare(const std::string& instance_path, const std::string& a_path, const std::string& b_path,
                std::optional<std::size_t> agent) {
  const auto instance = load_instance(instance_path);
  const auto a = parse_assignment_document(read_text_file(a_path), instance).assignment;
  const auto b = parse_assignment_document(read_text_file(b_path), instance).assignment;
  if (agent && (*agent == 0 || *agent > instance.agent_count())) {
    throw Error(ErrorKind::UnknownName, "agent " + std::to_string(*agent) + " does not exist");
  }
  for (AgentIndex j = 0; j < instance.agent_count(); ++j) {
    if (agent && j + 1 != *agent) continue;
    std::cout << "agent " << j + 1 << ": " << verdict_text(sd_compare(instance.order(j), a.row(j), b.row(j))) << '\n';
  }
  return 0;
}

int cmd_decompose(const std::string& instance_path, const std::string& tiebreak_option,
                  const std::string& assignment_path) {
  TiebreakSpec file_tiebreak;
  const auto instance = load_instance(instance_path, &file_tiebreak);
  if (!assignment_path.empty()) {
    const auto doc = load_assignment(instance, assignment_path);
    const auto r = check_decomposability(instance, doc.assignment);
    if (!r.pass) {
      std::cerr << describe_report(instance, r) << '\n';
      return kExitFail;
    }
    std::cout << serialize_lottery(std::get<Lottery>(*r.witness), instance);
    return 0;
  }
  const auto tiebreaks = resolve_tiebreaks(instance, choose_tiebreak(tiebreak_option, file_tiebreak));
  const auto d = mgd_decompose(instance, tiebreaks);
  std::cout << serialize_lottery(d.lottery, instance, d.priorities);
  return 0;
}

int cmd_replay(bool list) {
  const auto fixtures = reference_fixtures();
  if (list) {
    list_fixtures(fixtures, std::cout);
    return 0;
  }
  return replay(fixtures, std::cout) ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-type random assignment: mechanisms and property oracles"};
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Run a mechanism and print the assignment file");
  run_cmd->add_option("instance", run.instance, "Instance file")->required();
  run_cmd->add_option("--mechanism,-m", run.mechanism, "mrp, mps or mgd")->capture_default_str();
  run_cmd->add_option("--mode", run.mode, "sample, exact or mc:K (mrp only for sample and mc)")->capture_default_str();
  run_cmd->add_option("--seed", run.seed, "Seed for sample and mc modes (default: MTRA_SEED or 0)");
  run_cmd->add_option("--tiebreak", run.tiebreak, "Tiebreak file, or 'default' for canonical order");
  run_cmd->add_flag("--approx", run.approx, "Print a decimal table instead of the exact file");

  CheckOptions check;
  auto* check_cmd = app.add_subcommand("check", "Check properties of an assignment");
  check_cmd->add_option("instance", check.instance, "Instance file")->required();
  check_cmd->add_option("assignment", check.assignment, "Assignment file")->required();
  check_cmd->add_option("--property,-p", check.properties, "Comma-separated properties or 'all'")->capture_default_str();
  check_cmd->add_option("--mechanism,-m", check.mechanism, "Mechanism for strategyproofness and upper invariance");
  check_cmd->add_option("--misreports", check.misreports, "linear, cpnet or independent")->capture_default_str();
  check_cmd->add_option("--transforms", check.transforms, "generated or cpnet")->capture_default_str();
  check_cmd->add_option("--tiebreak", check.tiebreak, "Tiebreak file for mechanism checks, or 'default'");
  check_cmd->add_option("--report", check.report, "Write a JSON report to this path");

  std::string cmp_instance, cmp_a, cmp_b;
  std::optional<std::size_t> cmp_agent;
  auto* compare_cmd = app.add_subcommand("compare", "Stochastic-dominance comparison of two assignments");
  compare_cmd->add_option("instance", cmp_instance, "Instance file")->required();
  compare_cmd->add_option("a", cmp_a, "Assignment A")->required();
  compare_cmd->add_option("b", cmp_b, "Assignment B")->required();
  compare_cmd->add_option("--agent", cmp_agent, "Only this agent (1-based)");

  std::string dec_instance, dec_tiebreak, dec_assignment;
  auto* decompose_cmd = app.add_subcommand("decompose", "Print the lottery behind general dictatorship");
  decompose_cmd->add_option("instance", dec_instance, "Instance file")->required();
  decompose_cmd->add_option("--tiebreak", dec_tiebreak, "Tiebreak file, or 'default'");
  decompose_cmd->add_option("--assignment", dec_assignment, "Decompose this assignment instead");

  bool replay_list = false;
  auto* replay_cmd = app.add_subcommand("replay", "Replay the built-in reference fixtures");
  replay_cmd->alias("replay-paper");
  replay_cmd->add_flag("--list", replay_list, "List fixtures without running them");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*check_cmd) return cmd_check(check);
    if (*compare_cmd) return cmd_compare(cmp_instance, cmp_a, cmp_b, cmp_agent);
    if (*decompose_cmd) return cmd_decompose(dec_instance, dec_tiebreak, dec_assignment);
    if (*replay_cmd) return cmd_replay(replay_list);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return is_guard_violation(e.kind()) ? kExitGuard : kExitInput;
  }
  return kExitInput;
}
