#include "mtra/assignment.hpp"
#include "mtra/axioms.hpp"
#include "mtra/error.hpp"
#include "mtra/fixtures.hpp"
#include "mtra/io.hpp"
#include "mtra/mechanisms.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace py = pybind11;
using namespace mtra;

namespace {

struct LoadedInstance {
  Instance instance;
  TiebreakSpec tiebreak;
};

LoadedInstance instance_from_json(const std::string& text) {
  auto doc = parse_instance_document(text);
  return {build_instance(doc.spec), doc.tiebreak};
}

TiebreakSpec tiebreak_or_default(const LoadedInstance& li, const std::optional<std::string>& text) {
  return text ? parse_tiebreak_document(*text) : li.tiebreak;
}

FractionalAssignment assignment_from_json(const Instance& instance, const std::string& text) {
  auto a = parse_assignment_document(text, instance).assignment;
  if (auto violation = validate_assignment(a, instance)) {
    throw Error(ErrorKind::DimensionMismatch, violation->describe(instance));
  }
  return a;
}

std::string run(const LoadedInstance& li, const std::string& mechanism_text, const std::string& mode,
                std::uint64_t seed, const std::optional<std::string>& tiebreak_text) {
  const auto mechanism = parse_mechanism(mechanism_text);
  if (!mechanism) throw Error(ErrorKind::Parse, "unknown mechanism '" + mechanism_text + "'");
  const auto tiebreak = tiebreak_or_default(li, tiebreak_text);
  const auto tiebreaks = resolve_tiebreaks(li.instance, tiebreak);
  AssignmentDocument doc;
  doc.metadata.mechanism = std::string(mechanism_name(*mechanism));
  doc.metadata.tiebreak = tiebreak;
  doc.metadata.mode = mode;
  if (mode == "exact") {
    doc.assignment = run_mechanism(*mechanism, li.instance, tiebreaks);
  } else if (*mechanism != Mechanism::Mrp) {
    throw Error(ErrorKind::Parse, "mode '" + mode + "' only applies to mrp");
  } else if (mode == "sample") {
    std::vector<AgentIndex> priority(li.instance.agent_count());
    std::iota(priority.begin(), priority.end(), AgentIndex{0});
    std::mt19937_64 rng(seed);
    std::shuffle(priority.begin(), priority.end(), rng);
    doc.metadata.seed = seed;
    doc.assignment = mrp(li.instance, MrpMode::single_run(priority), tiebreaks).assignment;
  } else if (mode.rfind("mc:", 0) == 0) {
    std::size_t samples = 0;
    try {
      samples = std::stoull(mode.substr(3));
    } catch (const std::exception&) {
      throw Error(ErrorKind::Parse, "mode mc:K needs a positive sample count");
    }
    doc.metadata.mode = "mc";
    doc.metadata.seed = seed;
    doc.metadata.samples = samples;
    doc.assignment = mrp(li.instance, MrpMode::monte_carlo(samples, seed), tiebreaks).assignment;
  } else {
    throw Error(ErrorKind::Parse, "unknown mode '" + mode + "' (expected sample, exact or mc:K)");
  }
  return serialize_assignment_document(doc, li.instance);
}

py::dict check(const LoadedInstance& li, const std::string& assignment_text, const std::vector<std::string>& names,
               const std::string& mechanism_text, const std::string& misreports, const std::string& transforms,
               const std::optional<std::string>& tiebreak_text) {
  const auto& instance = li.instance;
  const auto p = assignment_from_json(instance, assignment_text);
  std::vector<Tiebreaks> tiebreak_sets;
  if (tiebreak_text) tiebreak_sets.push_back(resolve_tiebreaks(instance, parse_tiebreak_document(*tiebreak_text)));

  std::vector<Property> properties;
  for (const auto& name : names) {
    auto property = parse_property(name);
    if (!property) throw Error(ErrorKind::Parse, "unknown property '" + name + "'");
    properties.push_back(*property);
  }
  if (names.empty()) {
    for (auto property : all_properties()) {
      if (!is_mechanism_property(property) || !mechanism_text.empty()) properties.push_back(property);
    }
  }

  auto mechanism = [&] {
    auto m = parse_mechanism(mechanism_text);
    if (!m) throw Error(ErrorKind::Parse, "this property needs a known mechanism, got '" + mechanism_text + "'");
    return *m;
  };
  auto space = [&] {
    if (misreports == "linear") return MisreportSpace::linear_orders();
    if (misreports == "cpnet") return MisreportSpace::cp_nets();
    if (misreports == "independent") return MisreportSpace::independent_cp_nets();
    throw Error(ErrorKind::Parse, "unknown misreport space '" + misreports + "'");
  };
  auto source = [&] {
    if (transforms == "generated") return TransformSource::generated();
    if (transforms == "cpnet") return TransformSource::cp_nets();
    throw Error(ErrorKind::Parse, "unknown transform source '" + transforms + "'");
  };

  py::dict out;
  for (auto property : properties) {
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
        r = check_upper_invariance(mechanism(), instance, source(), tiebreak_sets);
        break;
      case Property::SdStrategyproofness:
      case Property::WeakSdStrategyproofness:
        r = check_strategyproofness(mechanism(), instance, space(),
                                    property == Property::SdStrategyproofness ? SpStrength::Sd : SpStrength::Weak,
                                    tiebreak_sets);
        break;
    }
    py::dict entry;
    entry["pass"] = r.pass;
    entry["cases_checked"] = r.cases_checked;
    entry["detail"] = r.detail;
    entry["summary"] = describe_report(instance, r);
    out[py::str(std::string(property_name(property)))] = entry;
  }
  return out;
}

std::vector<std::pair<bool, bool>> compare(const LoadedInstance& li, const std::string& a_text,
                                           const std::string& b_text) {
  const auto a = parse_assignment_document(a_text, li.instance).assignment;
  const auto b = parse_assignment_document(b_text, li.instance).assignment;
  std::vector<std::pair<bool, bool>> out;
  for (AgentIndex j = 0; j < li.instance.agent_count(); ++j) {
    const auto v = sd_compare(li.instance.order(j), a.row(j), b.row(j));
    out.emplace_back(v.p_dominates_q, v.q_dominates_p);
  }
  return out;
}

std::optional<std::string> decompose(const LoadedInstance& li, const std::optional<std::string>& assignment_text,
                      const std::optional<std::string>& tiebreak_text) {
  if (assignment_text) {
    const auto r = check_decomposability(li.instance, assignment_from_json(li.instance, *assignment_text));
    if (!r.pass) return std::nullopt;
    return serialize_lottery(std::get<Lottery>(*r.witness), li.instance);
  }
  const auto tiebreaks = resolve_tiebreaks(li.instance, tiebreak_or_default(li, tiebreak_text));
  const auto d = mgd_decompose(li.instance, tiebreaks);
  return serialize_lottery(d.lottery, li.instance, d.priorities);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact multi-type allocation mechanisms and property checks";

  py::exception<Error>(m, "InputError", PyExc_ValueError);
  py::exception<Error>(m, "GuardViolation", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const char* name = is_guard_violation(e.kind()) ? "GuardViolation" : "InputError";
      py::set_error(py::module_::import("mtra._core").attr(name), e.what());
    }
  });

  py::class_<LoadedInstance>(m, "Instance")
      .def_static("from_json", &instance_from_json, py::arg("text"))
      .def_static(
          "load",
          [](const std::string& path) {
            TiebreakSpec tiebreak;
            auto instance = load_instance(path, &tiebreak);
            return LoadedInstance{std::move(instance), tiebreak};
          },
          py::arg("path"))
      .def_property_readonly("agent_count", [](const LoadedInstance& li) { return li.instance.agent_count(); })
      .def_property_readonly("bundles",
                             [](const LoadedInstance& li) {
                               std::vector<std::string> names;
                               for (BundleIndex x = 0; x < li.instance.bundle_count(); ++x) {
                                 names.push_back(li.instance.bundle_name(x));
                               }
                               return names;
                             })
      .def_property_readonly("is_cp_profile", [](const LoadedInstance& li) { return li.instance.is_cp_profile(); })
      .def("to_json", [](const LoadedInstance& li) {
        return serialize_instance_document({describe_instance(li.instance), li.tiebreak});
      });

  m.def("run", &run, py::arg("instance"), py::arg("mechanism"), py::arg("mode"), py::arg("seed"),
        py::arg("tiebreak") = py::none());
  m.def("check", &check, py::arg("instance"), py::arg("assignment"), py::arg("properties"), py::arg("mechanism"),
        py::arg("misreports"), py::arg("transforms"), py::arg("tiebreak") = py::none());
  m.def("compare", &compare, py::arg("instance"), py::arg("a"), py::arg("b"));
  m.def("decompose", &decompose, py::arg("instance"), py::arg("assignment") = py::none(),
        py::arg("tiebreak") = py::none());
  m.def("replay", [] {
    std::ostringstream out;
    const bool ok = replay(reference_fixtures(), out);
    return std::make_pair(ok, out.str());
  });
}
