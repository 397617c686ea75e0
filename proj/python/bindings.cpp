// Python bindings for the bgpcomm core. JSON-shaped results cross the
// boundary as plain dicts via the json module.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bgpcomm/pipeline.hpp"
#include "bgpcomm/synthgen.hpp"

namespace py = pybind11;
using namespace bgpcomm;

namespace {

py::object to_py(const Json& j) {
  return py::module_::import("json").attr("loads")(j.dump());
}

Json from_py(const py::object& o) {
  std::string text = py::module_::import("json").attr("dumps")(o).cast<std::string>();
  return Json::parse(text);
}

Community as_community(const py::object& o) {
  if (py::isinstance<py::str>(o)) {
    return parse_community(o.cast<std::string>());
  }
  return o.cast<Community>();
}

std::vector<std::string> meaning_strings(const MeaningSet& ms) {
  std::vector<std::string> out;
  for (const auto& m : ms) {
    out.push_back(to_string(m));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "BGP communities anomaly detection engine";

  auto parse_error = py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<UnsupportedCommunityForm>(m, "UnsupportedCommunityForm", parse_error);
  py::register_exception<DictionaryError>(m, "DictionaryError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<synth::ScenarioError>(m, "ScenarioError", PyExc_ValueError);

  py::class_<Community>(m, "Community")
      .def(py::init<>())
      .def(py::init([](std::uint16_t asn, std::uint16_t value) { return Community{asn, value}; }),
           py::arg("asn"), py::arg("value"))
      .def_readwrite("asn", &Community::asn)
      .def_readwrite("value", &Community::value)
      .def("__str__", &format_community)
      .def("__repr__", [](Community c) { return "Community('" + format_community(c) + "')"; })
      .def("__eq__", [](Community a, Community b) { return a == b; })
      .def("__lt__", [](Community a, Community b) { return a < b; })
      .def("__hash__", [](Community c) { return (std::size_t{c.asn} << 16) | c.value; });

  m.def("parse_community", [](const std::string& s) { return parse_community(s); });
  m.def("format_community", &format_community);

  py::class_<Prefix>(m, "Prefix")
      .def_property_readonly("length", &Prefix::length)
      .def_property_readonly("is_ipv6", [](const Prefix& p) { return p.family() == Family::v6; })
      .def("__str__", &Prefix::to_string)
      .def("__repr__", [](const Prefix& p) { return "Prefix('" + p.to_string() + "')"; })
      .def("__eq__", [](const Prefix& a, const Prefix& b) { return a == b; });

  m.def("parse_prefix", [](const std::string& s) { return parse_prefix(s); });
  m.def("prefix_covers", [](const std::string& covering, const std::string& covered) {
    return prefix_covers(parse_prefix(covering), parse_prefix(covered));
  });
  m.def("collapse_prepending", [](std::vector<Asn> hops) {
    return collapse_prepending(AsPath{std::move(hops)}).hops;
  });
  m.def("bin_index", &bin_index, py::arg("timestamp"), py::arg("bin_width"));

  py::class_<Dictionary>(m, "Dictionary")
      .def("lookup", [](const Dictionary& d, const py::object& c) {
        return meaning_strings(d.lookup(as_community(c)));
      })
      .def("annotate", [](const Dictionary& d, const std::vector<py::object>& cs) {
        CommunitySet set;
        for (const auto& c : cs) {
          set.insert(as_community(c));
        }
        return meaning_strings(d.annotate(set));
      })
      .def("stats", [](const Dictionary& d) { return to_py(histogram_to_json(d.stats())); })
      .def("__len__", &Dictionary::size);

  m.def(
      "load_dictionary",
      [](const std::string& path, bool exact_overrides_range) {
        LoadOptions o;
        if (exact_overrides_range) o.policy = OverlapPolicy::exact_overrides_range;
        return load_dictionary_file(path, o);
      },
      py::arg("path"), py::arg("exact_overrides_range") = false);
  m.def(
      "parse_dictionary",
      [](const std::string& text, bool exact_overrides_range) {
        LoadOptions o;
        if (exact_overrides_range) o.policy = OverlapPolicy::exact_overrides_range;
        std::istringstream in(text);
        return load_dictionary(in, o);
      },
      py::arg("text"), py::arg("exact_overrides_range") = false);

  m.def("parse_record", [](const std::string& line) { return to_py(update_to_json(parse_record(line))); });

  m.def("check_valley_free", [](const std::vector<std::string>& roles) {
    std::vector<EdgeRole> seq;
    for (const auto& r : roles) {
      seq.push_back(parse_edge_role(r));
    }
    auto v = check_valley_free(seq);
    py::object witness = py::none();
    if (v.witness) {
      witness = py::make_tuple(v.witness->first, v.witness->second);
    }
    return py::make_tuple(v.violating, witness);
  });

  m.def(
      "run_pipeline",
      [](const py::dict& config) {
        Config cfg = config_from_json(from_py(config));
        Json summary;
        {
          py::gil_scoped_release release;
          summary = run_pipeline(cfg).summary;
        }
        return to_py(summary);
      },
      py::arg("config"), "Runs the full pipeline and returns summary.json as a dict.");

  m.def(
      "generate",
      [](const py::dict& scenario, const py::object& out_dir) {
        auto g = synth::generate(synth::scenario_from_json(from_py(scenario)));
        if (!out_dir.is_none()) {
          synth::write_scenario(g, py::str(out_dir).cast<std::string>());
        }
        py::dict r;
        r["updates"] = g.updates;
        r["dictionary"] = g.dictionary;
        r["ground_truth"] = to_py(g.ground_truth);
        return r;
      },
      py::arg("scenario"), py::arg("out_dir") = py::none());
}
