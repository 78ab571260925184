#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "dla/assessment.hpp"
#include "dla/bundle.hpp"
#include "dla/cli.hpp"
#include "dla/error.hpp"
#include "dla/store.hpp"

namespace py = pybind11;
using namespace dla;

namespace {

Json parse(const std::string& text) { return parse_json_text(text, "<python>"); }

ParseContext context(bool lenient) { return ParseContext(lenient ? Strictness::lenient : Strictness::strict); }

Bundle open_bundle(const std::filesystem::path& input, const Catalog& catalog, bool lenient) {
  ParseContext ctx = context(lenient);
  return load_bundle(resolve_bundle(input), catalog, ctx);
}

Json report_json(const ValidationReport& report) {
  Json out = Json::array();
  for (const auto& v : report) out.push_back(Json{{"field", v.field}, {"rule", v.rule}});
  return out;
}

}  // namespace

PYBIND11_MODULE(_dla, m) {
  m.doc() = "Dataset license compliance analysis (native core)";

  static py::exception<Error> error(m, "DlaError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object inst = py::reinterpret_borrow<py::object>(error.ptr())(std::string(e.what()));
      inst.attr("code") = std::string(to_string(e.code()));
      inst.attr("detail") = e.detail();
      PyErr_SetObject(error.ptr(), inst.ptr());
    }
  });

  m.attr("ENGINE_VERSION") = std::string(kEngineVersion);

  m.def("run_cli", [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    int status;
    {
      py::gil_scoped_release release;
      status = cli::run(args, out, err);
    }
    return py::make_tuple(status, out.str(), err.str());
  }, py::arg("args"), "Run the command-line front end; returns (status, stdout, stderr).");

  m.def("validate_provenance", [](const std::string& record, bool lenient) {
    ParseContext ctx = context(lenient);
    return canonical(report_json(validate_provenance(provenance_from_json(parse(record), ctx))));
  }, py::arg("record_json"), py::arg("lenient") = false);

  m.def("validate_rights_vector", [](const std::string& vector, bool lenient) {
    ParseContext ctx = context(lenient);
    return canonical(report_json(validate_rights_vector(rights_vector_from_json(parse(vector), ctx))));
  }, py::arg("vector_json"), py::arg("lenient") = false);

  m.def("license_ranges", [](const std::filesystem::path& input, bool lenient) {
    ParseContext ctx = context(lenient);
    LineageGraph g = build_lineage(load_lineage_document(resolve_bundle(input).lineage, ctx));
    Json out = Json::object();
    for (const auto& [id, _] : g.nodes()) out[id] = to_json(compute_license_range(id, g));
    return canonical(out);
  }, py::arg("bundle"), py::arg("lenient") = false);

  m.def("lookup_template", [](const std::filesystem::path& templates, const std::string& id, const std::string& version) {
    return canonical(to_json(Catalog::load_directory(templates).lookup_template(id, version)));
  }, py::arg("templates"), py::arg("license_id"), py::arg("version") = "");

  m.def("verify", [](const std::filesystem::path& input, const std::filesystem::path& templates, bool unknown_denies,
                     bool lenient) {
    Catalog catalog = Catalog::load_directory(templates);
    Bundle b = open_bundle(input, catalog, lenient);
    return canonical(to_json(dla::verify(b.graph, b.interpretation_map(), Policy{unknown_denies})));
  }, py::arg("bundle"), py::arg("templates"), py::arg("unknown_denies") = false, py::arg("lenient") = false);

  m.def("assess", [](const std::vector<std::filesystem::path>& inputs, const std::filesystem::path& templates,
                     const std::string& scenarios_json, bool unknown_denies, bool lenient) {
    Catalog catalog = Catalog::load_directory(templates);
    std::vector<UsageScenario> scenarios = default_scenarios();
    if (!scenarios_json.empty()) {
      ParseContext ctx = context(lenient);
      scenarios = scenarios_from_json(parse(scenarios_json), ctx);
    }
    std::vector<DatasetReport> reports;
    for (const auto& input : inputs) {
      Bundle b = open_bundle(input, catalog, lenient);
      DatasetReport r;
      r.verified = dla::verify(b.graph, b.interpretation_map(), Policy{unknown_denies});
      r.own = *b.interpretations.at(b.graph.root_id()).vector;
      r.table = assess_all(r.verified, scenarios, b.graph.root().dataset_name);
      r.templates = b.template_refs();
      reports.push_back(std::move(r));
    }
    return canonical(reports_to_json(reports));
  }, py::arg("bundles"), py::arg("templates"), py::arg("scenarios_json") = "", py::arg("unknown_denies") = false,
     py::arg("lenient") = false);

  m.def("analysis_key", [](const std::string& record, bool unknown_denies) {
    ParseContext ctx(Strictness::lenient);
    return analysis_key(provenance_from_json(parse(record), ctx), Policy{unknown_denies});
  }, py::arg("record_json"), py::arg("unknown_denies") = false);
}
