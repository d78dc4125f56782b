#include <sstream>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "trackerlink/cli/commands.hpp"
#include "trackerlink/extract/extractor.hpp"
#include "trackerlink/graph/graph.hpp"
#include "trackerlink/graph/stats.hpp"

namespace py = pybind11;
using namespace trackerlink;

namespace {

py::tuple run(const std::vector<std::string>& args) {
  std::vector<std::string> full{"trackerlink"};
  full.insert(full.end(), args.begin(), args.end());
  std::ostringstream out, err;
  int code;
  {
    py::gil_scoped_release nogil;
    code = cli::run_cli(full, out, err);
  }
  return py::make_tuple(code, out.str(), err.str());
}

py::object normalize(const std::string& raw) {
  auto id = core::normalize_id(raw);
  if (!id) return py::none();
  return py::str(id->canonical());
}

py::list hits(const py::bytes& body, const std::string& url) {
  std::string b = body;
  py::list out;
  for (auto& h : extract::extract_ids(b, url)) {
    py::dict d;
    d["raw_token"] = h.raw_token;
    d["offset"] = h.byte_offset;
    d["context"] = py::bytes(h.context_snippet);
    out.append(d);
  }
  return out;
}

std::vector<std::string> identities(const py::bytes& body) {
  std::string b = body;
  auto batch = extract::hits_to_observations(extract::extract_ids(b, "page"), core::DomainKey("page.invalid"),
                                             core::Provenance::live());
  std::vector<std::string> out;
  for (auto& o : batch.observations) out.push_back(o.id.canonical());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

py::dict stats(const std::vector<std::size_t>& dims, const std::string& convention) {
  auto conv = graph::parse_sd_convention(convention);
  if (!conv) throw py::value_error("convention must be sample or population");
  auto s = graph::dimension_stats(dims, *conv);
  py::dict d;
  d["n"] = s.n;
  d["min"] = s.min;
  d["max"] = s.max;
  d["mean"] = s.mean;
  d["sd"] = s.sd;
  d["sd_undefined"] = s.sd_undefined;
  return d;
}

std::string coverage(std::size_t with_id, std::size_t active) {
  return graph::coverage_from_counts(with_id, active).percentage_text();
}

// pairs of (registrable domain, raw id) -> networks as sorted member lists
std::vector<std::vector<std::string>> networks(const std::vector<std::pair<std::string, std::string>>& pairs) {
  std::vector<core::Observation> obs;
  for (auto& [d, raw] : pairs) {
    auto id = core::normalize_id(raw);
    if (!id) throw py::value_error("not a tracking id: " + raw);
    obs.push_back({core::DomainKey(d), *id, {}, core::Provenance::live(), "", ""});
  }
  std::vector<std::vector<std::string>> out;
  for (auto& n : graph::project_networks(graph::build_graph("py", obs))) {
    std::vector<std::string> m;
    for (auto& d : n.members) m.push_back(d.registrable);
    out.push_back(std::move(m));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_trackerlink, m) {
  m.def("run_cli", &run, py::arg("args"), "Run the command line in-process; returns (exit_code, stdout, stderr).");
  m.def("normalize_id", &normalize, py::arg("raw"), "Canonical identity for a raw id, or None when rejected.");
  m.def("extract_hits", &hits, py::arg("body"), py::arg("url") = "");
  m.def("extract_identities", &identities, py::arg("body"));
  m.def("dimension_stats", &stats, py::arg("dimensions"), py::arg("convention") = "sample");
  m.def("coverage_percent", &coverage, py::arg("seeds_with_id"), py::arg("active_seeds"));
  m.def("project_networks", &networks, py::arg("pairs"));
}
