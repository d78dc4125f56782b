#include "trackerlink/cli/export.hpp"

#include <map>
#include <sstream>

#include "json.hpp"
#include "trackerlink/store/store.hpp"

namespace trackerlink::cli {

using nlohmann::json;

namespace {

struct NodeRow {
  std::string id;
  std::string label;
  std::string type;  // domain | id
  bool seed = false;
  std::string category;
  std::string kind;
  std::string network;
};

struct EdgeRow {
  std::string source;
  std::string target;
  std::string provenance;
};

std::string provenance_text(const std::set<core::ProvenanceClass>& p) {
  std::string out;
  for (auto c : p) {
    if (!out.empty()) out += ';';
    out += to_string(c);
  }
  return out;
}

std::pair<std::vector<NodeRow>, std::vector<EdgeRow>> rows(const graph::AttributionGraph& g,
                                                           const std::vector<graph::Network>& networks) {
  std::map<std::string, std::string> domain_net;
  std::map<std::string, std::string> id_net;
  for (const auto& n : networks) {
    for (const auto& m : n.members) domain_net[m.registrable] = n.network_id;
    for (const auto& id : n.all_ids) id_net[id.canonical()] = n.network_id;
  }
  std::vector<NodeRow> nodes;
  for (const auto& d : g.domains) {
    auto it = domain_net.find(d.domain.registrable);
    nodes.push_back({node_id(d.domain), d.domain.registrable, "domain", d.is_seed, d.category.value_or(""), "",
                     it == domain_net.end() ? "" : it->second});
  }
  for (const auto& id : g.ids) {
    auto it = id_net.find(id.canonical());
    nodes.push_back({node_id(id), id.canonical(), "id", false, "", std::string(to_string(id.kind())),
                     it == id_net.end() ? "" : it->second});
  }
  std::vector<EdgeRow> edges;
  for (const auto& e : g.edges) edges.push_back({node_id(e.domain), node_id(e.id), provenance_text(e.provenance)});
  return {std::move(nodes), std::move(edges)};
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

std::string gexf(const std::vector<NodeRow>& nodes, const std::vector<EdgeRow>& edges, const ExportOptions& o) {
  std::ostringstream x;
  x << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<gexf xmlns=\"http://www.gexf.net/1.2draft\" xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
       "xsi:schemaLocation=\"http://www.gexf.net/1.2draft http://www.gexf.net/1.2draft/gexf.xsd\" "
       "version=\"1.2\">\n";
  x << "  <meta";
  // GEXF wants an xsd:date here.
  if (!o.timestamp.empty()) x << " lastmodifieddate=\"" << xml_escape(o.timestamp.substr(0, 10)) << "\"";
  x << ">\n    <creator>" << xml_escape(o.creator) << "</creator>\n"
    << "    <description>domain / tracking id attribution graph</description>\n  </meta>\n";
  x << "  <graph mode=\"static\" defaultedgetype=\"undirected\">\n"
    << "    <attributes class=\"node\">\n"
    << "      <attribute id=\"type\" title=\"type\" type=\"string\"/>\n"
    << "      <attribute id=\"seed\" title=\"seed\" type=\"boolean\"/>\n"
    << "      <attribute id=\"category\" title=\"category\" type=\"string\"/>\n"
    << "      <attribute id=\"kind\" title=\"kind\" type=\"string\"/>\n"
    << "      <attribute id=\"network\" title=\"network\" type=\"string\"/>\n"
    << "    </attributes>\n"
    << "    <attributes class=\"edge\">\n"
    << "      <attribute id=\"provenance\" title=\"provenance\" type=\"string\"/>\n"
    << "    </attributes>\n";
  x << "    <nodes>\n";
  for (const auto& n : nodes) {
    x << "      <node id=\"" << xml_escape(n.id) << "\" label=\"" << xml_escape(n.label) << "\">\n"
      << "        <attvalues>\n"
      << "          <attvalue for=\"type\" value=\"" << n.type << "\"/>\n"
      << "          <attvalue for=\"seed\" value=\"" << bool_text(n.seed) << "\"/>\n"
      << "          <attvalue for=\"category\" value=\"" << xml_escape(n.category) << "\"/>\n"
      << "          <attvalue for=\"kind\" value=\"" << n.kind << "\"/>\n"
      << "          <attvalue for=\"network\" value=\"" << xml_escape(n.network) << "\"/>\n"
      << "        </attvalues>\n      </node>\n";
  }
  x << "    </nodes>\n    <edges>\n";
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto& e = edges[i];
    x << "      <edge id=\"" << i << "\" source=\"" << xml_escape(e.source) << "\" target=\"" << xml_escape(e.target)
      << "\">\n        <attvalues>\n"
      << "          <attvalue for=\"provenance\" value=\"" << e.provenance << "\"/>\n"
      << "        </attvalues>\n      </edge>\n";
  }
  x << "    </edges>\n  </graph>\n</gexf>\n";
  return x.str();
}

std::string graphml(const std::vector<NodeRow>& nodes, const std::vector<EdgeRow>& edges, const ExportOptions& o) {
  std::ostringstream x;
  x << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
    << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\" "
       "xmlns:xsi=\"http://www.w3.org/2001/XMLSchema-instance\" "
       "xsi:schemaLocation=\"http://graphml.graphdrawing.org/xmlns "
       "http://graphml.graphdrawing.org/xmlns/1.0/graphml.xsd\">\n";
  x << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n"
    << "  <key id=\"type\" for=\"node\" attr.name=\"type\" attr.type=\"string\"/>\n"
    << "  <key id=\"seed\" for=\"node\" attr.name=\"seed\" attr.type=\"boolean\"/>\n"
    << "  <key id=\"category\" for=\"node\" attr.name=\"category\" attr.type=\"string\"/>\n"
    << "  <key id=\"kind\" for=\"node\" attr.name=\"kind\" attr.type=\"string\"/>\n"
    << "  <key id=\"network\" for=\"node\" attr.name=\"network\" attr.type=\"string\"/>\n"
    << "  <key id=\"provenance\" for=\"edge\" attr.name=\"provenance\" attr.type=\"string\"/>\n"
    << "  <key id=\"exported\" for=\"graph\" attr.name=\"exported\" attr.type=\"string\"/>\n";
  x << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
  if (!o.timestamp.empty()) x << "    <data key=\"exported\">" << xml_escape(o.timestamp) << "</data>\n";
  for (const auto& n : nodes) {
    x << "    <node id=\"" << xml_escape(n.id) << "\">"
      << "<data key=\"label\">" << xml_escape(n.label) << "</data>"
      << "<data key=\"type\">" << n.type << "</data>"
      << "<data key=\"seed\">" << bool_text(n.seed) << "</data>"
      << "<data key=\"category\">" << xml_escape(n.category) << "</data>"
      << "<data key=\"kind\">" << n.kind << "</data>"
      << "<data key=\"network\">" << xml_escape(n.network) << "</data></node>\n";
  }
  for (const auto& e : edges)
    x << "    <edge source=\"" << xml_escape(e.source) << "\" target=\"" << xml_escape(e.target) << "\">"
      << "<data key=\"provenance\">" << e.provenance << "</data></edge>\n";
  x << "  </graph>\n</graphml>\n";
  return x.str();
}

std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

std::string dot(const std::vector<NodeRow>& nodes, const std::vector<EdgeRow>& edges, const ExportOptions& o) {
  std::ostringstream x;
  x << "graph trackerlink {\n";
  if (!o.timestamp.empty()) x << "  exported=" << dot_quote(o.timestamp) << ";\n";
  for (const auto& n : nodes) {
    x << "  " << dot_quote(n.id) << " [label=" << dot_quote(n.label) << ", type=" << n.type
      << ", shape=" << (n.type == "domain" ? "ellipse" : "box") << ", seed=" << bool_text(n.seed);
    if (!n.category.empty()) x << ", category=" << dot_quote(n.category);
    if (!n.kind.empty()) x << ", kind=" << n.kind;
    if (!n.network.empty()) x << ", network=" << dot_quote(n.network);
    x << "];\n";
  }
  for (const auto& e : edges)
    x << "  " << dot_quote(e.source) << " -- " << dot_quote(e.target) << " [provenance=" << dot_quote(e.provenance)
      << "];\n";
  x << "}\n";
  return x.str();
}

std::string node_link_json(const std::vector<NodeRow>& nodes, const std::vector<EdgeRow>& edges,
                           const ExportOptions& o) {
  json j;
  j["directed"] = false;
  j["multigraph"] = false;
  j["graph"] = json::object();
  if (!o.timestamp.empty()) j["graph"]["exported"] = o.timestamp;
  j["nodes"] = json::array();
  for (const auto& n : nodes) {
    json node = {{"id", n.id}, {"label", n.label}, {"type", n.type}, {"seed", n.seed}};
    if (!n.category.empty()) node["category"] = n.category;
    if (!n.kind.empty()) node["kind"] = n.kind;
    if (!n.network.empty()) node["network"] = n.network;
    j["nodes"].push_back(std::move(node));
  }
  j["links"] = json::array();
  for (const auto& e : edges)
    j["links"].push_back({{"source", e.source}, {"target", e.target}, {"provenance", e.provenance}});
  return j.dump(2) + "\n";
}

std::string csv_edges(const graph::AttributionGraph& g) {
  std::ostringstream x;
  x << "domain,id,kind,provenance,domain_is_seed\n";
  std::set<std::string> seeds;
  for (const auto& d : g.domains)
    if (d.is_seed) seeds.insert(d.domain.registrable);
  for (const auto& e : g.edges)
    x << csv_field(e.domain.registrable) << ',' << csv_field(e.id.canonical()) << ',' << to_string(e.id.kind()) << ','
      << provenance_text(e.provenance) << ',' << bool_text(seeds.count(e.domain.registrable) > 0) << '\n';
  return x.str();
}

}  // namespace

std::string_view to_string(GraphFormat f) {
  switch (f) {
    case GraphFormat::Gexf: return "gexf";
    case GraphFormat::GraphMl: return "graphml";
    case GraphFormat::Dot: return "dot";
    case GraphFormat::Json: return "json";
    case GraphFormat::CsvEdges: return "csv";
  }
  return "gexf";
}

std::string_view file_extension(GraphFormat f) {
  switch (f) {
    case GraphFormat::Gexf: return ".gexf";
    case GraphFormat::GraphMl: return ".graphml";
    case GraphFormat::Dot: return ".dot";
    case GraphFormat::Json: return ".json";
    case GraphFormat::CsvEdges: return ".edges.csv";
  }
  return "";
}

const std::vector<GraphFormat>& all_graph_formats() {
  static const std::vector<GraphFormat> all{GraphFormat::Gexf, GraphFormat::GraphMl, GraphFormat::Dot,
                                            GraphFormat::Json, GraphFormat::CsvEdges};
  return all;
}

std::string node_id(const core::DomainKey& d) { return "domain:" + d.registrable; }
std::string node_id(const core::TrackingId& id) { return "id:" + id.canonical(); }

std::string export_graph(const graph::AttributionGraph& g, const std::vector<graph::Network>& networks,
                         GraphFormat format, const ExportOptions& opts) {
  if (format == GraphFormat::CsvEdges) return csv_edges(g);
  auto [nodes, edges] = rows(g, networks);
  switch (format) {
    case GraphFormat::Gexf: return gexf(nodes, edges, opts);
    case GraphFormat::GraphMl: return graphml(nodes, edges, opts);
    case GraphFormat::Dot: return dot(nodes, edges, opts);
    case GraphFormat::Json: return node_link_json(nodes, edges, opts);
    case GraphFormat::CsvEdges: break;
  }
  return {};
}

void write_output(const std::filesystem::path& path, const std::string& contents) {
  try {
    store::write_file_atomic(path, contents);
  } catch (const std::exception& e) {
    throw std::runtime_error("cannot write " + path.string() + ": " + e.what());
  }
}

std::string xml_escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace trackerlink::cli
