#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "trackerlink/graph/graph.hpp"

namespace trackerlink::cli {

enum class GraphFormat { Gexf, GraphMl, Dot, Json, CsvEdges };

std::string_view to_string(GraphFormat f);
std::string_view file_extension(GraphFormat f);
const std::vector<GraphFormat>& all_graph_formats();

struct ExportOptions {
  // Written into format metadata (GEXF lastmodifieddate, JSON graph attrs).
  // Pin it for byte-identical output.
  std::string timestamp;
  std::string creator = "trackerlink";
};

// Node ids are "domain:<registrable>" and "id:<canonical>". Nodes are
// written domains first, then ids, each sorted; edges sorted by (domain, id).
std::string node_id(const core::DomainKey& d);
std::string node_id(const core::TrackingId& id);

std::string export_graph(const graph::AttributionGraph& g, const std::vector<graph::Network>& networks,
                         GraphFormat format, const ExportOptions& opts);

/// Writes through a temp file; throws std::runtime_error on unwritable paths.
void write_output(const std::filesystem::path& path, const std::string& contents);

std::string xml_escape(std::string_view s);
std::string csv_field(std::string_view s);

}  // namespace trackerlink::cli
