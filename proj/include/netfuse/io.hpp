#pragma once

// File formats and serialization. CSV is minimally RFC-4180 aware (quoted
// fields, escaped quotes); all floating-point output uses 17 significant
// digits so values survive a write/read round trip bit-exactly.

#include "netfuse/core.hpp"
#include "netfuse/dcor.hpp"
#include "netfuse/layers.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace netfuse {

struct IoError : Error { using Error::Error; };
struct AttributeNodeMismatch : Error { using Error::Error; };

namespace io {

using json = nlohmann::json;

// ---------------------------------------------------------------------------
// Scalar formatting

/// 17 significant digits: lossless for IEEE-754 doubles.
inline std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// Non-cryptographic 64-bit FNV-1a content fingerprint, hex-encoded. Used by
/// the run manifest to record input/output identity.
inline std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(detail::concat("cannot open '", path.string(), "'"));
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void write_file(const std::filesystem::path& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(detail::concat("cannot write '", path.string(), "'"));
  out << content;
  if (!out) throw IoError(detail::concat("write failed for '", path.string(), "'"));
}

// ---------------------------------------------------------------------------
// CSV

/// Split one CSV record. Handles quoted fields and doubled quotes; trims a
/// trailing carriage return.
inline std::vector<std::string> split_csv_record(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  std::vector<std::string> fields;
  std::string current;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          current += '"';
          ++i;
        } else {
          quoted = false;
        }
      } else {
        current += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      fields.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  fields.push_back(std::move(current));
  return fields;
}

inline std::string csv_quote(std::string_view field) {
  if (field.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

inline double parse_double(const std::string& field, const std::filesystem::path& path,
                           std::size_t line_no) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(field, &pos);
    if (pos != field.size()) throw std::invalid_argument(field);
    return v;
  } catch (const std::exception&) {
    throw IoError(detail::concat(path.string(), ":", line_no, ": cannot parse number '", field, "'"));
  }
}

// ---------------------------------------------------------------------------
// Readers

/// Node list: one label per line, blank lines ignored. Fixes node ordering.
inline NodeSet read_node_list(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(detail::concat("cannot open node list '", path.string(), "'"));
  std::vector<std::string> labels;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty()) labels.push_back(line);
  }
  if (labels.empty()) throw IoError(detail::concat("node list '", path.string(), "' is empty"));
  return NodeSet(std::move(labels));
}

/// Incidence CSV (header `node,entity`): one row per membership. When a
/// NodeSet is supplied every node label must belong to it and nodes without
/// rows get empty sets; otherwise node order is first appearance.
inline IncidenceData read_incidence_csv(const std::filesystem::path& path,
                                        const std::optional<NodeSet>& nodes = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw IoError(detail::concat("cannot open incidence file '", path.string(), "'"));
  std::string line;
  if (!std::getline(in, line))
    throw IoError(detail::concat(path.string(), ": empty file"));
  auto header = split_csv_record(line);
  if (header.size() < 2 || header[0] != "node" || header[1] != "entity")
    throw IoError(detail::concat(path.string(), ": expected header 'node,entity'"));

  std::vector<std::string> order;
  std::map<std::string, std::set<std::string>> sets;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_record(line);
    if (fields.size() != 2)
      throw IoError(detail::concat(path.string(), ":", line_no, ": expected 2 fields, got ",
                                   fields.size()));
    if (fields[0].empty())
      throw IoError(detail::concat(path.string(), ":", line_no, ": empty node label"));
    if (nodes && !nodes->contains(fields[0]))
      throw UnknownLabel(detail::concat(path.string(), ":", line_no, ": unknown node label '",
                                        fields[0], "'"));
    auto [it, inserted] = sets.emplace(fields[0], std::set<std::string>{});
    if (inserted) order.push_back(fields[0]);
    if (!fields[1].empty()) it->second.insert(fields[1]);
  }

  NodeSet node_set = nodes ? *nodes : NodeSet(order);
  std::vector<std::set<std::string>> entity_sets(node_set.size());
  for (auto& [label, s] : sets) entity_sets[node_set.index_of(label)] = std::move(s);
  return IncidenceData(std::move(node_set), std::move(entity_sets));
}

/// Weighted incidence CSV (header `node,entity,weight` or
/// `source,target,weight`): per-node weight vectors over a common entity
/// universe, for the generalized Jaccard builder.
inline WeightedIncidence read_weighted_incidence_csv(
    const std::filesystem::path& path, const std::optional<NodeSet>& nodes = std::nullopt) {
  std::ifstream in(path);
  if (!in) throw IoError(detail::concat("cannot open weighted incidence file '", path.string(), "'"));
  std::string line;
  if (!std::getline(in, line)) throw IoError(detail::concat(path.string(), ": empty file"));
  auto header = split_csv_record(line);
  const bool ok = header.size() >= 3 &&
                  ((header[0] == "node" && header[1] == "entity") ||
                   (header[0] == "source" && header[1] == "target")) &&
                  header[2] == "weight";
  if (!ok)
    throw IoError(detail::concat(path.string(),
                                 ": expected header 'node,entity,weight' or 'source,target,weight'"));

  std::vector<std::string> order;
  std::map<std::string, std::map<std::string, double>> vectors;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_record(line);
    if (fields.size() != 3)
      throw IoError(detail::concat(path.string(), ":", line_no, ": expected 3 fields"));
    if (nodes && !nodes->contains(fields[0]))
      throw UnknownLabel(detail::concat(path.string(), ":", line_no, ": unknown node label '",
                                        fields[0], "'"));
    const double w = parse_double(fields[2], path, line_no);
    auto [it, inserted] = vectors.emplace(fields[0], std::map<std::string, double>{});
    if (inserted) order.push_back(fields[0]);
    it->second[fields[1]] += w;
  }

  NodeSet node_set = nodes ? *nodes : NodeSet(order);
  std::vector<std::map<std::string, double>> weights(node_set.size());
  for (auto& [label, vec] : vectors) weights[node_set.index_of(label)] = std::move(vec);
  return WeightedIncidence(std::move(node_set), std::move(weights));
}

/// Edge-list CSV (header `source,target,weight`). Without an explicit
/// NodeSet, labels are collected in first-appearance order.
inline WeightedEdgeList read_edge_list_csv(const std::filesystem::path& path,
                                           const std::optional<NodeSet>& nodes = std::nullopt,
                                           bool allow_self_loops = false) {
  std::ifstream in(path);
  if (!in) throw IoError(detail::concat("cannot open edge list '", path.string(), "'"));
  std::string line;
  if (!std::getline(in, line)) throw IoError(detail::concat(path.string(), ": empty file"));
  auto header = split_csv_record(line);
  if (header.size() < 3 || header[0] != "source" || header[1] != "target" || header[2] != "weight")
    throw IoError(detail::concat(path.string(), ": expected header 'source,target,weight'"));

  std::vector<std::string> order;
  std::set<std::string> seen;
  std::vector<WeightedEdgeList::Edge> edges;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_record(line);
    if (fields.size() != 3)
      throw IoError(detail::concat(path.string(), ":", line_no, ": expected 3 fields"));
    const double w = parse_double(fields[2], path, line_no);
    for (int s = 0; s < 2; ++s) {
      const std::string& label = fields[static_cast<std::size_t>(s)];
      if (label.empty())
        throw IoError(detail::concat(path.string(), ":", line_no, ": empty node label"));
      if (nodes) {
        if (!nodes->contains(label))
          throw UnknownLabel(detail::concat(path.string(), ":", line_no,
                                            ": unknown node label '", label, "'"));
      } else if (seen.insert(label).second) {
        order.push_back(label);
      }
    }
    edges.push_back({fields[0], fields[1], w});
  }
  NodeSet node_set = nodes ? *nodes : NodeSet(order);
  return WeightedEdgeList(std::move(node_set), std::move(edges), allow_self_loops);
}

/// Labeled dense matrix CSV. Accepts a header row of labels with or without
/// a leading corner cell, each data row led by its label; or a plain numeric
/// grid when `nodes` supplies the labels externally.
inline SimilarityMatrix read_matrix_csv(const std::filesystem::path& path,
                                        const std::optional<NodeSet>& nodes = std::nullopt,
                                        double symmetry_tolerance = 1e-9) {
  std::ifstream in(path);
  if (!in) throw IoError(detail::concat("cannot open matrix file '", path.string(), "'"));
  std::vector<std::vector<std::string>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    rows.push_back(split_csv_record(line));
  }
  if (rows.empty()) throw IoError(detail::concat(path.string(), ": empty file"));

  auto is_number = [](const std::string& s) {
    if (s.empty()) return false;
    char* end = nullptr;
    std::strtod(s.c_str(), &end);
    return end == s.c_str() + s.size();
  };

  const bool labeled = !is_number(rows[0].back());
  std::vector<std::string> labels;
  std::size_t first_data_row = 0, first_data_col = 0;

  if (labeled) {
    first_data_row = 1;
    first_data_col = 1;
    // Header may or may not carry a corner cell; data rows always lead with
    // their label, so the label count equals the data row count.
    const std::size_t n = rows.size() - 1;
    const auto& header = rows[0];
    if (header.size() == n + 1) {
      labels.assign(header.begin() + 1, header.end());
    } else if (header.size() == n) {
      labels.assign(header.begin(), header.end());
    } else {
      throw IoError(detail::concat(path.string(), ": header has ", header.size(),
                                   " cells for ", n, " data rows"));
    }
  } else {
    if (!nodes)
      throw IoError(detail::concat(path.string(),
                                   ": unlabeled matrix needs an external node list"));
    labels = nodes->labels();
  }

  const std::size_t n = labels.size();
  if (rows.size() - first_data_row != n)
    throw IoError(detail::concat(path.string(), ": expected ", n, " data rows, got ",
                                 rows.size() - first_data_row));
  Matrix values(static_cast<Index>(n), static_cast<Index>(n));
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[first_data_row + i];
    if (row.size() != n + first_data_col)
      throw IoError(detail::concat(path.string(), ": row ", first_data_row + i + 1, " has ",
                                   row.size(), " cells, expected ", n + first_data_col));
    if (labeled && row[0] != labels[i])
      throw IoError(detail::concat(path.string(), ": row label '", row[0],
                                   "' does not match header label '", labels[i], "'"));
    for (std::size_t j = 0; j < n; ++j)
      values(static_cast<Index>(i), static_cast<Index>(j)) =
          parse_double(row[first_data_col + j], path, first_data_row + i + 1);
  }

  NodeSet node_set = nodes ? *nodes : NodeSet(labels);
  if (labeled && nodes && labels != nodes->labels())
    throw IoError(detail::concat(path.string(), ": matrix labels disagree with the node list"));
  return validate_similarity(values, std::move(node_set), symmetry_tolerance);
}

/// Partition CSV (header `node,community`): one row per node of `nodes`.
inline Partition read_partition_csv(const std::filesystem::path& path, const NodeSet& nodes) {
  std::ifstream in(path);
  if (!in) throw IoError(detail::concat("cannot open partition file '", path.string(), "'"));
  std::string line;
  if (!std::getline(in, line)) throw IoError(detail::concat(path.string(), ": empty file"));
  auto header = split_csv_record(line);
  if (header.size() < 2 || header[0] != "node" || header[1] != "community")
    throw IoError(detail::concat(path.string(), ": expected header 'node,community'"));
  std::vector<int> membership(nodes.size(), -1);
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_record(line);
    if (fields.size() != 2)
      throw IoError(detail::concat(path.string(), ":", line_no, ": expected 2 fields"));
    const std::size_t i = nodes.index_of(fields[0]);
    membership[i] = static_cast<int>(parse_double(fields[1], path, line_no));
  }
  for (std::size_t i = 0; i < membership.size(); ++i)
    if (membership[i] < 0)
      throw IoError(detail::concat(path.string(), ": no community for node '", nodes.label(i), "'"));
  return Partition(nodes, std::move(membership));
}

// ---------------------------------------------------------------------------
// Writers

/// Dense labeled matrix CSV: corner cell `node`, label header, one labeled
/// row per node, 17-significant-digit values.
inline std::string matrix_to_csv(const NodeSet& nodes, const Matrix& values) {
  std::ostringstream os;
  os << "node";
  for (const auto& label : nodes.labels()) os << ',' << csv_quote(label);
  os << '\n';
  for (Index i = 0; i < values.rows(); ++i) {
    os << csv_quote(nodes.label(static_cast<std::size_t>(i)));
    for (Index j = 0; j < values.cols(); ++j) os << ',' << format_double(values(i, j));
    os << '\n';
  }
  return os.str();
}

inline std::string partition_to_csv(const Partition& p) {
  std::ostringstream os;
  os << "node,community\n";
  for (std::size_t i = 0; i < p.nodes().size(); ++i)
    os << csv_quote(p.nodes().label(i)) << ',' << p.community(i) << '\n';
  return os.str();
}

/// Partition JSON: per-community member lists plus quality scores.
inline std::string partition_to_json(const Partition& p,
                                     const std::map<std::string, double>& quality_scores) {
  json doc;
  doc["num_communities"] = p.num_communities();
  json communities = json::array();
  for (int c = 0; c < p.num_communities(); ++c) {
    json entry;
    entry["id"] = c;
    json members = json::array();
    for (std::size_t i : p.members(c)) members.push_back(p.nodes().label(i));
    entry["members"] = std::move(members);
    communities.push_back(std::move(entry));
  }
  doc["communities"] = std::move(communities);
  for (const auto& [name, value] : quality_scores) doc["quality"][name] = value;
  return doc.dump(2) + "\n";
}

/// Correlation report CSV: one sqrt(R_d) row for
/// the fused network, then one sqrt(R_d*) row per conditioning layer with
/// `-` on the conditioned column.
inline std::string report_to_csv(const CorrelationReport& report) {
  const std::size_t m = report.layer_names.size();
  std::ostringstream os;
  os << "row,stat";
  for (const auto& name : report.layer_names) os << ',' << csv_quote(name);
  os << '\n';
  os << "F,sqrt_Rd";
  for (std::size_t l = 0; l < m; ++l) os << ',' << format_double(report.sqrt_rd[l]);
  os << '\n';
  for (std::size_t c = 0; c < m; ++c) {
    os << "F|" << csv_quote(report.layer_names[c]) << ",sqrt_Rd_star";
    for (std::size_t l = 0; l < m; ++l) {
      if (l == c) os << ",-";
      else os << ',' << format_double(report.sqrt_rd_star[l][c]);
    }
    os << '\n';
  }
  return os.str();
}

/// Aligned-column plain-text rendering of the same table.
inline std::string report_to_text(const CorrelationReport& report, int value_digits = 4) {
  const std::size_t m = report.layer_names.size();
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"", ""});
  for (const auto& name : report.layer_names) cells[0].push_back(name);

  auto fmt = [&](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.*f", value_digits, v);
    return std::string(buf);
  };

  std::vector<std::string> rd_row = {"F", "sqrt(Rd)"};
  for (std::size_t l = 0; l < m; ++l) rd_row.push_back(fmt(report.sqrt_rd[l]));
  cells.push_back(std::move(rd_row));
  for (std::size_t c = 0; c < m; ++c) {
    std::vector<std::string> row = {"F|" + report.layer_names[c], "sqrt(Rd*)"};
    for (std::size_t l = 0; l < m; ++l)
      row.push_back(l == c ? "-" : fmt(report.sqrt_rd_star[l][c]));
    cells.push_back(std::move(row));
  }

  std::vector<std::size_t> widths(cells[0].size(), 0);
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) widths[i] = std::max(widths[i], row[i].size());
  std::ostringstream os;
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) os << "  ";
      os << row[i] << std::string(widths[i] - row[i].size(), ' ');
    }
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// GraphML

/// Optional per-node numeric attributes (e.g. impact factor), keyed by node
/// label. Every labeled row must name a node of the target NodeSet.
struct NodeAttributeTable {
  std::vector<std::string> attribute_names;
  std::map<std::string, std::vector<double>> values_by_node;  // label -> one value per attribute
};

/// Attribute CSV: header `node,<name>...`, numeric cells (empty = missing,
/// encoded as NaN and skipped on export).
inline NodeAttributeTable read_node_attributes_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError(detail::concat("cannot open attribute file '", path.string(), "'"));
  std::string line;
  if (!std::getline(in, line)) throw IoError(detail::concat(path.string(), ": empty file"));
  auto header = split_csv_record(line);
  if (header.size() < 2 || header[0] != "node")
    throw IoError(detail::concat(path.string(), ": expected header 'node,<attribute>...'"));
  NodeAttributeTable table;
  table.attribute_names.assign(header.begin() + 1, header.end());
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    auto fields = split_csv_record(line);
    if (fields.size() != header.size())
      throw IoError(detail::concat(path.string(), ":", line_no, ": expected ", header.size(),
                                   " fields"));
    std::vector<double> row;
    for (std::size_t a = 1; a < fields.size(); ++a)
      row.push_back(fields[a].empty() ? std::numeric_limits<double>::quiet_NaN()
                                      : parse_double(fields[a], path, line_no));
    if (!table.values_by_node.emplace(fields[0], std::move(row)).second)
      throw IoError(detail::concat(path.string(), ":", line_no, ": duplicate node '", fields[0], "'"));
  }
  return table;
}

inline std::string xml_escape(std::string_view s) {
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

/// GraphML document for the fused network: undirected, one edge per unordered
/// pair with weight > 0 (zero-weight pairs are omitted), double `weight` edge
/// attribute, optional community id and numeric node attributes.
inline std::string to_graphml(const SimilarityMatrix& W, const Partition* partition = nullptr,
                              const NodeAttributeTable* attrs = nullptr) {
  if (partition && partition->nodes() != W.nodes())
    throw DimensionMismatch("to_graphml: partition node set differs from matrix node set");
  if (attrs)
    for (const auto& [label, row] : attrs->values_by_node) {
      if (!W.nodes().contains(label))
        throw AttributeNodeMismatch(detail::concat("to_graphml: attribute row for unknown node '",
                                                   label, "'"));
      if (row.size() != attrs->attribute_names.size())
        throw AttributeNodeMismatch(detail::concat("to_graphml: attribute row for '", label,
                                                   "' has ", row.size(), " values"));
    }

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
     << "  <key id=\"label\" for=\"node\" attr.name=\"label\" attr.type=\"string\"/>\n";
  if (partition)
    os << "  <key id=\"community\" for=\"node\" attr.name=\"community\" attr.type=\"int\"/>\n";
  if (attrs)
    for (std::size_t a = 0; a < attrs->attribute_names.size(); ++a)
      os << "  <key id=\"attr" << a << "\" for=\"node\" attr.name=\""
         << xml_escape(attrs->attribute_names[a]) << "\" attr.type=\"double\"/>\n";
  os << "  <key id=\"weight\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
     << "  <graph id=\"fused\" edgedefault=\"undirected\">\n";

  for (std::size_t i = 0; i < W.nodes().size(); ++i) {
    const std::string& label = W.nodes().label(i);
    os << "    <node id=\"n" << i << "\">\n"
       << "      <data key=\"label\">" << xml_escape(label) << "</data>\n";
    if (partition)
      os << "      <data key=\"community\">" << partition->community(i) << "</data>\n";
    if (attrs) {
      auto it = attrs->values_by_node.find(label);
      if (it != attrs->values_by_node.end())
        for (std::size_t a = 0; a < it->second.size(); ++a)
          if (!std::isnan(it->second[a]))
            os << "      <data key=\"attr" << a << "\">" << format_double(it->second[a])
               << "</data>\n";
    }
    os << "    </node>\n";
  }

  std::size_t edge_id = 0;
  for (Index i = 0; i < W.values().rows(); ++i)
    for (Index j = i + 1; j < W.values().cols(); ++j) {
      const double w = W.values()(i, j);
      if (w <= 0.0) continue;
      os << "    <edge id=\"e" << edge_id++ << "\" source=\"n" << i << "\" target=\"n" << j
         << "\">\n"
         << "      <data key=\"weight\">" << format_double(w) << "</data>\n"
         << "    </edge>\n";
    }

  os << "  </graph>\n</graphml>\n";
  return os.str();
}

// ---------------------------------------------------------------------------
// JSON serialization of the core types (bit-exact round trips)

inline json to_json(const NodeSet& nodes) { return json(nodes.labels()); }

inline NodeSet node_set_from_json(const json& j) {
  return NodeSet(j.get<std::vector<std::string>>());
}

inline json matrix_values_to_json(const Matrix& values) {
  json rows = json::array();
  for (Index i = 0; i < values.rows(); ++i) {
    json row = json::array();
    for (Index j = 0; j < values.cols(); ++j) row.push_back(values(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Matrix matrix_values_from_json(const json& j) {
  const auto n = static_cast<Index>(j.size());
  Matrix values(n, n == 0 ? 0 : static_cast<Index>(j.at(0).size()));
  for (Index i = 0; i < n; ++i)
    for (Index k = 0; k < values.cols(); ++k)
      values(i, k) = j.at(static_cast<std::size_t>(i)).at(static_cast<std::size_t>(k)).get<double>();
  return values;
}

inline json to_json(const SimilarityMatrix& S) {
  return json{{"nodes", to_json(S.nodes())}, {"values", matrix_values_to_json(S.values())}};
}

inline SimilarityMatrix similarity_from_json(const json& j) {
  return SimilarityMatrix(node_set_from_json(j.at("nodes")),
                          matrix_values_from_json(j.at("values")));
}

inline json to_json(const DistanceMatrix& D) {
  return json{{"nodes", to_json(D.nodes())}, {"values", matrix_values_to_json(D.values())}};
}

inline DistanceMatrix distance_from_json(const json& j) {
  return DistanceMatrix(node_set_from_json(j.at("nodes")),
                        matrix_values_from_json(j.at("values")));
}

inline json to_json(const MultilayerNetwork& net) {
  json layers = json::array();
  for (std::size_t l = 0; l < net.num_layers(); ++l)
    layers.push_back(matrix_values_to_json(net.layer(l).values()));
  return json{{"nodes", to_json(net.nodes())},
              {"layer_names", net.layer_names()},
              {"layers", std::move(layers)}};
}

inline MultilayerNetwork multilayer_from_json(const json& j) {
  NodeSet nodes = node_set_from_json(j.at("nodes"));
  std::vector<SimilarityMatrix> layers;
  for (const auto& values : j.at("layers"))
    layers.emplace_back(nodes, matrix_values_from_json(values));
  return MultilayerNetwork(std::move(layers), j.at("layer_names").get<std::vector<std::string>>());
}

inline json to_json(const Partition& p) {
  return json{{"nodes", to_json(p.nodes())}, {"membership", p.membership()}};
}

inline Partition partition_from_json(const json& j) {
  return Partition(node_set_from_json(j.at("nodes")), j.at("membership").get<std::vector<int>>());
}

}  // namespace io
}  // namespace netfuse
