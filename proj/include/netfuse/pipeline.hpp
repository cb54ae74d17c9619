#pragma once

// End-to-end pipeline: configuration, ingestion of the per-layer inputs,
// fusion, correlation report, community detection and exports. Every stage
// is also callable on its own; stages communicate only through the core
// types. All randomness is seeded and recorded in the run manifest, so a
// rerun with the same config reproduces every output byte for byte.

#include "netfuse/communities.hpp"
#include "netfuse/core.hpp"
#include "netfuse/dcor.hpp"
#include "netfuse/fusion.hpp"
#include "netfuse/io.hpp"
#include "netfuse/layers.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace netfuse {

struct ConfigError : Error { using Error::Error; };
struct SubsetTooSmall : Error { using Error::Error; };

// ---------------------------------------------------------------------------
// Configuration

enum class BuilderKind {
  incidence,         ///< `node,entity` CSV -> set Jaccard
  weighted_jaccard,  ///< `node,entity,weight` CSV -> generalized Jaccard
  edge_list,         ///< `source,target,weight` CSV -> symmetric weights
  matrix             ///< precomputed dense similarity matrix CSV
};

struct LayerSpec {
  std::string name;
  std::filesystem::path path;
  BuilderKind builder = BuilderKind::matrix;
  EdgeListNormalization normalization = EdgeListNormalization::none;  // edge_list only
  bool allow_self_loops = false;                                      // edge_list only
};

struct PipelineConfig {
  std::vector<LayerSpec> layers;
  std::optional<std::filesystem::path> node_list;
  std::optional<std::filesystem::path> node_attributes;
  AlignPolicy align = AlignPolicy::strict;
  FusionParams fusion;
  bool keep_trace = false;
  QualityParams quality;
  DistanceEmbedding embedding = DistanceEmbedding::similarity_rows;
  std::filesystem::path output_dir = "out";
  std::vector<std::string> report_formats = {"csv", "txt"};
};

namespace detail {

template <typename Enum>
Enum parse_enum(const std::string& value, const char* field,
                std::initializer_list<std::pair<const char*, Enum>> table) {
  for (const auto& [name, e] : table)
    if (value == name) return e;
  std::string allowed;
  for (const auto& [name, e] : table) {
    if (!allowed.empty()) allowed += ", ";
    allowed += name;
  }
  throw ConfigError(concat("config: '", field, "' must be one of {", allowed, "}, got '", value, "'"));
}

}  // namespace detail

/// Parse a config document. Relative paths are resolved against `base_dir`
/// (normally the directory containing the config file).
inline PipelineConfig parse_config(const io::json& doc, const std::filesystem::path& base_dir) {
  if (!doc.is_object()) throw ConfigError("config: root must be a JSON object");
  PipelineConfig config;

  auto resolve = [&](const std::string& p) -> std::filesystem::path {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base_dir / path;
  };

  if (!doc.contains("layers") || !doc.at("layers").is_array())
    throw ConfigError("config: 'layers' array is required");
  std::set<std::string> names;
  for (const auto& entry : doc.at("layers")) {
    LayerSpec spec;
    if (!entry.contains("name") || !entry.contains("path"))
      throw ConfigError("config: every layer needs 'name' and 'path'");
    spec.name = entry.at("name").get<std::string>();
    spec.path = resolve(entry.at("path").get<std::string>());
    if (!names.insert(spec.name).second)
      throw ConfigError(detail::concat("config: duplicate layer name '", spec.name, "'"));
    spec.builder = detail::parse_enum<BuilderKind>(
        entry.value("builder", std::string("matrix")), "builder",
        {{"incidence", BuilderKind::incidence},
         {"weighted-jaccard", BuilderKind::weighted_jaccard},
         {"edge-list", BuilderKind::edge_list},
         {"matrix", BuilderKind::matrix}});
    spec.normalization = detail::parse_enum<EdgeListNormalization>(
        entry.value("normalization", std::string("none")), "normalization",
        {{"none", EdgeListNormalization::none},
         {"max", EdgeListNormalization::max},
         {"jaccard-pairs", EdgeListNormalization::jaccard_pairs}});
    spec.allow_self_loops = entry.value("allow_self_loops", false);
    config.layers.push_back(std::move(spec));
  }
  if (config.layers.size() < 2)
    throw ConfigError(detail::concat("config: needs >= 2 layers, got ", config.layers.size()));

  if (doc.contains("node_list")) config.node_list = resolve(doc.at("node_list").get<std::string>());
  if (doc.contains("node_attributes"))
    config.node_attributes = resolve(doc.at("node_attributes").get<std::string>());
  config.align = detail::parse_enum<AlignPolicy>(
      doc.value("align", std::string("strict")), "align",
      {{"strict", AlignPolicy::strict}, {"intersect", AlignPolicy::intersect}});

  if (doc.contains("fusion")) {
    const auto& f = doc.at("fusion");
    config.fusion.k = f.value("k", config.fusion.k);
    config.fusion.iterations = f.value("iterations", config.fusion.iterations);
    config.fusion.normalization = detail::parse_enum<NormalizationVariant>(
        f.value("normalization", std::string("global")), "fusion.normalization",
        {{"global", NormalizationVariant::global_mass},
         {"row-stochastic", NormalizationVariant::row_stochastic}});
    config.fusion.symmetrize_each_step =
        f.value("symmetrize_each_step", config.fusion.symmetrize_each_step);
    if (f.contains("convergence_tolerance") && !f.at("convergence_tolerance").is_null())
      config.fusion.convergence_tolerance = f.at("convergence_tolerance").get<double>();
    config.keep_trace = f.value("keep_trace", false);
  }
  if (config.fusion.k < 1) throw ConfigError("config: fusion.k must be positive");
  if (config.fusion.iterations < 1) throw ConfigError("config: fusion.iterations must be >= 1");

  if (doc.contains("quality")) {
    const auto& q = doc.at("quality");
    config.quality.objective = detail::parse_enum<Objective>(
        q.value("objective", std::string("modularity")), "quality.objective",
        {{"modularity", Objective::modularity}, {"vos", Objective::vos}});
    config.quality.resolution = q.value("resolution", config.quality.resolution);
    config.quality.seed = q.value("seed", config.quality.seed);
    config.quality.max_passes = q.value("max_passes", config.quality.max_passes);
  }
  if (config.quality.resolution <= 0.0)
    throw ConfigError("config: quality.resolution must be positive");

  if (doc.contains("dcor")) {
    config.embedding = detail::parse_enum<DistanceEmbedding>(
        doc.at("dcor").value("embedding", std::string("rows")), "dcor.embedding",
        {{"rows", DistanceEmbedding::similarity_rows},
         {"one-minus", DistanceEmbedding::one_minus}});
  }

  if (doc.contains("output_dir")) config.output_dir = resolve(doc.at("output_dir").get<std::string>());
  if (doc.contains("report_formats")) {
    config.report_formats = doc.at("report_formats").get<std::vector<std::string>>();
    for (const auto& f : config.report_formats)
      if (f != "csv" && f != "txt")
        throw ConfigError(detail::concat("config: unknown report format '", f, "'"));
  }
  return config;
}

inline PipelineConfig load_config(const std::filesystem::path& path) {
  io::json doc;
  try {
    doc = io::json::parse(io::read_file(path));
  } catch (const io::json::parse_error& e) {
    throw ConfigError(detail::concat(path.string(), ": ", e.what()));
  }
  return parse_config(doc, path.parent_path());
}

// ---------------------------------------------------------------------------
// Ingestion

struct InputRecord {
  std::string role;
  std::filesystem::path path;
  std::string digest;
  std::size_t bytes = 0;
};

struct BuiltLayers {
  MultilayerNetwork network;
  std::vector<std::vector<std::string>> dropped;  // per layer, under intersect
  std::vector<InputRecord> inputs;
};

/// Ingestion stage: construct every configured layer from its file and align
/// them into a multiplex.
inline BuiltLayers build_layers(const PipelineConfig& config) {
  std::vector<InputRecord> inputs;
  auto record = [&](const std::string& role, const std::filesystem::path& path) {
    const std::string bytes = io::read_file(path);
    inputs.push_back({role, path, io::fnv1a64_hex(bytes), bytes.size()});
  };

  std::optional<NodeSet> nodes;
  if (config.node_list) {
    nodes = io::read_node_list(*config.node_list);
    record("node_list", *config.node_list);
  }

  std::vector<SimilarityMatrix> layers;
  std::vector<std::string> names;
  for (const auto& spec : config.layers) {
    record("layer:" + spec.name, spec.path);
    switch (spec.builder) {
      case BuilderKind::incidence:
        layers.push_back(jaccard_from_incidence(io::read_incidence_csv(spec.path, nodes)));
        break;
      case BuilderKind::weighted_jaccard:
        layers.push_back(
            generalized_jaccard_from_weights(io::read_weighted_incidence_csv(spec.path, nodes)));
        break;
      case BuilderKind::edge_list:
        layers.push_back(similarity_from_edge_list(
            io::read_edge_list_csv(spec.path, nodes, spec.allow_self_loops), spec.normalization));
        break;
      case BuilderKind::matrix:
        layers.push_back(io::read_matrix_csv(spec.path, nodes));
        break;
    }
    names.push_back(spec.name);
  }

  AlignResult aligned = align_layers(layers, names, config.align);
  return BuiltLayers{std::move(aligned.network), std::move(aligned.dropped), std::move(inputs)};
}

// ---------------------------------------------------------------------------
// Subnetwork trace

/// Restrict every layer of a multiplex to a labeled subset, keeping the
/// subset's given order.
inline MultilayerNetwork restrict_network(const MultilayerNetwork& net,
                                          const std::vector<std::string>& labels) {
  NodeSet subset(labels);
  std::vector<Index> idx;
  idx.reserve(labels.size());
  for (const auto& label : labels) idx.push_back(static_cast<Index>(net.nodes().index_of(label)));
  std::vector<SimilarityMatrix> layers;
  layers.reserve(net.num_layers());
  for (std::size_t l = 0; l < net.num_layers(); ++l) {
    Matrix values(static_cast<Index>(labels.size()), static_cast<Index>(labels.size()));
    for (std::size_t i = 0; i < labels.size(); ++i)
      for (std::size_t j = 0; j < labels.size(); ++j)
        values(static_cast<Index>(i), static_cast<Index>(j)) =
            net.layer(l).values()(idx[i], idx[j]);
    layers.emplace_back(subset, std::move(values));
  }
  return MultilayerNetwork(std::move(layers), net.layer_names());
}

/// Per-iteration pairwise weights of a fused subnetwork. One row per
/// (layer, unordered pair) plus `overall` rows carrying the cross-layer mean
/// status; columns are input, iter_1..iter_N and the fused output value.
struct TraceTable {
  std::vector<std::string> stages;  ///< "input", "iter_1", ..., "output"
  struct Row {
    std::string layer;
    std::string source;
    std::string target;
    std::vector<double> weights;
  };
  std::vector<Row> rows;
};

/// Lay a fusion trace out as a pairwise table.
inline TraceTable make_trace_table(const MultilayerNetwork& net, const FusionResult& result) {
  const FusionTrace& trace = *result.trace;
  const std::size_t m = net.num_layers();
  const std::size_t steps = trace.statuses.size();  // initial + executed iterations

  TraceTable table;
  table.stages.push_back("input");
  for (std::size_t t = 1; t < steps; ++t) table.stages.push_back("iter_" + std::to_string(t));
  table.stages.push_back("output");

  const Index n = static_cast<Index>(net.nodes().size());
  auto emit_rows = [&](const std::string& layer_name, auto weight_at) {
    for (Index i = 0; i < n; ++i)
      for (Index j = i + 1; j < n; ++j) {
        TraceTable::Row row;
        row.layer = layer_name;
        row.source = net.nodes().label(static_cast<std::size_t>(i));
        row.target = net.nodes().label(static_cast<std::size_t>(j));
        for (std::size_t t = 0; t < steps; ++t) row.weights.push_back(weight_at(t, i, j));
        row.weights.push_back(result.fused.values()(i, j));
        table.rows.push_back(std::move(row));
      }
  };

  for (std::size_t l = 0; l < m; ++l)
    emit_rows(net.layer_name(l),
              [&, l](std::size_t t, Index i, Index j) { return trace.statuses[t][l](i, j); });
  emit_rows("overall", [&](std::size_t t, Index i, Index j) {
    double mean = 0.0;
    for (std::size_t l = 0; l < m; ++l) mean += trace.statuses[t][l](i, j);
    return mean / static_cast<double>(m);
  });
  return table;
}

inline TraceTable trace_subnetwork(const MultilayerNetwork& net,
                                   const std::vector<std::string>& labels,
                                   const FusionParams& params) {
  if (labels.size() < 3)
    throw SubsetTooSmall(detail::concat("trace_subnetwork: subset of size ", labels.size(),
                                        " (needs >= 3)"));
  MultilayerNetwork sub = restrict_network(net, labels);
  return make_trace_table(sub, fuse(sub, params, /*keep_trace=*/true));
}

inline std::string trace_to_csv(const TraceTable& table) {
  std::ostringstream os;
  os << "layer,source,target";
  for (const auto& stage : table.stages) os << ',' << stage;
  os << '\n';
  for (const auto& row : table.rows) {
    os << io::csv_quote(row.layer) << ',' << io::csv_quote(row.source) << ','
       << io::csv_quote(row.target);
    for (double w : row.weights) os << ',' << io::format_double(w);
    os << '\n';
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// GraphML export stage

/// Fused network as GraphML with community ids and pass-through numeric node
/// attributes. Wraps io::to_graphml with the pipeline's attribute handling.
inline std::string export_graphml(const SimilarityMatrix& W, const Partition& partition,
                                  const io::NodeAttributeTable* attrs = nullptr) {
  return io::to_graphml(W, &partition, attrs);
}

// ---------------------------------------------------------------------------
// Full run

struct PipelineRunSummary {
  std::filesystem::path output_dir;
  std::size_t num_nodes = 0;
  int num_communities = 0;
  double quality = 0.0;  ///< value of the configured objective on the final partition
  CorrelationReport report;
  std::vector<std::filesystem::path> outputs;
};

/// Execute the whole pipeline and write every artifact plus manifest.json
/// into config.output_dir. The manifest records parameters, seeds and input
/// digests; nothing in the outputs depends on wall-clock state.
inline PipelineRunSummary run_pipeline(const PipelineConfig& config) {
  namespace fs = std::filesystem;
  BuiltLayers built = build_layers(config);
  const MultilayerNetwork& net = built.network;

  std::optional<io::NodeAttributeTable> attrs;
  if (config.node_attributes) {
    attrs = io::read_node_attributes_csv(*config.node_attributes);
    const std::string bytes = io::read_file(*config.node_attributes);
    built.inputs.push_back({"node_attributes", *config.node_attributes,
                            io::fnv1a64_hex(bytes), bytes.size()});
  }

  FusionResult fusion = fuse(net, config.fusion, config.keep_trace);
  CorrelationReport report = correlation_report(fusion.fused, net, config.embedding);
  Partition partition = louvain(fusion.fused, config.quality);

  const double quality_value = config.quality.objective == Objective::modularity
                                   ? modularity(fusion.fused, partition, config.quality.resolution)
                                   : vos_quality(fusion.fused, partition, config.quality.resolution);

  fs::create_directories(config.output_dir);
  std::vector<std::pair<std::string, std::string>> artifacts;  // filename -> content

  artifacts.emplace_back("fused.csv",
                         io::matrix_to_csv(net.nodes(), fusion.fused.values()));
  artifacts.emplace_back("fused.graphml",
                         export_graphml(fusion.fused, partition, attrs ? &*attrs : nullptr));
  for (const auto& format : config.report_formats)
    artifacts.emplace_back("dcor_report." + format,
                           format == "csv" ? io::report_to_csv(report) : io::report_to_text(report));
  artifacts.emplace_back("partition.csv", io::partition_to_csv(partition));
  {
    std::map<std::string, double> scores;
    scores["modularity"] = modularity(fusion.fused, partition, config.quality.resolution);
    scores["vos_quality"] = vos_quality(fusion.fused, partition, config.quality.resolution);
    artifacts.emplace_back("partition.json", io::partition_to_json(partition, scores));
  }

  if (config.keep_trace && fusion.trace) {
    artifacts.emplace_back("trace.csv", trace_to_csv(make_trace_table(net, fusion)));
    io::json trace_doc;
    trace_doc["nodes"] = io::to_json(net.nodes());
    trace_doc["parameters"] = {
        {"k", config.fusion.k},
        {"iterations", config.fusion.iterations},
        {"normalization", config.fusion.normalization == NormalizationVariant::global_mass
                              ? "global"
                              : "row-stochastic"},
        {"symmetrize_each_step", config.fusion.symmetrize_each_step}};
    trace_doc["iteration_deltas"] = fusion.trace->deltas;
    artifacts.emplace_back("fused.json", trace_doc.dump(2) + "\n");
  }

  // Manifest goes last so it can carry output digests.
  io::json manifest;
  manifest["tool"] = {{"name", "netfuse"}, {"version", "0.1.0"}};
  manifest["parameters"] = {
      {"k", config.fusion.k},
      {"iterations", config.fusion.iterations},
      {"normalization", config.fusion.normalization == NormalizationVariant::global_mass
                            ? "global"
                            : "row-stochastic"},
      {"symmetrize_each_step", config.fusion.symmetrize_each_step},
      {"convergence_tolerance", config.fusion.convergence_tolerance
                                    ? io::json(*config.fusion.convergence_tolerance)
                                    : io::json(nullptr)},
      {"objective", config.quality.objective == Objective::modularity ? "modularity" : "vos"},
      {"resolution", config.quality.resolution},
      {"seed", config.quality.seed},
      {"max_passes", config.quality.max_passes},
      {"embedding", config.embedding == DistanceEmbedding::similarity_rows ? "rows" : "one-minus"},
      {"align", config.align == AlignPolicy::strict ? "strict" : "intersect"},
      {"keep_trace", config.keep_trace}};
  manifest["nodes"] = net.nodes().size();
  manifest["layer_names"] = net.layer_names();
  {
    io::json dropped = io::json::array();
    for (std::size_t l = 0; l < built.dropped.size(); ++l)
      dropped.push_back({{"layer", net.layer_name(l)}, {"labels", built.dropped[l]}});
    manifest["dropped_labels"] = std::move(dropped);
  }
  {
    io::json inputs = io::json::array();
    for (const auto& rec : built.inputs)
      inputs.push_back({{"role", rec.role},
                        {"path", rec.path.string()},
                        {"fnv1a64", rec.digest},
                        {"bytes", rec.bytes}});
    manifest["inputs"] = std::move(inputs);
  }
  manifest["results"] = {{"num_communities", partition.num_communities()},
                         {"quality", quality_value}};

  PipelineRunSummary summary;
  summary.output_dir = config.output_dir;
  summary.num_nodes = net.nodes().size();
  summary.num_communities = partition.num_communities();
  summary.quality = quality_value;
  summary.report = std::move(report);

  io::json output_records = io::json::array();
  for (const auto& [name, content] : artifacts) {
    const fs::path path = config.output_dir / name;
    io::write_file(path, content);
    output_records.push_back(
        {{"file", name}, {"fnv1a64", io::fnv1a64_hex(content)}, {"bytes", content.size()}});
    summary.outputs.push_back(path);
  }
  manifest["outputs"] = std::move(output_records);
  const fs::path manifest_path = config.output_dir / "manifest.json";
  io::write_file(manifest_path, manifest.dump(2) + "\n");
  summary.outputs.push_back(manifest_path);
  return summary;
}

}  // namespace netfuse
