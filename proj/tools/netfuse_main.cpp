// netfuse command-line pipeline: fuse multiple similarity layers with the
// cross diffusion process, attribute the fused topology to layers with
// (partial) distance correlation, and partition it into communities.

#include "netfuse/netfuse.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace netfuse;

namespace {

struct Overrides {
  std::optional<int> k;
  std::optional<int> iterations;
  std::optional<double> resolution;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

// Precedence: CLI flag > config field > built-in default.
void apply(PipelineConfig& config, const Overrides& o) {
  if (o.k) config.fusion.k = *o.k;
  if (o.iterations) config.fusion.iterations = *o.iterations;
  if (o.resolution) config.quality.resolution = *o.resolution;
  if (o.seed) config.quality.seed = *o.seed;
  if (o.out) config.output_dir = *o.out;
}

void add_override_flags(CLI::App* cmd, Overrides& o, bool with_quality = true) {
  cmd->add_option("--k", o.k, "Neighborhood size for the local kernel");
  cmd->add_option("--iterations", o.iterations, "Diffusion iteration count");
  if (with_quality) {
    cmd->add_option("--resolution", o.resolution, "Resolution parameter for community detection");
    cmd->add_option("--seed", o.seed, "Seed for the node visiting order");
  }
  cmd->add_option("--out", o.out, "Output directory (overrides config)");
}

PipelineConfig load(const std::string& config_path, const Overrides& o) {
  PipelineConfig config = load_config(config_path);
  apply(config, o);
  return config;
}

SimilarityMatrix fused_matrix(const PipelineConfig& config, const MultilayerNetwork& net,
                              const std::optional<std::string>& fused_path) {
  if (fused_path) {
    NodeSet nodes = net.nodes();
    return io::read_matrix_csv(*fused_path, nodes);
  }
  return fuse(net, config.fusion).fused;
}

void write_out(const PipelineConfig& config, const std::string& name, const std::string& content) {
  fs::create_directories(config.output_dir);
  const fs::path path = config.output_dir / name;
  io::write_file(path, content);
  std::cout << "wrote " << path.string() << "\n";
}

std::vector<std::string> split_labels(const std::string& arg) {
  std::vector<std::string> labels;
  std::string current;
  for (char c : arg) {
    if (c == ',') {
      if (!current.empty()) labels.push_back(current);
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) labels.push_back(current);
  return labels;
}

std::vector<int> parse_blocks(const std::string& arg) {
  std::vector<int> blocks;
  for (const auto& part : split_labels(arg)) blocks.push_back(std::stoi(part));
  return blocks;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netfuse: similarity network fusion, layer attribution and community detection"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides o;
  std::optional<std::string> fused_path;
  std::optional<std::string> partition_path;
  std::string nodes_arg;

  auto* cmd_run = app.add_subcommand("run", "Run the full pipeline");
  cmd_run->add_option("--config", config_path, "Pipeline config (JSON)")->required();
  add_override_flags(cmd_run, o);

  auto* cmd_layers = app.add_subcommand("build-layers", "Build and align the similarity layers");
  cmd_layers->add_option("--config", config_path)->required();
  cmd_layers->add_option("--out", o.out, "Output directory");

  auto* cmd_fuse = app.add_subcommand("fuse", "Fuse the layers into one network");
  cmd_fuse->add_option("--config", config_path)->required();
  add_override_flags(cmd_fuse, o, /*with_quality=*/false);

  auto* cmd_dcor = app.add_subcommand("dcor-report",
                                      "Distance-correlation report of fused network vs layers");
  cmd_dcor->add_option("--config", config_path)->required();
  cmd_dcor->add_option("--fused", fused_path, "Previously exported fused.csv (else fuse in-memory)");
  add_override_flags(cmd_dcor, o, /*with_quality=*/false);

  auto* cmd_cluster = app.add_subcommand("cluster", "Community detection on the fused network");
  cmd_cluster->add_option("--config", config_path)->required();
  cmd_cluster->add_option("--fused", fused_path, "Previously exported fused.csv");
  add_override_flags(cmd_cluster, o);

  auto* cmd_export = app.add_subcommand("export", "GraphML export of the fused network");
  cmd_export->add_option("--config", config_path)->required();
  cmd_export->add_option("--fused", fused_path, "Previously exported fused.csv");
  cmd_export->add_option("--partition", partition_path, "Previously exported partition.csv");
  add_override_flags(cmd_export, o);

  auto* cmd_trace = app.add_subcommand("trace", "Per-iteration fusion trace of a node subset");
  cmd_trace->add_option("--config", config_path)->required();
  cmd_trace->add_option("--nodes", nodes_arg, "Comma-separated node labels (>= 3)")->required();
  add_override_flags(cmd_trace, o, /*with_quality=*/false);

  // Synthetic fixture generation (planted communities).
  auto* cmd_synth = app.add_subcommand("synth", "Generate a planted multiplex as CSV fixtures");
  std::string blocks_arg = "10,10,10";
  PlantedSpec spec;
  std::string synth_out = "synth_out";
  cmd_synth->add_option("--blocks", blocks_arg, "Comma-separated block sizes");
  cmd_synth->add_option("--layers", spec.layers, "Number of layers");
  cmd_synth->add_option("--p-in", spec.p_in, "Within-block similarity");
  cmd_synth->add_option("--p-out", spec.p_out, "Between-block similarity");
  cmd_synth->add_option("--noise", spec.noise, "Noise standard deviation");
  cmd_synth->add_option("--agreement", spec.layer_agreement, "Fraction of structured layers");
  cmd_synth->add_option("--seed", spec.seed, "Generator seed");
  cmd_synth->add_option("--out", synth_out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (cmd_run->parsed()) {
      PipelineConfig config = load(config_path, o);
      PipelineRunSummary summary = run_pipeline(config);
      std::cout << "nodes: " << summary.num_nodes
                << "\ncommunities: " << summary.num_communities
                << "\nquality: " << io::format_double(summary.quality) << "\n";
      for (const auto& path : summary.outputs) std::cout << "wrote " << path.string() << "\n";
    } else if (cmd_layers->parsed()) {
      PipelineConfig config = load(config_path, o);
      BuiltLayers built = build_layers(config);
      std::string nodes_txt;
      for (const auto& label : built.network.nodes().labels()) nodes_txt += label + "\n";
      write_out(config, "nodes.txt", nodes_txt);
      for (std::size_t l = 0; l < built.network.num_layers(); ++l)
        write_out(config, "layer_" + built.network.layer_name(l) + ".csv",
                  io::matrix_to_csv(built.network.nodes(), built.network.layer(l).values()));
      for (std::size_t l = 0; l < built.dropped.size(); ++l)
        for (const auto& label : built.dropped[l])
          std::cerr << "dropped from " << built.network.layer_name(l) << ": " << label << "\n";
    } else if (cmd_fuse->parsed()) {
      PipelineConfig config = load(config_path, o);
      BuiltLayers built = build_layers(config);
      FusionResult result = fuse(built.network, config.fusion, config.keep_trace);
      write_out(config, "fused.csv",
                io::matrix_to_csv(built.network.nodes(), result.fused.values()));
      if (config.keep_trace && result.trace) {
        io::json doc;
        doc["nodes"] = io::to_json(built.network.nodes());
        doc["parameters"] = {
            {"k", config.fusion.k},
            {"iterations", config.fusion.iterations},
            {"normalization",
             config.fusion.normalization == NormalizationVariant::global_mass ? "global"
                                                                              : "row-stochastic"},
            {"symmetrize_each_step", config.fusion.symmetrize_each_step}};
        doc["iteration_deltas"] = result.trace->deltas;
        write_out(config, "fused.json", doc.dump(2) + "\n");
      }
    } else if (cmd_dcor->parsed()) {
      PipelineConfig config = load(config_path, o);
      BuiltLayers built = build_layers(config);
      SimilarityMatrix fused = fused_matrix(config, built.network, fused_path);
      CorrelationReport report = correlation_report(fused, built.network, config.embedding);
      for (const auto& format : config.report_formats)
        write_out(config, "dcor_report." + format,
                  format == "csv" ? io::report_to_csv(report) : io::report_to_text(report));
    } else if (cmd_cluster->parsed()) {
      PipelineConfig config = load(config_path, o);
      BuiltLayers built = build_layers(config);
      SimilarityMatrix fused = fused_matrix(config, built.network, fused_path);
      Partition partition = louvain(fused, config.quality);
      write_out(config, "partition.csv", io::partition_to_csv(partition));
      std::map<std::string, double> scores;
      scores["modularity"] = modularity(fused, partition, config.quality.resolution);
      scores["vos_quality"] = vos_quality(fused, partition, config.quality.resolution);
      write_out(config, "partition.json", io::partition_to_json(partition, scores));
      std::cout << "communities: " << partition.num_communities() << "\n";
    } else if (cmd_export->parsed()) {
      PipelineConfig config = load(config_path, o);
      BuiltLayers built = build_layers(config);
      SimilarityMatrix fused = fused_matrix(config, built.network, fused_path);
      Partition partition = partition_path
                                ? io::read_partition_csv(*partition_path, built.network.nodes())
                                : louvain(fused, config.quality);
      std::optional<io::NodeAttributeTable> attrs;
      if (config.node_attributes) attrs = io::read_node_attributes_csv(*config.node_attributes);
      write_out(config, "fused.graphml", export_graphml(fused, partition, attrs ? &*attrs : nullptr));
    } else if (cmd_trace->parsed()) {
      PipelineConfig config = load(config_path, o);
      BuiltLayers built = build_layers(config);
      std::vector<std::string> labels = split_labels(nodes_arg);
      FusionParams params = config.fusion;
      // Traces usually run on tiny subsets; clamp k to stay valid.
      if (params.k + 1 > static_cast<int>(labels.size())) {
        params.k = static_cast<int>(labels.size()) - 1;
        std::cerr << "note: k clamped to " << params.k << " for a subset of " << labels.size()
                  << " nodes\n";
      }
      TraceTable table = trace_subnetwork(built.network, labels, params);
      write_out(config, "trace.csv", trace_to_csv(table));
    } else if (cmd_synth->parsed()) {
      spec.blocks = parse_blocks(blocks_arg);
      PlantedMultiplex planted = generate(spec);
      PipelineConfig out_config;
      out_config.output_dir = synth_out;
      std::string nodes_txt;
      for (const auto& label : planted.network.nodes().labels()) nodes_txt += label + "\n";
      write_out(out_config, "nodes.txt", nodes_txt);
      for (std::size_t l = 0; l < planted.network.num_layers(); ++l)
        write_out(out_config, "layer_" + planted.network.layer_name(l) + ".csv",
                  io::matrix_to_csv(planted.network.nodes(), planted.network.layer(l).values()));
      write_out(out_config, "truth.csv", io::partition_to_csv(planted.ground_truth));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
