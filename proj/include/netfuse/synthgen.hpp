#pragma once

// Synthetic multiplex generator with planted communities, for property-based
// testing of fusion and detection. Structured layers carry a two-level block
// similarity pattern perturbed by truncated Gaussian noise; the remaining
// layers are pure i.i.d. noise.

#include "netfuse/core.hpp"

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace netfuse {

struct InvalidSpec : Error { using Error::Error; };

struct PlantedSpec {
  std::vector<int> blocks;       ///< block sizes; their sum is n
  int layers = 3;                ///< m >= 2
  double p_in = 0.8;             ///< within-block base similarity
  double p_out = 0.2;            ///< between-block base similarity, p_out < p_in
  double noise = 0.0;            ///< stddev of the truncated Gaussian perturbation
  double layer_agreement = 1.0;  ///< fraction of layers carrying the planted structure
  std::uint64_t seed = 0;
};

struct PlantedMultiplex {
  MultilayerNetwork network;
  Partition ground_truth;
};

/// Generate a planted multiplex. Structured layers have expected within-block
/// similarity p_in and between-block p_out plus noise clipped to [0,1];
/// unstructured layers are i.i.d. uniform noise. All layers are symmetric
/// with unit diagonal. Deterministic given spec.seed.
inline PlantedMultiplex generate(const PlantedSpec& spec) {
  if (spec.blocks.empty()) throw InvalidSpec("synthgen: no blocks given");
  for (int b : spec.blocks)
    if (b <= 0) throw InvalidSpec("synthgen: block sizes must be positive");
  if (!(spec.p_out >= 0.0 && spec.p_out < spec.p_in && spec.p_in <= 1.0))
    throw InvalidSpec(detail::concat("synthgen: need 0 <= p_out < p_in <= 1, got p_out = ",
                                     spec.p_out, ", p_in = ", spec.p_in));
  if (spec.layers < 2) throw InvalidSpec("synthgen: needs m >= 2 layers");
  if (spec.noise < 0.0) throw InvalidSpec("synthgen: noise must be nonnegative");
  if (spec.layer_agreement < 0.0 || spec.layer_agreement > 1.0)
    throw InvalidSpec("synthgen: layer_agreement must be in [0,1]");

  std::size_t n = 0;
  std::vector<int> truth;
  for (std::size_t b = 0; b < spec.blocks.size(); ++b) {
    n += static_cast<std::size_t>(spec.blocks[b]);
    truth.insert(truth.end(), static_cast<std::size_t>(spec.blocks[b]), static_cast<int>(b));
  }

  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) labels[i] = "n" + std::to_string(i + 1);
  NodeSet nodes(labels);

  const int structured =
      std::min<int>(spec.layers, static_cast<int>(std::llround(spec.layer_agreement * spec.layers)));

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss(0.0, spec.noise > 0.0 ? spec.noise : 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  std::vector<SimilarityMatrix> layer_matrices;
  std::vector<std::string> layer_names;
  layer_matrices.reserve(static_cast<std::size_t>(spec.layers));
  for (int l = 0; l < spec.layers; ++l) {
    Matrix values = Matrix::Zero(static_cast<Index>(n), static_cast<Index>(n));
    const bool carries_structure = l < structured;
    for (std::size_t i = 0; i < n; ++i) {
      values(static_cast<Index>(i), static_cast<Index>(i)) = 1.0;
      for (std::size_t j = i + 1; j < n; ++j) {
        double v;
        if (carries_structure) {
          v = truth[i] == truth[j] ? spec.p_in : spec.p_out;
          if (spec.noise > 0.0) v = std::clamp(v + gauss(rng), 0.0, 1.0);
        } else {
          v = uniform(rng);
        }
        values(static_cast<Index>(i), static_cast<Index>(j)) = v;
        values(static_cast<Index>(j), static_cast<Index>(i)) = v;
      }
    }
    layer_matrices.emplace_back(nodes, std::move(values));
    layer_names.push_back("layer_" + std::to_string(l + 1));
  }

  return PlantedMultiplex{MultilayerNetwork(std::move(layer_matrices), std::move(layer_names)),
                          Partition(nodes, std::move(truth))};
}

}  // namespace netfuse
