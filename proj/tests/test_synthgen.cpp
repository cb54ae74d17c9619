#include "netfuse/synthgen.hpp"

#include "netfuse/communities.hpp"
#include "netfuse/fusion.hpp"

#include "support/helpers.hpp"

#include <catch2/catch_amalgamated.hpp>

using namespace netfuse;

TEST_CASE("noise-free fully agreeing layers are exact block matrices") {
  PlantedSpec spec;
  spec.blocks = {3, 2};
  spec.layers = 2;
  spec.p_in = 0.9;
  spec.p_out = 0.1;
  spec.noise = 0.0;
  PlantedMultiplex planted = generate(spec);
  for (std::size_t l = 0; l < 2; ++l) {
    const Matrix& S = planted.network.layer(l).values();
    for (Index i = 0; i < 5; ++i)
      for (Index j = 0; j < 5; ++j) {
        if (i == j) CHECK(S(i, j) == 1.0);
        else if ((i < 3) == (j < 3)) CHECK(S(i, j) == 0.9);
        else CHECK(S(i, j) == 0.1);
      }
  }
  CHECK(planted.ground_truth.membership() == std::vector<int>{0, 0, 0, 1, 1});
}

TEST_CASE("generation is deterministic given the seed") {
  PlantedSpec spec;
  spec.blocks = {4, 4};
  spec.noise = 0.2;
  spec.seed = 99;
  PlantedMultiplex a = generate(spec);
  PlantedMultiplex b = generate(spec);
  for (std::size_t l = 0; l < a.network.num_layers(); ++l)
    CHECK(helpers::bit_equal(a.network.layer(l).values(), b.network.layer(l).values()));

  spec.seed = 100;
  PlantedMultiplex c = generate(spec);
  CHECK(!helpers::bit_equal(a.network.layer(0).values(), c.network.layer(0).values()));
}

TEST_CASE("noise keeps entries inside [0,1] with unit diagonal") {
  PlantedSpec spec;
  spec.blocks = {5, 5};
  spec.noise = 0.8;  // heavy: exercises the clipping
  spec.seed = 3;
  PlantedMultiplex planted = generate(spec);
  for (std::size_t l = 0; l < planted.network.num_layers(); ++l) {
    const Matrix& S = planted.network.layer(l).values();
    CHECK(S.minCoeff() >= 0.0);
    CHECK(S.maxCoeff() <= 1.0);
    for (Index i = 0; i < S.rows(); ++i) CHECK(S(i, i) == 1.0);
  }
}

TEST_CASE("layer_agreement controls how many layers carry structure") {
  PlantedSpec spec;
  spec.blocks = {4, 4};
  spec.layers = 4;
  spec.p_in = 1.0;
  spec.p_out = 0.0;
  spec.noise = 0.0;
  spec.layer_agreement = 0.5;
  spec.seed = 8;
  PlantedMultiplex planted = generate(spec);
  // first two layers exact block matrices, last two i.i.d. noise
  CHECK(helpers::bit_equal(planted.network.layer(0).values(), planted.network.layer(1).values()));
  CHECK(!helpers::bit_equal(planted.network.layer(2).values(), planted.network.layer(0).values()));
  CHECK(!helpers::bit_equal(planted.network.layer(2).values(), planted.network.layer(3).values()));
}

TEST_CASE("invalid specs are rejected") {
  PlantedSpec spec;
  spec.blocks = {};
  CHECK_THROWS_AS(generate(spec), InvalidSpec);
  spec.blocks = {3, 0};
  CHECK_THROWS_AS(generate(spec), InvalidSpec);
  spec.blocks = {3, 3};
  spec.p_in = 0.2;
  spec.p_out = 0.5;
  CHECK_THROWS_AS(generate(spec), InvalidSpec);
  spec.p_in = 0.8;
  spec.p_out = 0.2;
  spec.layers = 1;
  CHECK_THROWS_AS(generate(spec), InvalidSpec);
  spec.layers = 2;
  spec.noise = -0.1;
  CHECK_THROWS_AS(generate(spec), InvalidSpec);
  spec.noise = 0.0;
  spec.layer_agreement = 1.5;
  CHECK_THROWS_AS(generate(spec), InvalidSpec);
}

TEST_CASE("fusing structured layers then detecting recovers the planted blocks") {
  PlantedSpec spec;
  spec.blocks = {5, 5};
  spec.layers = 3;
  spec.p_in = 0.9;
  spec.p_out = 0.1;
  spec.noise = 0.05;
  spec.seed = 12;
  PlantedMultiplex planted = generate(spec);
  FusionParams fusion_params;
  fusion_params.k = 4;
  FusionResult fused = fuse(planted.network, fusion_params);
  QualityParams quality;
  quality.seed = 1;
  Partition p = louvain(fused.fused, quality);
  CHECK(adjusted_rand_index(p, planted.ground_truth) == 1.0);
}
