// Config parsing, typed getters, experiment assembly, and the resolved
// echo's fixpoint property.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdio>
#include <string>
#include <vector>

#include "gnnsim/config.hpp"
#include "gnnsim/csr_graph.hpp"
#include "gnnsim/kronecker.hpp"

using namespace gnnsim;

TEST_CASE("parser strips comments and whitespace and keeps the last write") {
  const KvConfig cfg = KvConfig::parse_text(
      "# a full-line comment\n"
      "\n"
      "  a.b = 1  # trailing note\n"
      "c = hello world \n"
      "a.b = 2\n");
  CHECK(cfg.get_u64("a.b", 0) == 2);
  CHECK(cfg.get_string("c", "") == "hello world");
  CHECK(cfg.get_string("missing", "fallback") == "fallback");
}

TEST_CASE("parser reports the offending line") {
  try {
    KvConfig::parse_text("ok = 1\nnot a pair\n");
    FAIL("no throw");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 2);
  }
  try {
    KvConfig::parse_text("= value\n");
    FAIL("no throw");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 1);
  }
}

TEST_CASE("set layers an override on top of parsed text") {
  KvConfig cfg = KvConfig::parse_text("x = 1\n");
  cfg.set("x", " 5 ");
  cfg.set("y", "2");
  CHECK(cfg.get_u64("x", 0) == 5);
  CHECK(cfg.get_u64("y", 0) == 2);
}

TEST_CASE("typed getters parse and reject") {
  const KvConfig cfg = KvConfig::parse_text(
      "hex = 0x10\n"
      "dec = 123\n"
      "neg = -3\n"
      "junk = 12abc\n"
      "wide = 0x100000000\n"
      "pi = 2.5e3\n"
      "yes = yes\n"
      "off = 0\n"
      "maybe = maybe\n"
      "list = 25, 10\n"
      "badlist = 3,x\n");

  CHECK(cfg.get_u64("hex", 0) == 16);
  CHECK(cfg.get_u32("dec", 0) == 123);
  CHECK(cfg.get_double("pi", 0) == doctest::Approx(2500.0));
  CHECK(cfg.get_bool("yes", false));
  CHECK(!cfg.get_bool("off", true));
  CHECK(cfg.get_u32_list("list", {}) == std::vector<std::uint32_t>{25, 10});
  CHECK(cfg.get_u64("absent", 7) == 7);
  CHECK(cfg.get_u32_list("absent", {1}) == std::vector<std::uint32_t>{1});

  CHECK_THROWS_AS(cfg.get_u64("neg", 0), ConfigError);
  CHECK_THROWS_AS(cfg.get_u64("junk", 0), ConfigError);
  CHECK_THROWS_AS(cfg.get_u32("wide", 0), ConfigError);
  CHECK_THROWS_AS(cfg.get_double("junk", 0), ConfigError);
  CHECK_THROWS_AS(cfg.get_bool("maybe", false), ConfigError);
  CHECK_THROWS_AS(cfg.get_u32_list("badlist", {}), ConfigError);

  try {
    cfg.get_u64("junk", 0);
    FAIL("no throw");
  } catch (const ConfigError& e) {
    CHECK(e.line() == 4);
  }
}

TEST_CASE("unread keys surface as typos") {
  const KvConfig cfg = KvConfig::parse_text("used = 1\nnot.used = 2\n");
  (void)cfg.get_u64("used", 0);
  const auto leftover = cfg.unread_keys();
  REQUIRE(leftover.size() == 1);
  CHECK(leftover[0] == "not.used");
}

TEST_CASE("pair lists parse dashes and radix prefixes") {
  const auto ps = parse_pair_list("0-1, 1-2 ,2-0");
  REQUIRE(ps.size() == 3);
  CHECK(ps[1] == std::pair<std::uint64_t, std::uint64_t>{1, 2});
  CHECK(parse_pair_list("").empty());
  CHECK(parse_pair_list("0x2-0x3")[0] ==
        std::pair<std::uint64_t, std::uint64_t>{2, 3});
  CHECK_THROWS_AS(parse_pair_list("5"), ConfigError);
  CHECK_THROWS_AS(parse_pair_list("a-b"), ConfigError);
}

TEST_CASE("a minimal experiment fills every default") {
  const auto spec =
      ExperimentSpec::from_config(KvConfig::parse_text("graph.file = g.csr\n"));
  CHECK(spec.graph_file == "g.csr");
  CHECK(!spec.recipe.has_value());
  CHECK(spec.setup.sampling.batch_size == 1024);
  CHECK(spec.setup.sampling.fanouts == std::vector<std::uint32_t>{25, 10});
  CHECK(spec.setup.sampling.with_replacement);
  CHECK(spec.setup.pipeline.workers == 12);
  CHECK(spec.setup.pipeline.batches == 100);
  CHECK(spec.setup.pipeline.feature_bytes_per_node == 64);
  CHECK(spec.setup.pipeline.path == AccessPath::InMemory);
  CHECK(spec.setup.ssd.channels == 8);
  CHECK(spec.setup.ssd.flash_read_us == doctest::Approx(60.0));
  CHECK(spec.format == "json");
}

TEST_CASE("experiment assembly rejects inconsistent sources") {
  SUBCASE("both graph and recipe") {
    CHECK_THROWS_AS(ExperimentSpec::from_config(KvConfig::parse_text(
                        "graph.file = g.csr\nrecipe.seed_nodes = 2\n")),
                    ConfigError);
  }
  SUBCASE("neither") {
    CHECK_THROWS_AS(ExperimentSpec::from_config(KvConfig::parse_text("sampling.seed = 1\n")),
                    ConfigError);
  }
  SUBCASE("seed file excludes inline seed") {
    CHECK_THROWS_AS(ExperimentSpec::from_config(KvConfig::parse_text(
                        "recipe.seed_file = s.csr\nrecipe.seed_nodes = 2\n")),
                    ConfigError);
  }
  SUBCASE("unknown key") {
    CHECK_THROWS_WITH_AS(ExperimentSpec::from_config(KvConfig::parse_text(
                             "graph.file = g.csr\nbogus.key = 1\n")),
                         "unknown key 'bogus.key'", ConfigError);
  }
  SUBCASE("format") {
    CHECK_THROWS_AS(ExperimentSpec::from_config(KvConfig::parse_text(
                        "graph.file = g.csr\noutput.format = xml\n")),
                    ConfigError);
  }
}

TEST_CASE("every knob reaches its field") {
  const auto spec = ExperimentSpec::from_config(KvConfig::parse_text(
      "recipe.seed_nodes = 3\n"
      "recipe.seed_edges = 0-1,1-2\n"
      "recipe.base_dim = 3\n"
      "recipe.base_cells = 0-0,1-1,2-2\n"
      "recipe.reps = 4\n"
      "sampling.batch_size = 64\n"
      "sampling.fanouts = 5,3\n"
      "sampling.with_replacement = false\n"
      "sampling.seed = 0xbeef\n"
      "walk.length = 4\n"
      "walk.walks_per_target = 2\n"
      "ssd.logical_block_bytes = 512\n"
      "ssd.flash_page_bytes = 2048\n"
      "ssd.channels = 4\n"
      "ssd.flash_read_us = 50\n"
      "ssd.dma_gbps = 1.6\n"
      "ssd.nvme_cmd_overhead_us = 8\n"
      "ssd.page_buffer_bytes = 1048576\n"
      "ssd.firmware_cores = 3\n"
      "ssd.core_sample_rate = 2e7\n"
      "ssd.poll_interval_us = 2\n"
      "host.dram_read_us_per_block = 0.1\n"
      "host.page_cache_pages = 99\n"
      "host.page_fault_us = 25\n"
      "host.scratchpad_blocks = 128\n"
      "isp.ftl_load = 0.5\n"
      "isp.record_translate_us = 0.3\n"
      "isp.command_setup_us = 0.5\n"
      "isp.subgraph_buffer_bytes = 4096\n"
      "isp.coalesce_granularity = 16\n"
      "isp.per_hop_round_trip = true\n"
      "pipeline.workers = 2\n"
      "pipeline.queue_depth = 7\n"
      "pipeline.gpu_batch_time_us = 123\n"
      "pipeline.batches = 9\n"
      "pipeline.feature_bytes_per_node = 32\n"
      "pipeline.path = isp\n"
      "pipeline.sampler = neighbor\n"
      "output.path = out.json\n"
      "output.format = csv\n"));

  REQUIRE(spec.recipe.has_value());
  CHECK(spec.recipe->seed_nodes == 3);
  CHECK(spec.recipe->seed_edges.size() == 2);
  CHECK(spec.recipe->base.dim == 3);
  CHECK(spec.recipe->base.cells.size() == 3);
  CHECK(spec.recipe->base.reps == 4);
  const SimSetup& s = spec.setup;
  CHECK(s.sampling.batch_size == 64);
  CHECK(s.sampling.fanouts == std::vector<std::uint32_t>{5, 3});
  CHECK(!s.sampling.with_replacement);
  CHECK(s.sampling.seed == 0xbeef);
  CHECK(s.walk.walk_length == 4);
  CHECK(s.ssd.logical_block_bytes == 512);
  CHECK(s.ssd.dma_gbps == doctest::Approx(1.6));
  CHECK(s.ssd.firmware_cores == 3);
  CHECK(s.host.page_cache_pages == 99);
  CHECK(s.host.scratchpad_blocks == 128);
  CHECK(s.isp.ftl_load == doctest::Approx(0.5));
  CHECK(s.isp.command_setup_us == doctest::Approx(0.5));
  CHECK(s.isp.coalesce_granularity == 16);
  CHECK(s.isp.per_hop_round_trip);
  CHECK(s.pipeline.workers == 2);
  CHECK(s.pipeline.queue_depth == 7);
  CHECK(s.pipeline.path == AccessPath::Isp);
  CHECK(spec.out_path == "out.json");
  CHECK(spec.format == "csv");
}

TEST_CASE("the resolved echo is a fixpoint") {
  const std::string variants[] = {
      "graph.file = g.csr\nsampling.seed = 11\npipeline.path = direct\n",
      "recipe.seed_nodes = 2\nrecipe.seed_edges = 0-1,1-0\nrecipe.reps = 2\n"
      "pipeline.sampler = walk\noutput.path = o.csv\noutput.format = csv\n"};
  for (const std::string& text : variants) {
    CAPTURE(text);
    const auto spec = ExperimentSpec::from_config(KvConfig::parse_text(text));
    const std::string once = spec.resolved_text();
    const auto again = ExperimentSpec::from_config(KvConfig::parse_text(once));
    CHECK(again.resolved_text() == once);
  }
}

TEST_CASE("graphs load from file or grow from the recipe") {
  const std::string dir = "/tmp/gnnsim_cfg_test";
  std::remove((dir + "_seed.csr").c_str());

  const std::vector<std::pair<NodeId, NodeId>> seed_edges{{0, 1}, {1, 0}};
  const CsrGraph seed = CsrGraph::from_edges(2, seed_edges);
  save_csr(seed, dir + "_seed.csr");

  const auto same = [](const CsrGraph& a, const CsrGraph& b) {
    return a.indptr == b.indptr && a.indices == b.indices;
  };
  KroneckerBase base;  // the config's default cell pattern
  base.dim = 2;
  base.cells = {{0, 0}, {0, 1}, {1, 0}};

  SUBCASE("direct file") {
    const auto spec = ExperimentSpec::from_config(
        KvConfig::parse_text("graph.file = " + dir + "_seed.csr\n"));
    CHECK(same(load_or_generate_graph(spec), seed));
  }
  SUBCASE("inline recipe") {
    const auto spec = ExperimentSpec::from_config(KvConfig::parse_text(
        "recipe.seed_nodes = 2\nrecipe.seed_edges = 0-1,1-0\nrecipe.reps = 1\n"));
    const CsrGraph g = load_or_generate_graph(spec);
    CHECK(same(g, kronecker_expand(seed, base)));
    CHECK(g.num_nodes() == 4);
    CHECK(g.num_edges() == 6);
  }
  SUBCASE("seed file recipe") {
    const auto spec = ExperimentSpec::from_config(KvConfig::parse_text(
        "recipe.seed_file = " + dir + "_seed.csr\nrecipe.reps = 2\n"));
    base.reps = 2;
    CHECK(same(load_or_generate_graph(spec), kronecker_expand(seed, base)));
  }
  std::remove((dir + "_seed.csr").c_str());
}
