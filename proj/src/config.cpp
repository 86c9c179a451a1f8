#include "gnnsim/config.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace gnnsim {

namespace {

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

}  // namespace

KvConfig KvConfig::parse_text(const std::string& text) {
  KvConfig cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string t = trim(line);
    if (t.empty()) continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ConfigError("expected `key = value`", lineno);
    const std::string key = trim(t.substr(0, eq));
    if (key.empty()) throw ConfigError("empty key", lineno);
    cfg.entries_[key] = Entry{trim(t.substr(eq + 1)), lineno, false};
  }
  return cfg;
}

KvConfig KvConfig::parse_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_text(buf.str());
}

void KvConfig::set(const std::string& key, const std::string& value) {
  entries_[key] = Entry{trim(value), 0, false};
}

bool KvConfig::has(const std::string& key) const { return entries_.count(key) != 0; }

std::string KvConfig::get_string(const std::string& key, const std::string& def) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return def;
  it->second.read = true;
  return it->second.value;
}

std::uint64_t KvConfig::get_u64(const std::string& key, std::uint64_t def) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return def;
  it->second.read = true;
  const std::string& v = it->second.value;
  try {
    std::size_t used = 0;
    const std::uint64_t out = std::stoull(v, &used, 0);
    if (used != v.size() || v.empty() || v[0] == '-') throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected unsigned integer, got '" + v + "'", it->second.line);
  }
}

std::uint32_t KvConfig::get_u32(const std::string& key, std::uint32_t def) const {
  const std::uint64_t v = get_u64(key, def);
  if (v > 0xffffffffull) {
    auto it = entries_.find(key);
    throw ConfigError(key + ": value does not fit in 32 bits", it->second.line);
  }
  return std::uint32_t(v);
}

double KvConfig::get_double(const std::string& key, double def) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return def;
  it->second.read = true;
  const std::string& v = it->second.value;
  try {
    std::size_t used = 0;
    const double out = std::stod(v, &used);
    if (used != v.size() || v.empty()) throw std::invalid_argument(v);
    return out;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected number, got '" + v + "'", it->second.line);
  }
}

bool KvConfig::get_bool(const std::string& key, bool def) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return def;
  it->second.read = true;
  const std::string& v = it->second.value;
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw ConfigError(key + ": expected boolean, got '" + v + "'", it->second.line);
}

std::vector<std::uint32_t> KvConfig::get_u32_list(const std::string& key,
                                                 std::vector<std::uint32_t> def) const {
  auto it = entries_.find(key);
  if (it == entries_.end()) return def;
  it->second.read = true;
  std::vector<std::uint32_t> out;
  std::istringstream in(it->second.value);
  std::string item;
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    try {
      std::size_t used = 0;
      const std::uint64_t v = std::stoull(t, &used, 0);
      if (used != t.size() || t.empty() || v > 0xffffffffull) throw std::invalid_argument(t);
      out.push_back(std::uint32_t(v));
    } catch (const std::exception&) {
      throw ConfigError(key + ": expected comma-separated integers", it->second.line);
    }
  }
  if (out.empty()) throw ConfigError(key + ": empty list", it->second.line);
  return out;
}

std::vector<std::string> KvConfig::unread_keys() const {
  std::vector<std::string> out;
  for (const auto& [k, e] : entries_) {
    if (!e.read) out.push_back(k);
  }
  return out;
}

std::vector<std::pair<std::uint64_t, std::uint64_t>> parse_pair_list(const std::string& text) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    const std::string t = trim(item);
    if (t.empty()) continue;
    const auto dash = t.find('-');
    if (dash == std::string::npos)
      throw ConfigError("expected `a-b` pair, got '" + t + "'");
    try {
      std::size_t ua = 0, ub = 0;
      const std::string left = trim(t.substr(0, dash)), right = trim(t.substr(dash + 1));
      const std::uint64_t a = std::stoull(left, &ua, 0);
      const std::uint64_t b = std::stoull(right, &ub, 0);
      if (ua != left.size() || ub != right.size()) throw std::invalid_argument(t);
      out.emplace_back(a, b);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("expected `a-b` pair, got '" + t + "'");
    }
  }
  return out;
}

ExperimentSpec ExperimentSpec::from_config(const KvConfig& cfg) {
  ExperimentSpec spec;

  spec.graph_file = cfg.get_string("graph.file", "");
  const bool recipe_present = cfg.has("recipe.seed_file") || cfg.has("recipe.seed_nodes") ||
                              cfg.has("recipe.seed_edges") || cfg.has("recipe.base_dim") ||
                              cfg.has("recipe.base_cells") || cfg.has("recipe.reps");
  if (!spec.graph_file.empty() && recipe_present)
    throw ConfigError("give either graph.file or a recipe.*, not both");
  if (spec.graph_file.empty() && !recipe_present)
    throw ConfigError("either graph.file or a recipe.* section is required");
  if (recipe_present) {
    GenRecipe r;
    r.seed_file = cfg.get_string("recipe.seed_file", "");
    r.seed_nodes = cfg.get_u64("recipe.seed_nodes", 0);
    for (auto [a, b] : parse_pair_list(cfg.get_string("recipe.seed_edges", "")))
      r.seed_edges.emplace_back(a, b);
    if (r.seed_file.empty() && r.seed_nodes == 0)
      throw ConfigError("recipe needs recipe.seed_file or inline recipe.seed_nodes/seed_edges");
    if (!r.seed_file.empty() && (r.seed_nodes != 0 || !r.seed_edges.empty()))
      throw ConfigError("recipe.seed_file excludes inline seed_nodes/seed_edges");
    r.base.dim = cfg.get_u32("recipe.base_dim", 2);
    const std::string cells = cfg.get_string("recipe.base_cells", "0-0,0-1,1-0");
    r.base.cells.clear();
    for (auto [a, b] : parse_pair_list(cells))
      r.base.cells.emplace_back(std::uint32_t(a), std::uint32_t(b));
    r.base.reps = cfg.get_u32("recipe.reps", 1);
    spec.recipe = std::move(r);
  }

  SimSetup& s = spec.setup;
  s.sampling.batch_size = cfg.get_u32("sampling.batch_size", s.sampling.batch_size);
  s.sampling.fanouts = cfg.get_u32_list("sampling.fanouts", s.sampling.fanouts);
  s.sampling.with_replacement = cfg.get_bool("sampling.with_replacement", true);
  s.sampling.seed = cfg.get_u64("sampling.seed", 0);
  s.walk.walk_length = cfg.get_u32("walk.length", s.walk.walk_length);
  s.walk.walks_per_target = cfg.get_u32("walk.walks_per_target", s.walk.walks_per_target);

  s.ssd.logical_block_bytes = cfg.get_u32("ssd.logical_block_bytes", s.ssd.logical_block_bytes);
  s.ssd.flash_page_bytes = cfg.get_u32("ssd.flash_page_bytes", s.ssd.flash_page_bytes);
  s.ssd.channels = cfg.get_u32("ssd.channels", s.ssd.channels);
  s.ssd.flash_read_us = cfg.get_double("ssd.flash_read_us", s.ssd.flash_read_us);
  s.ssd.dma_gbps = cfg.get_double("ssd.dma_gbps", s.ssd.dma_gbps);
  s.ssd.nvme_cmd_overhead_us = cfg.get_double("ssd.nvme_cmd_overhead_us", s.ssd.nvme_cmd_overhead_us);
  s.ssd.page_buffer_bytes = cfg.get_u64("ssd.page_buffer_bytes", s.ssd.page_buffer_bytes);
  s.ssd.firmware_cores = cfg.get_u32("ssd.firmware_cores", s.ssd.firmware_cores);
  s.ssd.core_sample_rate = cfg.get_double("ssd.core_sample_rate", s.ssd.core_sample_rate);
  s.ssd.poll_interval_us = cfg.get_double("ssd.poll_interval_us", s.ssd.poll_interval_us);

  s.host.dram_read_us_per_block =
      cfg.get_double("host.dram_read_us_per_block", s.host.dram_read_us_per_block);
  s.host.page_cache_pages = cfg.get_u64("host.page_cache_pages", s.host.page_cache_pages);
  s.host.page_fault_us = cfg.get_double("host.page_fault_us", s.host.page_fault_us);
  s.host.scratchpad_blocks = cfg.get_u32("host.scratchpad_blocks", s.host.scratchpad_blocks);

  s.isp.ftl_load = cfg.get_double("isp.ftl_load", s.isp.ftl_load);
  s.isp.record_translate_us = cfg.get_double("isp.record_translate_us", s.isp.record_translate_us);
  s.isp.command_setup_us = cfg.get_double("isp.command_setup_us", s.isp.command_setup_us);
  s.isp.subgraph_buffer_bytes =
      cfg.get_u64("isp.subgraph_buffer_bytes", s.isp.subgraph_buffer_bytes);
  s.isp.coalesce_granularity = cfg.get_u32("isp.coalesce_granularity", s.isp.coalesce_granularity);
  s.isp.per_hop_round_trip = cfg.get_bool("isp.per_hop_round_trip", false);

  s.pipeline.workers = cfg.get_u32("pipeline.workers", s.pipeline.workers);
  s.pipeline.queue_depth = cfg.get_u32("pipeline.queue_depth", s.pipeline.queue_depth);
  s.pipeline.gpu_batch_time_us = cfg.get_double("pipeline.gpu_batch_time_us", s.pipeline.gpu_batch_time_us);
  s.pipeline.batches = cfg.get_u32("pipeline.batches", s.pipeline.batches);
  s.pipeline.feature_bytes_per_node =
      cfg.get_u32("pipeline.feature_bytes_per_node", s.pipeline.feature_bytes_per_node);
  s.pipeline.path = parse_access_path(cfg.get_string("pipeline.path", "in_memory"));
  s.pipeline.sampler = parse_sampler_kind(cfg.get_string("pipeline.sampler", "neighbor"));

  spec.out_path = cfg.get_string("output.path", "");
  spec.format = cfg.get_string("output.format", "json");
  if (spec.format != "json" && spec.format != "csv")
    throw ConfigError("output.format must be json or csv");

  if (auto leftover = cfg.unread_keys(); !leftover.empty())
    throw ConfigError("unknown key '" + leftover.front() + "'");
  return spec;
}

namespace {

std::string pair_list_text(const std::vector<std::pair<NodeId, NodeId>>& ps) {
  std::string s;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(ps[i].first) + "-" + std::to_string(ps[i].second);
  }
  return s;
}

std::string u32_list_text(const std::vector<std::uint32_t>& vs) {
  std::string s;
  for (std::size_t i = 0; i < vs.size(); ++i) {
    if (i) s += ',';
    s += std::to_string(vs[i]);
  }
  return s;
}

std::string num_text(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

std::string ExperimentSpec::resolved_text() const {
  std::ostringstream os;
  if (!graph_file.empty()) os << "graph.file = " << graph_file << "\n";
  if (recipe) {
    if (!recipe->seed_file.empty()) {
      os << "recipe.seed_file = " << recipe->seed_file << "\n";
    } else {
      os << "recipe.seed_nodes = " << recipe->seed_nodes << "\n";
      os << "recipe.seed_edges = " << pair_list_text(recipe->seed_edges) << "\n";
    }
    os << "recipe.base_dim = " << recipe->base.dim << "\n";
    std::vector<std::pair<NodeId, NodeId>> cells;
    for (auto [a, b] : recipe->base.cells) cells.emplace_back(a, b);
    os << "recipe.base_cells = " << pair_list_text(cells) << "\n";
    os << "recipe.reps = " << recipe->base.reps << "\n";
  }
  const SimSetup& s = setup;
  os << "sampling.batch_size = " << s.sampling.batch_size << "\n";
  os << "sampling.fanouts = " << u32_list_text(s.sampling.fanouts) << "\n";
  os << "sampling.with_replacement = " << (s.sampling.with_replacement ? "true" : "false") << "\n";
  os << "sampling.seed = " << s.sampling.seed << "\n";
  os << "walk.length = " << s.walk.walk_length << "\n";
  os << "walk.walks_per_target = " << s.walk.walks_per_target << "\n";
  os << "ssd.logical_block_bytes = " << s.ssd.logical_block_bytes << "\n";
  os << "ssd.flash_page_bytes = " << s.ssd.flash_page_bytes << "\n";
  os << "ssd.channels = " << s.ssd.channels << "\n";
  os << "ssd.flash_read_us = " << num_text(s.ssd.flash_read_us) << "\n";
  os << "ssd.dma_gbps = " << num_text(s.ssd.dma_gbps) << "\n";
  os << "ssd.nvme_cmd_overhead_us = " << num_text(s.ssd.nvme_cmd_overhead_us) << "\n";
  os << "ssd.page_buffer_bytes = " << s.ssd.page_buffer_bytes << "\n";
  os << "ssd.firmware_cores = " << s.ssd.firmware_cores << "\n";
  os << "ssd.core_sample_rate = " << num_text(s.ssd.core_sample_rate) << "\n";
  os << "ssd.poll_interval_us = " << num_text(s.ssd.poll_interval_us) << "\n";
  os << "host.dram_read_us_per_block = " << num_text(s.host.dram_read_us_per_block) << "\n";
  os << "host.page_cache_pages = " << s.host.page_cache_pages << "\n";
  os << "host.page_fault_us = " << num_text(s.host.page_fault_us) << "\n";
  os << "host.scratchpad_blocks = " << s.host.scratchpad_blocks << "\n";
  os << "isp.ftl_load = " << num_text(s.isp.ftl_load) << "\n";
  os << "isp.record_translate_us = " << num_text(s.isp.record_translate_us) << "\n";
  os << "isp.command_setup_us = " << num_text(s.isp.command_setup_us) << "\n";
  os << "isp.subgraph_buffer_bytes = " << s.isp.subgraph_buffer_bytes << "\n";
  os << "isp.coalesce_granularity = " << s.isp.coalesce_granularity << "\n";
  os << "isp.per_hop_round_trip = " << (s.isp.per_hop_round_trip ? "true" : "false") << "\n";
  os << "pipeline.workers = " << s.pipeline.workers << "\n";
  os << "pipeline.queue_depth = " << s.pipeline.queue_depth << "\n";
  os << "pipeline.gpu_batch_time_us = " << num_text(s.pipeline.gpu_batch_time_us) << "\n";
  os << "pipeline.batches = " << s.pipeline.batches << "\n";
  os << "pipeline.feature_bytes_per_node = " << s.pipeline.feature_bytes_per_node << "\n";
  os << "pipeline.path = " << to_string(s.pipeline.path) << "\n";
  os << "pipeline.sampler = " << to_string(s.pipeline.sampler) << "\n";
  if (!out_path.empty()) os << "output.path = " << out_path << "\n";
  os << "output.format = " << format << "\n";
  return os.str();
}

CsrGraph load_or_generate_graph(const ExperimentSpec& spec) {
  if (!spec.graph_file.empty()) return load_csr(spec.graph_file);
  const GenRecipe& r = *spec.recipe;
  CsrGraph seed;
  if (!r.inline_seed()) {
    seed = load_csr(r.seed_file);
  } else {
    seed = CsrGraph::from_edges(r.seed_nodes, r.seed_edges);
  }
  return kronecker_expand(seed, r.base);
}

}  // namespace gnnsim
