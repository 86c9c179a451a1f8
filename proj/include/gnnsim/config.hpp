#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "gnnsim/kronecker.hpp"
#include "gnnsim/pipeline.hpp"

namespace gnnsim {

// Line-oriented `key = value` settings with `#` comments and dotted key
// prefixes. Later assignments win, which is also how command-line
// overrides are layered on top of a file.
class KvConfig {
 public:
  static KvConfig parse_file(const std::string& path);
  static KvConfig parse_text(const std::string& text);

  void set(const std::string& key, const std::string& value);

  bool has(const std::string& key) const;
  std::string get_string(const std::string& key, const std::string& def) const;
  std::uint64_t get_u64(const std::string& key, std::uint64_t def) const;
  std::uint32_t get_u32(const std::string& key, std::uint32_t def) const;
  double get_double(const std::string& key, double def) const;
  bool get_bool(const std::string& key, bool def) const;
  std::vector<std::uint32_t> get_u32_list(const std::string& key,
                                          std::vector<std::uint32_t> def) const;

  // Keys never read by any getter; from_config treats them as typos.
  std::vector<std::string> unread_keys() const;

 private:
  struct Entry {
    std::string value;
    int line = 0;
    mutable bool read = false;
  };
  std::map<std::string, Entry> entries_;
};

// How to synthesize the input graph when no file is given: a seed graph
// (from a CSR file or inline edges) grown by repeated base products.
struct GenRecipe {
  std::string seed_file;
  std::uint64_t seed_nodes = 0;
  std::vector<std::pair<NodeId, NodeId>> seed_edges;
  KroneckerBase base;

  bool inline_seed() const { return seed_file.empty(); }
};

// One experiment, fully specified: the graph source plus every simulator
// knob. Built from a KvConfig with defaults filled in.
struct ExperimentSpec {
  std::string graph_file;           // exactly one of graph_file / recipe
  std::optional<GenRecipe> recipe;
  SimSetup setup;
  std::string out_path;             // empty = stdout
  std::string format = "json";

  static ExperimentSpec from_config(const KvConfig& cfg);

  // Effective settings echoed back in config syntax, defaults included.
  std::string resolved_text() const;
};

// Loads graph_file or expands the recipe.
CsrGraph load_or_generate_graph(const ExperimentSpec& spec);

// "0-1,1-2,2-0" -> {(0,1),(1,2),(2,0)}; used for inline edge and cell lists.
std::vector<std::pair<std::uint64_t, std::uint64_t>> parse_pair_list(const std::string& text);

}  // namespace gnnsim
